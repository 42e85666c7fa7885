"""Exact enumeration and verification of partial difference sets in
C_{2^n} x C_{2^n}.

The library factors into: the orbit tree of the group under odd
multipliers (`orbit_tree`), integer-valued character patterns on it
(`characters`), canonical colorings under rooted-tree automorphisms
(`canonical`), the forced rows-0/1/n seeds (`seeds`), the set-valued
eigenvalue feasibility test (`feasibility`), the propagation-driven
search (`search`), independent verification and classification
(`verify`), orbit-stabilizer counting (`counting`), and bit-exact text
formats (`serialization`).  `cli` wires everything into the `pdskit`
command.
"""

from .canonical import (
    canonicalize,
    group_aut_order,
    is_canonical,
    orbit_size,
    stabilizer_order,
    tree_aut_order,
)
from .characters import CharacterTable, LinearValue, TreeCharacter, character_for, eigenvalue_multiplicity, evaluate
from .feasibility import build_system, eigenvalue_candidates, feasible_eigenvalues, is_feasible
from .orbit_tree import OrbitTree, build_tree, linear_index, node_of_element, path_to_root
from .search import SearchStats, enumerate_all, search
from .seeds import (
    SeedColoring,
    anti_canonical_homogeneous,
    canonical_homogeneous,
    seed_partial_colorings,
)
from .serialization import RecordText, decode, encode, encode_runlength, read_records, write_records
from .verify import (
    PdsRecord,
    classify,
    classify_k,
    complement,
    eigenvalue_profile,
    is_pds_by_definition,
    is_pds_by_eigenvalues,
    latin_square_sign,
)

__version__ = "0.1.0"
