"""Feasible positive eigenvalues for a seed, by set-valued elimination.

Fixing a seed C (rows 0, 1, n) and a candidate positive eigenvalue r,
every nontrivial character chi yields a statement

    chi(C') in {r}                       if chi is owned by a row-n node
                                         whose sibling block is colored
                                         (1,0) or (0,1) in the seed and
                                         the owner carries the 1,
    chi(C') in {r - 2^n}                 same but the owner carries the 0,
    chi(C') in {r, r - 2^n}              otherwise,

where chi(C') is an integer linear form in the free row-2..n-1 variables
plus a constant.  Gaussian elimination runs on the augmented matrix with
sumset arithmetic on the right-hand sides (c*M = {c*m}, M + N pointwise).
The row operations are not reversible, so only inconsistency is
meaningful: a zero row whose right-hand side misses 0 proves that no
extension of the seed has positive eigenvalue r.  Every surviving r is
"feasible"; the guarantee is one-sided (no PDS is lost, some feasible r
find nothing).

Elimination schedule (any schedule yields a sound prune; this one is
chosen for strength and documented here):

  * forward elimination over the columns in the linear order of the
    variable nodes;
  * the pivot for a column is the candidate row whose *initial*
    right-hand side was smallest, ties broken by row order, so that the
    singleton rows contributed by unequally-colored row-n sibling pairs
    are combined with each other before any two-element set can dilute
    them (sumsets of singletons stay singletons, which is where all the
    pruning power lives);
  * rows are kept as primitive integer vectors (cross-multiply update,
    then divide by the gcd), with the right-hand sides scaled along.

Because the coefficients do not depend on r, the pivots are the same for
every r; the elimination therefore runs once per seed with right-hand
side elements tracked as affine functions alpha*r + beta, and each
candidate r is tested against the resulting zero rows.  This matches the
per-r elimination arithmetic exactly, which the test suite verifies
against the concrete-r reference implementation below.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .characters import CharacterTable, LinearValue, evaluate
from .orbit_tree import NodeId, OrbitTree
from .seeds import SeedColoring

# Right-hand sides larger than this are replaced by an always-satisfied
# row, which can only weaken the prune, never make it unsound.
_MAX_RHS = 1024

Affine = Tuple[Fraction, Fraction]  # (alpha, beta) standing for alpha*r + beta


@dataclass
class SetAugmentedMatrix:
    """[A | v] for one concrete r: integer-linear rows with finite
    admissible-value sets on the right."""

    columns: List[NodeId]  # variable nodes in linear order
    rows: List[Tuple[List[Fraction], FrozenSet[Fraction]]]


def eigenvalue_candidates(n: int) -> List[int]:
    """R = {2, 4, ..., 2^n - 2}."""
    return list(range(2, 1 << n, 2))


def _seed_coloring_with_variables(tree: OrbitTree, seed: SeedColoring):
    coloring: Dict[NodeId, Optional[int]] = {}
    assigned = seed.assignments(tree)
    for idx, node in enumerate(tree.node_ids):
        coloring[node] = assigned.get(idx)  # None marks a variable
    return coloring


def _raw_rows(
    tree: OrbitTree, chars: CharacterTable, seed: SeedColoring
) -> Tuple[List[NodeId], List[Tuple[List[int], Set[Affine]]]]:
    """Integer coefficient rows with affine-in-r right-hand sides."""
    n = tree.n
    shift = 1 << n
    columns = [node for level in range(2, n) for node in tree.level_nodes(level)]
    col_pos = {node: i for i, node in enumerate(columns)}
    coloring = _seed_coloring_with_variables(tree, seed)
    one = Fraction(1)
    rows: List[Tuple[List[int], Set[Affine]]] = []
    for ci in range(1, tree.size):  # skip the trivial character
        char = chars.chars[ci]
        value = evaluate(char, coloring)
        if isinstance(value, LinearValue):
            constant, terms = value.constant, value.terms
        else:
            constant, terms = value, {}
        coeffs = [0] * len(columns)
        for node, coeff in terms.items():
            coeffs[col_pos[node]] = coeff
        owner = char.owner
        rhs: Set[Affine] = {
            (one, Fraction(-constant)),
            (one, Fraction(-shift - constant)),
        }
        if owner[0] == n:
            own = seed.rown[owner[1]]
            sib = seed.rown[owner[1] ^ 1]
            if own != sib:
                offset = -constant if own == 1 else -shift - constant
                rhs = {(one, Fraction(offset))}
        rows.append((coeffs, rhs))
    return columns, rows


def build_system(
    tree: OrbitTree, chars: CharacterTable, seed: SeedColoring, r: int
) -> SetAugmentedMatrix:
    """The augmented matrix for one concrete candidate eigenvalue r."""
    if r % 2 or not 2 <= r <= (1 << tree.n) - 2:
        raise ValueError(f"r must be even in [2, 2^n - 2], got {r}")
    columns, rows = _raw_rows(tree, chars, seed)
    concrete = [
        (
            [Fraction(c) for c in coeffs],
            frozenset(alpha * r + beta for alpha, beta in rhs),
        )
        for coeffs, rhs in rows
    ]
    return SetAugmentedMatrix(columns, concrete)


def _pivot_order(sizes: List[int]) -> List[int]:
    """Row priority: smallest initial right-hand side first, then row order."""
    return sorted(range(len(sizes)), key=lambda ri: (sizes[ri], ri))


def eliminate_concrete(matrix: SetAugmentedMatrix) -> bool:
    """Reference per-r elimination over exact rationals; True = consistent.

    Mirrors the parametric fast path step for step; kept for validation.
    """
    rows = [([c for c in coeffs], set(rhs)) for coeffs, rhs in matrix.rows]
    ncols = len(matrix.columns)
    priority = _pivot_order([len(rhs) for _, rhs in matrix.rows])
    unused = set(range(len(rows)))
    for col in range(ncols):
        pivot = next(
            (ri for ri in priority if ri in unused and rows[ri][0][col] != 0), None
        )
        if pivot is None:
            continue
        unused.discard(pivot)
        pcoeffs, prhs = rows[pivot]
        p = pcoeffs[col]
        for ri in sorted(unused):
            coeffs, rhs = rows[ri]
            a = coeffs[col]
            if a == 0:
                continue
            factor = a / p
            new_coeffs = [c - factor * q for c, q in zip(coeffs, pcoeffs)]
            new_rhs = {v - factor * w for v in rhs for w in prhs}
            if len(new_rhs) > _MAX_RHS:
                new_coeffs, new_rhs = [Fraction(0)] * ncols, {Fraction(0)}
            rows[ri] = (new_coeffs, new_rhs)
    return all(
        0 in rhs
        for ri in unused
        for coeffs, rhs in [rows[ri]]
        if all(c == 0 for c in coeffs)
    )


def _parametric_zero_rows(
    tree: OrbitTree, chars: CharacterTable, seed: SeedColoring
) -> List[Set[Affine]]:
    """Forward elimination; returns the zero rows' affine RHS sets."""
    columns, raw = _raw_rows(tree, chars, seed)
    ncols = len(columns)
    work = [(list(coeffs), set(rhs)) for coeffs, rhs in raw]
    priority = _pivot_order([len(rhs) for _, rhs in raw])
    unused = set(range(len(work)))
    for col in range(ncols):
        pivot = next(
            (ri for ri in priority if ri in unused and work[ri][0][col] != 0), None
        )
        if pivot is None:
            continue
        unused.discard(pivot)
        pcoeffs, prhs = work[pivot]
        p = pcoeffs[col]
        for ri in sorted(unused):
            coeffs, rhs = work[ri]
            a = coeffs[col]
            if a == 0:
                continue
            # row <- (p*row - a*pivot_row) / g, kept primitive.
            new_coeffs = [p * c - a * q for c, q in zip(coeffs, pcoeffs)]
            g = 0
            for c in new_coeffs:
                g = gcd(g, c)
            scale = Fraction(1, g) if g > 1 else Fraction(1)
            if g > 1:
                new_coeffs = [c // g for c in new_coeffs]
            new_rhs = {
                ((p * ua - a * va) * scale, (p * ub - a * vb) * scale)
                for ua, ub in rhs
                for va, vb in prhs
            }
            if len(new_rhs) > _MAX_RHS:
                new_coeffs, new_rhs = [0] * ncols, {(Fraction(0), Fraction(0))}
            work[ri] = (new_coeffs, new_rhs)
    return [
        rhs
        for ri in unused
        for coeffs, rhs in [work[ri]]
        if all(c == 0 for c in coeffs)
    ]


_CACHE: Dict[Tuple[int, Tuple[Tuple[int, ...], Tuple[int, ...]]], FrozenSet[int]] = {}


def feasible_eigenvalues(
    tree: OrbitTree, chars: CharacterTable, seed: SeedColoring
) -> List[int]:
    """The subset of R surviving the elimination test for this seed."""
    key = (tree.n, seed.key())
    cached = _CACHE.get(key)
    if cached is None:
        zero_rows = _parametric_zero_rows(tree, chars, seed)
        cached = frozenset(
            r
            for r in eigenvalue_candidates(tree.n)
            if all(any(alpha * r + beta == 0 for alpha, beta in rhs) for rhs in zero_rows)
        )
        _CACHE[key] = cached
    return sorted(cached)


def is_feasible(
    tree: OrbitTree, chars: CharacterTable, seed: SeedColoring, r: int
) -> bool:
    if r % 2 or not 2 <= r <= (1 << tree.n) - 2:
        raise ValueError(f"r must be even in [2, 2^n - 2], got {r}")
    return r in feasible_eigenvalues(tree, chars, seed)
