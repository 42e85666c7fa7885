"""Homogeneous sets and the seed partial colorings for the search.

A homogeneous set is built rowwise from a spec X = (x0, x1, ..., x_{n-1})
with x0 in {0..3} and the rest 0/1: the youngest x0 children of the root
are colored 1, then every row-i node N colors its youngest C(N) + x_i
children 1.  The anti-canonical variant colors oldest children instead.

Any canonical even-size PDS is forced on rows 0, 1 and n to one of
2^{n+1} - 1 partial colorings derived from homogeneous sets (the
Leifman-Muzychuk restriction).  Three constructions produce them:

  (1) "plus":    rows 1 and n of S_X, for x0 in {0, 2};
  (2) "minus2":  same plus every row-n sibling block disjoint from S_X
                 fully colored, for x0 in {0, 2};
  (3) "minus3":  the complement construction from the anti-canonical set,
                 for x0 in {1, 3}.

Every coloring of class (1) coincides with one of class (2) or (3); the
generator builds all three, deduplicates on content, asserts the expected
count, and keeps every (kind, X) provenance that produced each seed.
Positive Latin-square PDS restrict to a "plus" seed, negative ones to a
"minus" seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np

from .orbit_tree import NodeId, OrbitTree

HomogeneousSpec = Tuple[int, ...]


def _validate_spec(tree: OrbitTree, spec: HomogeneousSpec) -> None:
    if len(spec) != tree.n:
        raise ValueError(f"spec must have length n={tree.n}, got {spec!r}")
    if not 0 <= spec[0] <= 3:
        raise ValueError("x0 must be in 0..3")
    if any(x not in (0, 1) for x in spec[1:]):
        raise ValueError("x1..x_{n-1} must be 0/1")


def _homogeneous(tree: OrbitTree, spec: HomogeneousSpec, youngest: bool) -> np.ndarray:
    _validate_spec(tree, spec)
    colors = np.zeros(tree.size, dtype=np.uint8)
    level1 = [tree.index((1, j)) for j in range(3)]
    chosen = level1[: spec[0]] if youngest else level1[3 - spec[0] :]
    colors[chosen] = 1
    for i in range(1, tree.n):
        for node in tree.level_nodes(i):
            count = int(colors[tree.index(node)]) + spec[i]
            kids = [tree.index(c) for c in tree.children(node)]
            chosen = kids[:count] if youngest else kids[len(kids) - count :]
            colors[chosen] = 1
    return colors


def canonical_homogeneous(tree: OrbitTree, spec: HomogeneousSpec) -> np.ndarray:
    """S_X: youngest-children homogeneous set (always a canonical coloring)."""
    return _homogeneous(tree, spec, youngest=True)


def anti_canonical_homogeneous(tree: OrbitTree, spec: HomogeneousSpec) -> np.ndarray:
    """S'_X: oldest-children mirror of the homogeneous construction."""
    return _homogeneous(tree, spec, youngest=False)


@dataclass(frozen=True)
class SeedColoring:
    """A partial coloring fixing rows 0, 1 and n (rows 2..n-1 are free)."""

    n: int
    row1: Tuple[int, ...]
    rown: Tuple[int, ...]
    provenance: Tuple[Tuple[str, HomogeneousSpec], ...]

    @property
    def kinds(self) -> Tuple[str, ...]:
        return tuple(sorted({kind for kind, _ in self.provenance}))

    def assignments(self, tree: OrbitTree) -> Dict[int, int]:
        """node index -> color for the assigned rows."""
        assert tree.n == self.n
        out = {0: 0}
        for j, value in enumerate(self.row1):
            out[tree.index((1, j))] = value
        for j, value in enumerate(self.rown):
            out[tree.index((self.n, j))] = value
        return out

    def key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return (self.row1, self.rown)


def _restriction(tree: OrbitTree, colors: np.ndarray) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    row1 = tuple(int(colors[tree.index((1, j))]) for j in range(3))
    rown = tuple(
        int(colors[tree.index((tree.n, j))]) for j in range(tree.row_width(tree.n))
    )
    return row1, rown


def _fill_empty_blocks(tree: OrbitTree, colors: np.ndarray) -> np.ndarray:
    """Color both members of every row-n sibling block disjoint from S."""
    out = colors.copy()
    n = tree.n
    for j in range(0, tree.row_width(n), 2):
        a, b = tree.index((n, j)), tree.index((n, j + 1))
        if colors[a] == 0 and colors[b] == 0:
            out[a] = out[b] = 1
    return out


def seed_restriction(
    tree: OrbitTree, spec: HomogeneousSpec, kind: str
) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """(row1, rown) content of the seed of the given kind for spec X."""
    if kind == "plus":
        if spec[0] not in (0, 2):
            raise ValueError("plus seeds need x0 in {0, 2}")
        return _restriction(tree, canonical_homogeneous(tree, spec))
    if kind == "minus2":
        if spec[0] not in (0, 2):
            raise ValueError("minus2 seeds need x0 in {0, 2}")
        filled = _fill_empty_blocks(tree, canonical_homogeneous(tree, spec))
        return _restriction(tree, filled)
    if kind == "minus3":
        if spec[0] not in (1, 3):
            raise ValueError("minus3 seeds need x0 in {1, 3}")
        anti = anti_canonical_homogeneous(tree, spec)
        filled = _fill_empty_blocks(tree, anti)
        row1, rown = _restriction(tree, anti)
        _, rown_filled = _restriction(tree, filled)
        return (
            tuple(1 - v for v in row1),
            tuple(1 - v for v in rown_filled),
        )
    raise ValueError(f"unknown seed kind {kind!r}")


def seed_partial_colorings(tree: OrbitTree) -> List[SeedColoring]:
    """All distinct seeds, sorted by content, with full provenance.

    Raises AssertionError if the deduplicated count differs from
    2^{n+1} - 1, which would signal a construction bug.
    """
    n = tree.n
    found: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], List[Tuple[str, HomogeneousSpec]]] = {}
    tails = list(product((0, 1), repeat=n - 1))
    for kind, x0s in (("plus", (0, 2)), ("minus2", (0, 2)), ("minus3", (1, 3))):
        for x0 in x0s:
            for tail in tails:
                spec = (x0,) + tail
                key = seed_restriction(tree, spec, kind)
                found.setdefault(key, []).append((kind, spec))
    minus_count = len(
        {k for k, prov in found.items() if any(kind != "plus" for kind, _ in prov)}
    )
    assert len(found) == minus_count == (1 << (n + 1)) - 1, (
        f"expected {(1 << (n + 1)) - 1} seeds, got {len(found)} "
        f"({minus_count} of minus kind)"
    )
    return [
        SeedColoring(n, row1, rown, tuple(prov))
        for (row1, rown), prov in sorted(found.items())
    ]
