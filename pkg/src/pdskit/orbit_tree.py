"""Orbit tree of G_n = C_{2^n} x C_{2^n} under the odd-multiplier action.

Group elements are integer numerator pairs (a, b) with 0 <= a, b < 2^n,
standing for (a/2^n, b/2^n) under addition mod 1.  Scalar multiplication
by any odd unit u permutes the group; the orbits of that action are the
nodes of a rooted tree:

  * level 0 holds the root {(0,0)};
  * level i (1 <= i <= n) holds the orbits of the elements of order 2^i,
    each of size 2^{i-1};
  * the parent of an orbit is the orbit containing the doubles of its
    elements, so the three order-2 singletons hang off the root and every
    deeper node has exactly two children.

Node (i, j) denotes the j-th node of row i; the children of (i, j) are
(i+1, 2j) and (i+1, 2j+1).  Child 2j is the orbit containing the exact
componentwise half of the parent's representative, where representatives
are the lexicographically least pair in each orbit.  Rows are concatenated
in row-major order to give the linear order used for serialization.
"""

from __future__ import annotations

from math import gcd
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np

Element = Tuple[int, int]
NodeId = Tuple[int, int]

# Anything accepted as a coloring: node -> color mapping or a flat array in
# linear order.
ColoringLike = Union[Mapping[NodeId, int], Sequence[int], np.ndarray]


def element_level(g: Element, n: int) -> int:
    """Level of g in T_n, i.e. log2 of the order of g."""
    modulus = 1 << n
    order = modulus // gcd(modulus, gcd(g[0], g[1]))
    return order.bit_length() - 1


class OrbitTree:
    """The orbit tree T_n, immutable once built (see :func:`build_tree`)."""

    def __init__(self, n: int, rows: List[List[Tuple[Element, ...]]]):
        self.n = n
        self.rows = rows  # rows[i][j] = sorted tuple of elements of node (i, j)
        self.node_ids: List[NodeId] = [
            (i, j) for i in range(len(rows)) for j in range(len(rows[i]))
        ]
        self._index: Dict[NodeId, int] = {
            node: k for k, node in enumerate(self.node_ids)
        }
        self.size = len(self.node_ids)
        self.node_sizes = np.array(
            [len(rows[i][j]) for (i, j) in self.node_ids], dtype=np.int64
        )
        self._node_of: Dict[Element, NodeId] = {}
        for (i, j) in self.node_ids:
            for g in rows[i][j]:
                self._node_of[g] = (i, j)

    # -- structure ---------------------------------------------------------

    def elements(self, node: NodeId) -> Tuple[Element, ...]:
        return self.rows[node[0]][node[1]]

    def representative(self, node: NodeId) -> Element:
        return self.rows[node[0]][node[1]][0]

    def row_width(self, i: int) -> int:
        return 1 if i == 0 else 3 << (i - 1)

    def level_nodes(self, i: int) -> List[NodeId]:
        return [(i, j) for j in range(len(self.rows[i]))]

    def parent(self, node: NodeId) -> NodeId:
        i, j = node
        if i == 0:
            raise ValueError("root has no parent")
        return (0, 0) if i == 1 else (i - 1, j // 2)

    def children(self, node: NodeId) -> List[NodeId]:
        i, j = node
        if i >= self.n:
            return []
        if i == 0:
            return [(1, 0), (1, 1), (1, 2)]
        return [(i + 1, 2 * j), (i + 1, 2 * j + 1)]

    def index(self, node: NodeId) -> int:
        """0-based position of node in the row-major linear order."""
        return self._index[node]

    def node_at(self, index: int) -> NodeId:
        return self.node_ids[index]

    def subtree_indices(self, node: NodeId) -> np.ndarray:
        """0-based indices of node and all descendants, in row-major order."""
        i, j = node
        out = []
        width = 1
        for row in range(i, self.n + 1):
            first = j * width if i > 0 else 0
            last = first + width if i > 0 else len(self.rows[row])
            out.extend(self._index[(row, col)] for col in range(first, last))
            width *= 2 if row >= 1 else 3
        return np.array(out, dtype=np.int64)

    # -- colorings ---------------------------------------------------------

    def color_array(self, coloring: ColoringLike) -> np.ndarray:
        """Normalize a coloring to a flat uint8 array in linear order."""
        if isinstance(coloring, Mapping):
            arr = np.zeros(self.size, dtype=np.uint8)
            for node, value in coloring.items():
                arr[self._index[node]] = value
            return arr
        arr = np.asarray(coloring, dtype=np.uint8)
        if arr.shape != (self.size,):
            raise ValueError(f"expected {self.size} colors, got {arr.shape}")
        return arr.copy()

    def color_dict(self, coloring: ColoringLike) -> Dict[NodeId, int]:
        arr = self.color_array(coloring)
        return {node: int(arr[k]) for k, node in enumerate(self.node_ids)}

    def selected_elements(self, coloring: ColoringLike) -> List[Element]:
        """The subset of G_n given by the nodes colored 1."""
        arr = self.color_array(coloring)
        out: List[Element] = []
        for k in np.flatnonzero(arr):
            out.extend(self.elements(self.node_ids[k]))
        return out

    def coloring_size(self, coloring: ColoringLike) -> int:
        """|S| of the subset selected by the coloring."""
        return int(self.color_array(coloring) @ self.node_sizes)


def build_tree(n: int) -> OrbitTree:
    """Build T_n.  Callers normally want n >= 2; n in {0, 1} are the
    degenerate trees used by recursion base cases."""
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"tree depth must be a non-negative integer, got {n!r}")
    if n == 0:
        return OrbitTree(0, [[((0, 0),)]])

    modulus = 1 << n
    half = modulus >> 1
    units = range(1, modulus, 2)

    # Multiplier orbits, grouped by level.
    seen = set()
    by_level: List[List[Tuple[Element, ...]]] = [[] for _ in range(n + 1)]
    for a in range(modulus):
        for b in range(modulus):
            if (a, b) in seen:
                continue
            orbit = {((u * a) % modulus, (u * b) % modulus) for u in units}
            seen.update(orbit)
            by_level[element_level((a, b), n)].append(tuple(sorted(orbit)))

    # Row 0 and row 1 have a fixed order; deeper rows follow the parents.
    rows: List[List[Tuple[Element, ...]]] = [[((0, 0),)]]
    level1 = [((0, half),), ((half, 0),), ((half, half),)]
    assert sorted(by_level[1]) == sorted(level1)
    rows.append(level1)

    node_of: Dict[Element, Tuple[Element, ...]] = {}
    for level in range(1, n + 1):
        for orbit in by_level[level]:
            for g in orbit:
                node_of[g] = orbit

    for level in range(2, n + 1):
        # Group this level's orbits under their parent (the doubled orbit).
        kids: Dict[Tuple[Element, ...], List[Tuple[Element, ...]]] = {}
        for orbit in by_level[level]:
            a, b = orbit[0]
            parent = node_of[((2 * a) % modulus, (2 * b) % modulus)]
            kids.setdefault(parent, []).append(orbit)
        row: List[Tuple[Element, ...]] = []
        for parent in rows[level - 1]:
            pair = kids[parent]
            assert len(pair) == 2
            ra, rb = parent[0]
            first = node_of[(ra // 2, rb // 2)]  # exact componentwise half
            second = pair[0] if pair[1] == first else pair[1]
            assert first in pair and second != first
            row.extend([first, second])
        rows.append(row)

    tree = OrbitTree(n, rows)
    assert tree.size == 3 * (1 << n) - 2
    return tree


# -- module-level operations mirroring the tree API ------------------------


def node_of_element(tree: OrbitTree, g: Element) -> NodeId:
    """The unique node whose orbit contains g."""
    modulus = 1 << tree.n
    return tree._node_of[(g[0] % modulus, g[1] % modulus)]


def linear_index(tree: OrbitTree, node: NodeId) -> int:
    """1-based position of node in the row-major linear order."""
    return tree.index(node) + 1


def path_to_root(tree: OrbitTree, node: NodeId) -> List[NodeId]:
    """Nodes from node up to and including the root."""
    path = [node]
    while path[-1] != (0, 0):
        path.append(tree.parent(path[-1]))
    return path
