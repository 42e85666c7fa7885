"""Tree characters: the finitely many value patterns of group characters on T_n.

Every complex character of G_n is constant on multiplier orbits up to the
orbit of the character itself, so all characters in one dual-group orbit
share a single integer-valued pattern on the nodes of T_n.  There is
exactly one such pattern per node A (its "owner"):

  * for A at level n, the pattern is +|M| on the path from A to the root,
    -|M| on the off-path children of path nodes, and 0 elsewhere;
  * for lower owners the pattern is obtained from a child's pattern by
    "squaring": supports become positive, and the children of previously
    negative nodes become negative;
  * the root's pattern is +|M| everywhere (the trivial character).

The number of complex characters realizing the pattern owned by A is |A|
(1 for the root, 2^{level-1} otherwise); these multiplicities weight every
eigenvalue computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple, Union

import numpy as np

from .orbit_tree import ColoringLike, NodeId, OrbitTree


@dataclass(frozen=True)
class TreeCharacter:
    """Sparse signed-support pattern of one character class."""

    owner: NodeId
    values: Dict[NodeId, int]  # nonzero values only

    def value(self, node: NodeId) -> int:
        return self.values.get(node, 0)


@dataclass(frozen=True)
class LinearValue:
    """constant + sum(coefficient * x_node) with 0/1-valued variables."""

    constant: int
    terms: Dict[NodeId, int]

    def substitute(self, assignment: Mapping[NodeId, int]) -> int:
        total = self.constant
        for node, coeff in self.terms.items():
            total += coeff * assignment[node]
        return total


def _level_n_character(tree: OrbitTree, owner: NodeId) -> TreeCharacter:
    path = [owner]
    while path[-1] != (0, 0):
        path.append(tree.parent(path[-1]))
    on_path = set(path)
    values: Dict[NodeId, int] = {}
    for node in path:
        values[node] = len(tree.elements(node))
        for child in tree.children(node):
            if child not in on_path:
                values[child] = -len(tree.elements(child))
    return TreeCharacter(owner, values)


def _square_character(tree: OrbitTree, child_char: TreeCharacter) -> TreeCharacter:
    owner = tree.parent(child_char.owner)
    values: Dict[NodeId, int] = {}
    for node, value in child_char.values.items():
        values[node] = len(tree.elements(node))
        if value < 0:
            for grandchild in tree.children(node):
                values[grandchild] = -len(tree.elements(grandchild))
    return TreeCharacter(owner, values)


def character_for(tree: OrbitTree, owner: NodeId) -> TreeCharacter:
    """The character pattern owned by the given node."""
    level = owner[0]
    if level == tree.n:
        return _level_n_character(tree, owner)
    char = _level_n_character(tree, (tree.n, owner[1] << (tree.n - level)))
    for _ in range(tree.n - level):
        char = _square_character(tree, char)
    assert char.owner == owner
    return char


def eigenvalue_multiplicity(tree: OrbitTree, owner: NodeId) -> int:
    """Number of complex characters sharing the pattern owned by this node."""
    return 1 if owner == (0, 0) else 1 << (owner[0] - 1)


def evaluate(
    char: TreeCharacter, coloring: Mapping[NodeId, Optional[int]]
) -> Union[int, LinearValue]:
    """Apply a character to a coloring; nodes mapped to None are variables.

    Returns a plain integer when no variable appears on the support.
    """
    constant = 0
    terms: Dict[NodeId, int] = {}
    for node, weight in char.values.items():
        color = coloring[node]
        if color is None:
            terms[node] = terms.get(node, 0) + weight
        else:
            constant += weight * color
    if not terms:
        return constant
    return LinearValue(constant, terms)


class CharacterTable:
    """All |T_n| characters of a tree, precomputed for the hot loops.

    Characters are indexed by the linear index of their owner; index 0 is
    the trivial character.
    """

    def __init__(self, tree: OrbitTree):
        self.tree = tree
        self.chars: List[TreeCharacter] = []
        by_owner: Dict[NodeId, TreeCharacter] = {}
        # Build level n directly, then square downwards level by level.
        for owner in tree.level_nodes(tree.n):
            by_owner[owner] = _level_n_character(tree, owner)
        for level in range(tree.n - 1, -1, -1):
            for owner in tree.level_nodes(level):
                by_owner[owner] = _square_character(
                    tree, by_owner[tree.children(owner)[0]]
                )
        self.chars = [by_owner[node] for node in tree.node_ids]
        self.multiplicity = np.array(
            [eigenvalue_multiplicity(tree, node) for node in tree.node_ids],
            dtype=np.int64,
        )
        # Sparse support in index form: list of (node_index, weight).
        self.support: List[List[Tuple[int, int]]] = [
            sorted((tree.index(node), w) for node, w in char.values.items())
            for char in self.chars
        ]
        self.chars_by_node: List[List[int]] = [[] for _ in range(tree.size)]
        for ci, support in enumerate(self.support):
            for node_index, _ in support:
                self.chars_by_node[node_index].append(ci)
        self.owner_level = np.array([node[0] for node in tree.node_ids])
        self._matrix: Optional[np.ndarray] = None

    def matrix(self) -> np.ndarray:
        """Dense (owner x node) value matrix for bulk evaluation."""
        if self._matrix is None:
            m = np.zeros((self.tree.size, self.tree.size), dtype=np.int64)
            for ci, support in enumerate(self.support):
                for node_index, w in support:
                    m[ci, node_index] = w
            self._matrix = m
        return self._matrix

    def values_on(self, colors: np.ndarray) -> np.ndarray:
        """Vector of chi(S) over all characters for a full 0/1 coloring."""
        return self.matrix() @ colors.astype(np.int64)
