"""Orbit-stabilizer totals and (small n) group-inequivalence classes.

One canonical coloring stands for a whole tree-automorphism orbit of PDS;
the number of distinct subsets of G_n it represents is the group order
divided by the coloring's stabilizer order, and totals are exact integer
sums of those orbit sizes.  Group-inequivalence classes (orbits under
Aut(G_n) instead of the far larger tree group) are computed for n <= 4 by
expanding every tree orbit into explicit subsets of G_n and merging them
under generators of Aut(G_n).
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .canonical import (
    coloring_orbit,
    group_aut_order,
    orbit_size,
    stabilizer_order,
    tree_aut_order,
)
from .orbit_tree import OrbitTree
from .serialization import decode
from .verify import PdsRecord


def total_pds_count(tree: OrbitTree, records: Sequence[PdsRecord]) -> int:
    """Total number of distinct even-size PDS (as subsets of G_n)."""
    return sum(
        orbit_size(tree, decode(tree.n, rec.bits)) for rec in records
    )


def total_by_k(tree: OrbitTree, records: Sequence[PdsRecord]) -> Dict[int, int]:
    """Per-size orbit-stabilizer totals."""
    totals: Dict[int, int] = {}
    for rec in records:
        totals[rec.k] = totals.get(rec.k, 0) + orbit_size(tree, decode(tree.n, rec.bits))
    return dict(sorted(totals.items()))


def rhpds_total_formula_check(n: int, totals_by_k: Dict[int, int]) -> bool:
    """Check the closed forms 2^{2^n - 2} * (2^n +/- 1) for the two
    reversible-Hadamard sizes."""
    type_a = totals_by_k.get((1 << (2 * n - 1)) - (1 << (n - 1)), 0)
    type_b = totals_by_k.get((1 << (2 * n - 1)) + (1 << (n - 1)), 0)
    base = 1 << ((1 << n) - 2)
    return type_a == base * ((1 << n) + 1) and type_b == base * ((1 << n) - 1)


# -- group equivalence -------------------------------------------------------


def group_automorphism_permutations(n: int) -> List[np.ndarray]:
    """Element-index permutations generating Aut(G_n) (index a * 2^n + b).

    Generators: the two transvections, the coordinate swap, and the
    diagonal actions by -1 and 3 on the first coordinate.
    """
    modulus = 1 << n
    matrices = [
        ((1, 1), (0, 1)),
        ((1, 0), (1, 1)),
        ((0, 1), (1, 0)),
        ((modulus - 1, 0), (0, 1)),
        ((3 % modulus, 0), (0, 1)),
    ]
    grid_a, grid_b = np.divmod(np.arange(modulus * modulus), modulus)
    perms = []
    for (p, q), (u, v) in matrices:
        image_a = (p * grid_a + q * grid_b) % modulus
        image_b = (u * grid_a + v * grid_b) % modulus
        perms.append(image_a * modulus + image_b)
    return perms


class _UnionFind:
    def __init__(self, count: int):
        self.parent = list(range(count))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)

    def class_count(self) -> int:
        return len({self.find(x) for x in range(len(self.parent))})


def _node_element_matrix(tree: OrbitTree) -> np.ndarray:
    """(|T_n| x 4^n) incidence of node -> element index."""
    modulus = 1 << tree.n
    out = np.zeros((tree.size, modulus * modulus), dtype=bool)
    for idx, node in enumerate(tree.node_ids):
        for a, b in tree.elements(node):
            out[idx, a * modulus + b] = True
    return out


def expand_tree_orbits(
    tree: OrbitTree, records: Sequence[PdsRecord]
) -> Tuple[np.ndarray, List[int]]:
    """All distinct PDS subsets of G_n covered by the records.

    Returns (packed element bitmasks, per-record orbit sizes); the i-th
    orbit's rows are contiguous.
    """
    incidence = _node_element_matrix(tree)
    masks: List[np.ndarray] = []
    sizes: List[int] = []
    for rec in records:
        orbit = coloring_orbit(tree, decode(tree.n, rec.bits))
        sizes.append(orbit.shape[0])
        subsets = orbit.astype(bool) @ incidence  # (orbit, 4^n) bool
        masks.append(np.packbits(subsets, axis=1))
    return np.concatenate(masks, axis=0), sizes


def group_inequivalent_count(
    tree: OrbitTree, records: Sequence[PdsRecord]
) -> int:
    """Number of Aut(G_n)-classes among all PDS covered by the records.

    Exact but memory/time heavy: n <= 4 only (n = 4 expands 709312
    subsets of a 256-element group)."""
    n = tree.n
    if n > 4:
        raise ValueError("group-inequivalence expansion is limited to n <= 4")
    packed, per_record = expand_tree_orbits(tree, records)
    total = packed.shape[0]
    for rec, size in zip(records, per_record):
        assert size == orbit_size(tree, decode(n, rec.bits))
    index: Dict[bytes, int] = {
        row.tobytes(): i for i, row in enumerate(packed)
    }
    assert len(index) == total, "tree orbits overlapped"
    uf = _UnionFind(total)
    element_count = 1 << (2 * n)
    for perm in group_automorphism_permutations(n):
        # image[sigma(x)] = mask[x]  <=>  image = mask[:, inverse(sigma)]
        inverse = np.empty_like(perm)
        inverse[perm] = np.arange(element_count)
        unpacked = np.unpackbits(packed, axis=1)[:, :element_count]
        images = np.packbits(unpacked[:, inverse], axis=1)
        for i in range(total):
            uf.union(i, index[images[i].tobytes()])
    return uf.class_count()


# -- table emission ----------------------------------------------------------


def summary_rows(
    tree: OrbitTree, records: Sequence[PdsRecord]
) -> List[Tuple[int, int, str, int, int, float]]:
    """(n, k, type, canonical count, exact total, percent-of-total) rows."""
    totals = total_by_k(tree, records)
    grand = sum(totals.values())
    by_k: Dict[int, List[PdsRecord]] = {}
    for rec in records:
        by_k.setdefault(rec.k, []).append(rec)
    rows = []
    for k, recs in sorted(by_k.items()):
        tags = sorted({rec.class_tag for rec in recs})
        rows.append(
            (
                tree.n,
                k,
                "/".join(tags),
                len(recs),
                totals[k],
                100.0 * totals[k] / grand if grand else 0.0,
            )
        )
    return rows


def format_summary(tree: OrbitTree, records: Sequence[PdsRecord]) -> str:
    lines = [
        f"n={tree.n}: {len(records)} canonical PDS, "
        f"{total_pds_count(tree, records)} total"
    ]
    for _, k, tag, canonical, total, pct in summary_rows(tree, records):
        lines.append(
            f"  k={k:<8} {tag:<18} canonical={canonical:<3} "
            f"total={total:<14} {pct:.4g}%"
        )
    lines.append(
        "reversible-Hadamard closed form: "
        + ("ok" if rhpds_total_formula_check(tree.n, total_by_k(tree, records)) else "MISMATCH")
    )
    return "\n".join(lines)


def write_summary_csv(path, tree: OrbitTree, records: Sequence[PdsRecord]) -> None:
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "k", "type", "canonical", "total", "pct"])
        for n, k, tag, canonical, total, pct in summary_rows(tree, records):
            writer.writerow([n, k, tag, canonical, total, f"{pct:.4g}"])
