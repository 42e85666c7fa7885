"""Independent verification: eigenvalue-profile test, brute-force
difference counting, complementation, and parameter classification.

A subset S of G_n drawn from tree nodes is a regular nontrivial PDS
exactly when its character values consist of the trivial value k = |S|
together with exactly two other values r > 0 > s with s = r - 2^n and
k = r (mod 2^n).  The quadratic relation of strongly regular graphs then
recovers lambda and mu:  mu = k + r*s,  lambda = mu + r + s.

The brute-force test counts the difference multiset of S directly from
the group elements and never touches characters; it is the ground truth
the spectral test is validated against.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .characters import CharacterTable
from .orbit_tree import ColoringLike, Element, OrbitTree
from .serialization import RecordText, encode

CLASS_TAGS = ("PCP2", "PCP3C", "RHPDS_A", "RHPDS_B", "SPORADIC")


@dataclass(frozen=True)
class PdsRecord:
    """A verified PDS with its spectral data and classification."""

    n: int
    k: int
    r: int
    mult_r: int
    s: int
    mult_s: int
    lam: int
    mu: int
    class_tag: str
    bits: str

    def to_text(self) -> RecordText:
        return RecordText(
            self.k, self.r, self.mult_r, self.s, self.mult_s, self.class_tag,
            self.bits,
        )


def eigenvalue_profile(
    tree: OrbitTree, chars: CharacterTable, coloring: ColoringLike
) -> List[Tuple[int, int]]:
    """(eigenvalue, multiplicity) pairs, multiplicities summing to 4^n.

    Sorted by decreasing eigenvalue; equal values are merged."""
    colors = tree.color_array(coloring)
    values = chars.values_on(colors)
    profile: Dict[int, int] = {}
    for value, mult in zip(values.tolist(), chars.multiplicity.tolist()):
        profile[value] = profile.get(value, 0) + mult
    return sorted(profile.items(), key=lambda item: -item[0])


def classify_k(n: int, k: int) -> str:
    """Parameter-family tag from the subset size alone."""
    m = 1 << n
    if k == 2 * (m - 1):
        return "PCP2"
    if k == m * m - 3 * m + 2:
        return "PCP3C"
    if k == (1 << (2 * n - 1)) - (1 << (n - 1)):
        return "RHPDS_A"
    if k == (1 << (2 * n - 1)) + (1 << (n - 1)):
        return "RHPDS_B"
    return "SPORADIC"


def classify(record: PdsRecord) -> str:
    return classify_k(record.n, record.k)


def latin_square_sign(record: PdsRecord) -> Optional[str]:
    """'+' for positive Latin-square parameters (r = m - t), '-' for
    negative (r = t), None if neither family matches."""
    m = 1 << record.n
    if record.k == (m - record.r) * (m - 1):
        return "+"
    if record.k == record.r * (m + 1):
        return "-"
    return None


def is_pds_by_eigenvalues(
    tree: OrbitTree, chars: CharacterTable, coloring: ColoringLike
) -> Optional[PdsRecord]:
    """Spectral PDS test; returns the verified record or None."""
    colors = tree.color_array(coloring)
    if colors[0] != 0:
        return None
    n = tree.n
    values = chars.values_on(colors)
    k = int(values[0])
    nontrivial = values[1:]
    r = int(nontrivial.max())
    s = int(nontrivial.min())
    if not (r > 0 > s and s == r - (1 << n) and (k - r) % (1 << n) == 0):
        return None
    if k in (r, s):
        return None  # fewer than three distinct eigenvalues
    if not np.isin(nontrivial, (r, s)).all():
        return None
    mult_r = int(chars.multiplicity[1:][nontrivial == r].sum())
    mult_s = int(chars.multiplicity[1:][nontrivial == s].sum())
    mu = k + r * s
    lam = mu + r + s
    if not 0 < mu < k:
        return None
    record = PdsRecord(
        n=n, k=k, r=r, mult_r=mult_r, s=s, mult_s=mult_s, lam=lam, mu=mu,
        class_tag=classify_k(n, k), bits=encode(tree, colors),
    )
    return record


def is_pds_by_definition(
    n: int, subset: Iterable[Element]
) -> Optional[Tuple[int, int, int]]:
    """Brute-force difference-multiset test on raw group elements.

    Returns (k, lambda, mu) when every element of S occurs lambda times
    among the pairwise differences, every nonidentity element outside S
    occurs mu times, and 0 < mu < k.  Never consults characters.
    """
    modulus = 1 << n
    elems = sorted({(a % modulus, b % modulus) for a, b in subset})
    if not elems or (0, 0) in elems:
        return None
    k = len(elems)
    counts: Counter = Counter()
    for a1, b1 in elems:
        for a2, b2 in elems:
            counts[((a1 - a2) % modulus, (b1 - b2) % modulus)] += 1
    in_s = set(elems)
    lam = counts[elems[0]]
    mu = None
    for a in range(modulus):
        for b in range(modulus):
            g = (a, b)
            if g == (0, 0):
                continue
            c = counts[g]
            if g in in_s:
                if c != lam:
                    return None
            elif mu is None:
                mu = c
            elif c != mu:
                return None
    assert mu is not None
    if not 0 < mu < k:
        return None
    return k, lam, mu


def complement(tree: OrbitTree, coloring: ColoringLike) -> np.ndarray:
    """Flip every non-root node; S is a PDS iff its complement is."""
    colors = tree.color_array(coloring)
    if colors[0] != 0:
        raise ValueError("complement is defined for root-zero colorings")
    out = 1 - colors
    out[0] = 0
    return out


# -- bulk paths for exhaustive comparisons -----------------------------------


def difference_tensor(tree: OrbitTree) -> np.ndarray:
    """T[i, j, m] = number of pairs (x, y) in N_i x N_j with x - y in N_m,
    over non-root nodes (0-based shifted indices: tree index minus 1).

    Difference counts of node-unions are constant on nodes, so this tensor
    reduces Definition-style difference counting to a quadratic form.
    """
    modulus = 1 << tree.n
    size = tree.size - 1
    node_of = {}
    for idx in range(1, tree.size):
        for g in tree.elements(tree.node_at(idx)):
            node_of[g] = idx - 1
    tensor = np.zeros((size, size, size), dtype=np.int64)
    for i in range(size):
        for j in range(size):
            for x in tree.elements(tree.node_at(i + 1)):
                for y in tree.elements(tree.node_at(j + 1)):
                    d = ((x[0] - y[0]) % modulus, (x[1] - y[1]) % modulus)
                    if d != (0, 0):
                        tensor[i, j, node_of[d]] += 1
    return tensor


def bulk_definition_pds(
    tree: OrbitTree, tensor: np.ndarray, selections: np.ndarray
) -> np.ndarray:
    """Definition-based PDS membership for many node selections at once.

    selections: (count, |T_n| - 1) 0/1 array over non-root nodes.
    Returns a boolean vector.  Exact: all counts stay far below 2^53.
    """
    sel = selections.astype(np.float64)
    count, size = sel.shape
    sizes = tree.node_sizes[1:].astype(np.float64)
    k = sel @ sizes
    # Per-element difference counts, one column per target node.
    per_elem = np.empty((count, size), dtype=np.float64)
    for m in range(size):
        per_elem[:, m] = ((sel @ tensor[:, :, m]) * sel).sum(axis=1) / sizes[m]
    chosen = sel.astype(bool)
    ok = k > 0
    lam = (per_elem * chosen).max(axis=1)
    lam_min = np.where(chosen, per_elem, np.inf).min(axis=1)
    ok &= ~chosen.any(axis=1) | (lam == lam_min)
    off = ~chosen
    mu = np.where(off, per_elem, -np.inf).max(axis=1)
    mu_min = np.where(off, per_elem, np.inf).min(axis=1)
    ok &= ~off.any(axis=1) | (mu == mu_min)
    ok &= (mu > 0) & (mu < k)
    return ok


def bulk_eigenvalue_pds(
    tree: OrbitTree, chars: CharacterTable, selections: np.ndarray
) -> np.ndarray:
    """Spectral PDS membership for many node selections at once."""
    count = selections.shape[0]
    colors = np.zeros((count, tree.size), dtype=np.int64)
    colors[:, 1:] = selections
    values = colors @ chars.matrix().T
    k = values[:, 0]
    nontrivial = values[:, 1:]
    r = nontrivial.max(axis=1)
    s = nontrivial.min(axis=1)
    modulus = 1 << tree.n
    ok = (r > 0) & (s < 0) & (s == r - modulus) & ((k - r) % modulus == 0)
    ok &= (k != r) & (k != s)
    ok &= ((nontrivial == r[:, None]) | (nontrivial == s[:, None])).all(axis=1)
    mu = k + r * s
    ok &= (mu > 0) & (mu < k)
    return ok


def brute_force_canonical_bits(tree: OrbitTree) -> List[str]:
    """Exhaustive definition-based enumeration (n <= 3): test every
    even-size root-zero node-union subset by difference counting, then
    canonicalize and deduplicate the survivors."""
    from .canonical import canonicalize

    if tree.n > 3:
        raise ValueError("exhaustive enumeration is limited to n <= 3")
    tensor = difference_tensor(tree)
    free = tree.size - 1
    sizes = tree.node_sizes[1:]
    bits: set = set()
    chunk = 1 << 16
    for start in range(0, 1 << free, chunk):
        stop = min(start + chunk, 1 << free)
        nums = np.arange(start, stop, dtype=np.int64)
        sel = ((nums[:, None] >> np.arange(free)[None, :]) & 1).astype(np.uint8)
        sel = sel[(sel @ sizes) % 2 == 0]
        hits = bulk_definition_pds(tree, tensor, sel)
        for row in sel[hits]:
            colors = np.zeros(tree.size, dtype=np.uint8)
            colors[1:] = row
            bits.add(encode(tree, canonicalize(tree, colors)))
    return sorted(bits)


def verify_record(
    tree: OrbitTree,
    chars: CharacterTable,
    rec: RecordText,
    check_definition: bool = False,
) -> List[str]:
    """Re-verify a stored record; returns a list of failure reasons."""
    from . import serialization
    from .canonical import is_canonical

    failures: List[str] = []
    try:
        colors = serialization.decode(tree.n, rec.bits)
    except serialization.SerializationError as exc:
        return [f"undecodable bits: {exc}"]
    found = is_pds_by_eigenvalues(tree, chars, colors)
    if found is None:
        failures.append("eigenvalue profile: not a PDS")
    else:
        stated = (rec.k, rec.r, rec.mult_r, rec.s, rec.mult_s)
        actual = (found.k, found.r, found.mult_r, found.s, found.mult_s)
        if stated != actual:
            failures.append(f"eigenvalue profile: header {stated} != {actual}")
        if rec.class_tag != found.class_tag:
            failures.append(f"class: {rec.class_tag} != {found.class_tag}")
    if not is_canonical(tree, colors):
        failures.append("not canonical")
    if check_definition:
        res = is_pds_by_definition(tree.n, tree.selected_elements(colors))
        if res is None:
            failures.append("definition: not a PDS")
        elif found is not None and res != (found.k, found.lam, found.mu):
            failures.append(f"definition: (k,lam,mu) {res} != spectral")
    return failures
