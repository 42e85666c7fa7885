"""Seed-driven search for canonical PDS with a fixed positive eigenvalue.

Starting from a seed (rows 0, 1, n fixed) every node of rows 2..n-1 is a
0/1 variable.  Any extension with positive nontrivial eigenvalue r must
satisfy chi(Q) = r (mod 2^k) for 2 <= k <= n and every tree character
chi, because all three eigenvalues of a PDS are congruent mod 2^n.  The
search loops over characters and moduli:

  * a congruence with one surviving variable either forces it or proves
    a contradiction;
  * one with two surviving variables can force equality or inequality of
    the pair; inequalities additionally get both concrete values tested
    against canonicity, which often fixes them outright;
  * a character value that collapses to an integer constant outside
    {r, r - 2^n} kills the branch, as does any already-definitive
    canonicity violation.

Equalities and inequalities live in a union-find with edge parities, so
every node value is one of 0, 1, x or 1-x for a class representative x
(the linearly earliest member of its class).  When no deduction applies,
the first unassigned representative in linear order is branched 0/1.
Leaves are emitted when they are canonical and have exactly the three
eigenvalues |S|, r and r - 2^n.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .canonical import is_canonical, sibling_pairs
from .characters import CharacterTable
from .feasibility import eigenvalue_candidates, is_feasible
from .orbit_tree import OrbitTree, build_tree
from .seeds import SeedColoring, seed_partial_colorings
from .serialization import encode
from .verify import PdsRecord, is_pds_by_eigenvalues


class Contradiction(Exception):
    """Internal signal: the current branch admits no extension."""


class PartialColoring:
    """Node values over {0, 1, x, 1-x} with a parity union-find on classes."""

    KIND_VAR = 2

    __slots__ = ("kind", "parent", "parity", "assigned", "members", "num_free")

    def __init__(self, size: int, assignments: Dict[int, int], var_nodes: Sequence[int]):
        self.kind = [0] * size
        self.parent = list(range(size))
        self.parity = [0] * size
        self.assigned = [-1] * size
        self.members: Dict[int, List[int]] = {}
        for idx, value in assignments.items():
            self.kind[idx] = value
        for idx in var_nodes:
            self.kind[idx] = self.KIND_VAR
            self.members[idx] = [idx]
        self.num_free = len(self.members)

    def copy(self) -> "PartialColoring":
        dup = object.__new__(PartialColoring)
        dup.kind = self.kind[:]
        dup.parent = self.parent[:]
        dup.parity = self.parity[:]
        dup.assigned = self.assigned[:]
        dup.members = {root: nodes[:] for root, nodes in self.members.items()}
        dup.num_free = self.num_free
        return dup

    def find(self, x: int) -> Tuple[int, int]:
        root, par = x, 0
        parent, parity = self.parent, self.parity
        while parent[root] != root:
            par ^= parity[root]
            root = parent[root]
        node, q = x, par
        while parent[node] != node:
            nxt, step = parent[node], parity[node]
            parent[node], parity[node] = root, q
            q ^= step
            node = nxt
        return root, par

    def resolve(self, idx: int) -> Tuple[int, int, int]:
        """(value, -1, 0) for a constant, (-1, root, parity) for a variable."""
        k = self.kind[idx]
        if k != self.KIND_VAR:
            return k, -1, 0
        root, par = self.find(idx)
        v = self.assigned[root]
        if v >= 0:
            return v ^ par, -1, 0
        return -1, root, par

    def assign(self, root: int, value: int) -> List[int]:
        """Set the class of `root` to `value`; returns the affected nodes."""
        root, par = self.find(root)
        current = self.assigned[root]
        wanted = value ^ par
        if current >= 0:
            if current != wanted:
                raise Contradiction
            return []
        self.assigned[root] = wanted
        self.num_free -= 1
        return self.members[root]

    def union(self, a: int, b: int, flip: int) -> List[int]:
        """Impose x_a = x_b XOR flip; returns the affected nodes."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        rel = pa ^ pb ^ flip
        if ra == rb:
            if rel:
                raise Contradiction
            return []
        keep, drop = (ra, rb) if ra < rb else (rb, ra)  # earliest member leads
        va, vb = self.assigned[keep], self.assigned[drop]
        self.parent[drop] = keep
        self.parity[drop] = rel  # x_drop = x_keep XOR rel
        changed = self.members[keep] + self.members[drop]
        self.members[keep] = changed
        del self.members[drop]
        if va >= 0 and vb >= 0:
            if vb != va ^ rel:
                raise Contradiction
        else:
            if vb >= 0:
                self.assigned[keep] = vb ^ rel
            self.num_free -= 1  # two classes merged, or a free one got a value
        return changed

    def first_free_node(self) -> int:
        for idx in range(len(self.kind)):
            if self.kind[idx] == self.KIND_VAR:
                root, _ = self.find(idx)
                if self.assigned[root] < 0:
                    return idx
        raise LookupError("no free variable")

    def colors(self) -> np.ndarray:
        out = np.empty(len(self.kind), dtype=np.uint8)
        for idx in range(len(self.kind)):
            value, _, _ = self.resolve(idx)
            if value < 0:
                raise ValueError("coloring is not fully assigned")
            out[idx] = value
        return out


class SearchContext:
    """Immutable per-tree data shared by every search."""

    def __init__(self, tree: OrbitTree, chars: CharacterTable):
        self.tree = tree
        self.chars = chars
        self.var_nodes = [
            tree.index(node)
            for level in range(2, tree.n)
            for node in tree.level_nodes(level)
        ]
        self.pair_lists = [
            (tree.subtree_indices(older).tolist(), tree.subtree_indices(younger).tolist())
            for older, younger in sibling_pairs(tree)
        ]

    def start(self, seed: SeedColoring) -> PartialColoring:
        return PartialColoring(
            self.tree.size, seed.assignments(self.tree), self.var_nodes
        )


def _expression(ctx: SearchContext, q: PartialColoring, ci: int) -> Tuple[int, Dict[int, int]]:
    """chi_ci(Q) as constant + sum(coeff * x_root) with integer cancellation."""
    const = 0
    coeff: Dict[int, int] = {}
    for idx, w in ctx.chars.support[ci]:
        value, root, par = q.resolve(idx)
        if value >= 0:
            const += w * value
        elif par:
            const += w
            coeff[root] = coeff.get(root, 0) - w
        else:
            coeff[root] = coeff.get(root, 0) + w
    return const, {root: c for root, c in coeff.items() if c != 0}


def _has_definitive_violation(ctx: SearchContext, q: PartialColoring) -> bool:
    """Any canonicity comparison already violated by constants, with the
    prefix-equality gates evaluated on expressions."""
    resolve = q.resolve
    for older, younger in ctx.pair_lists:
        for a_idx, b_idx in zip(older, younger):
            va, ra, pa = resolve(a_idx)
            vb, rb, pb = resolve(b_idx)
            if va >= 0 and vb >= 0:
                if va > vb:
                    return True
                if va != vb:
                    break  # gate fails; later positions unconstrained
            elif va != vb or ra != rb or pa != pb:
                break  # not provably equal; gate cannot be confirmed
    return False


def definitively_non_canonical(tree: OrbitTree, q: PartialColoring,
                               ctx: Optional[SearchContext] = None) -> bool:
    if ctx is None:
        ctx = SearchContext(tree, CharacterTable(tree))
    return _has_definitive_violation(ctx, q)


def _process_character(
    ctx: SearchContext, q: PartialColoring, ci: int, r: int
) -> List[int]:
    """Apply step-(1) deductions for one character.  Returns affected node
    indices (empty if nothing changed); raises Contradiction to prune."""
    n = ctx.tree.n
    const, coeff = _expression(ctx, q, ci)
    for k in range(2, n + 1):
        mod = 1 << k
        target = (r - const) % mod
        survivors = sorted(
            (root, c % mod) for root, c in coeff.items() if c % mod
        )
        if not survivors:
            if target:
                raise Contradiction
            continue
        if len(survivors) == 1:
            root, c = survivors[0]
            ok0 = target == 0
            ok1 = c % mod == target
            if not ok0 and not ok1:
                raise Contradiction
            if ok0 != ok1:
                return q.assign(root, 0 if ok0 else 1)
            continue
        if len(survivors) == 2:
            (r1, c1), (r2, c2) = survivors
            valid = {
                (v1, v2)
                for v1 in (0, 1)
                for v2 in (0, 1)
                if (c1 * v1 + c2 * v2 - target) % mod == 0
            }
            if not valid:
                raise Contradiction
            if valid == {(0, 0), (1, 1)}:
                return q.union(r1, r2, 0)
            if valid == {(0, 1), (1, 0)}:
                changed = q.union(r1, r2, 1)
                # Either concrete value may already be non-canonical.
                root, _ = q.find(r1)
                bad = []
                for v in (0, 1):
                    trial = q.copy()
                    trial.assign(root, v)
                    bad.append(_has_definitive_violation(ctx, trial))
                if bad[0] and bad[1]:
                    raise Contradiction
                if bad[0] != bad[1]:
                    changed = changed + q.assign(root, 1 if bad[0] else 0)
                return changed
        # Three or more survivors (or an uninformative pattern): no action.
    return []


def propagate(
    ctx: SearchContext,
    q: PartialColoring,
    r: int,
    dirty: Optional[Iterable[int]] = None,
) -> Optional[PartialColoring]:
    """Run step-(1) deductions to a joint fixpoint over all characters and
    moduli.  Returns the updated coloring, or None on contradiction."""
    pending: Set[int] = set(range(len(ctx.chars.chars)) if dirty is None else dirty)
    try:
        while pending:
            ci = min(pending)
            pending.discard(ci)
            changed = _process_character(ctx, q, ci, r)
            for idx in changed:
                pending.update(ctx.chars.chars_by_node[idx])
    except Contradiction:
        return None
    return q


def constant_eigenvalue_prune(
    ctx: SearchContext, q: PartialColoring, r: int
) -> bool:
    """True if some nontrivial character is already a constant outside
    {r, r - 2^n} (variables may cancel over the integers)."""
    s = r - (1 << ctx.tree.n)
    for ci in range(1, len(ctx.chars.chars)):
        const, coeff = _expression(ctx, q, ci)
        if not coeff and const not in (r, s):
            return True
    return False


@dataclass
class SearchStats:
    branch_nodes: int = 0
    leaves: int = 0
    emitted: int = 0
    root_free_vars: int = -1  # independent variables left after the first propagation


def search(
    tree: OrbitTree,
    chars: CharacterTable,
    seed: SeedColoring,
    r: int,
    ctx: Optional[SearchContext] = None,
) -> Tuple[List[str], SearchStats]:
    """All canonical PDS extending the seed with positive eigenvalue r,
    as sorted expanded bit strings."""
    if ctx is None:
        ctx = SearchContext(tree, chars)
    stats = SearchStats()
    shift = 1 << tree.n
    results: Set[str] = set()
    stack: List[Tuple[PartialColoring, Optional[List[int]]]] = [(ctx.start(seed), None)]
    first = True
    while stack:
        q, dirty = stack.pop()
        q = propagate(ctx, q, r, dirty)
        if first:
            stats.root_free_vars = q.num_free if q is not None else 0
            first = False
        if q is None:
            continue
        if constant_eigenvalue_prune(ctx, q, r):
            continue
        if _has_definitive_violation(ctx, q):
            continue
        if q.num_free == 0:
            stats.leaves += 1
            colors = q.colors()
            values = chars.values_on(colors)
            nontrivial = values[1:]
            k = int(values[0])
            if (
                np.isin(nontrivial, (r, r - shift)).all()
                and (nontrivial == r).any()
                and (nontrivial == r - shift).any()
                and k not in (r, r - shift)
                and is_canonical(tree, colors)
            ):
                stats.emitted += 1
                results.add(encode(tree, colors))
            continue
        stats.branch_nodes += 1
        branch_node = q.first_free_node()
        root, _ = q.find(branch_node)
        for value in (1, 0):  # stack order: explore value 0 first
            child = q.copy()
            try:
                changed = child.assign(root, value)
            except Contradiction:
                continue
            child_dirty = set()
            for idx in changed:
                child_dirty.update(ctx.chars.chars_by_node[idx])
            stack.append((child, sorted(child_dirty)))
    return sorted(results), stats


# -- full enumeration --------------------------------------------------------


def work_items(n: int) -> List[Tuple[int, int]]:
    """(seed index, r) pairs in deterministic order, over the full R."""
    seed_count = (1 << (n + 1)) - 1
    return [(i, r) for i in range(seed_count) for r in eigenvalue_candidates(n)]


def run_item(
    tree: OrbitTree,
    chars: CharacterTable,
    seeds: Sequence[SeedColoring],
    item: Tuple[int, int],
    ctx: Optional[SearchContext] = None,
) -> List[str]:
    """Feasibility-check then search one (seed index, r) pair."""
    i, r = item
    if not is_feasible(tree, chars, seeds[i], r):
        return []
    results, _ = search(tree, chars, seeds[i], r, ctx)
    return results


_POOL_STATE: Dict[str, object] = {}


def _pool_init(n: int) -> None:
    tree = build_tree(n)
    chars = CharacterTable(tree)
    _POOL_STATE["tree"] = tree
    _POOL_STATE["chars"] = chars
    _POOL_STATE["seeds"] = seed_partial_colorings(tree)
    _POOL_STATE["ctx"] = SearchContext(tree, chars)


def _pool_run(item: Tuple[int, int]) -> Tuple[Tuple[int, int], List[str]]:
    return item, run_item(
        _POOL_STATE["tree"],
        _POOL_STATE["chars"],
        _POOL_STATE["seeds"],
        item,
        _POOL_STATE["ctx"],
    )


def enumerate_all(
    tree: OrbitTree,
    chars: Optional[CharacterTable] = None,
    jobs: int = 1,
    items: Optional[Sequence[Tuple[int, int]]] = None,
    skip: Optional[Set[Tuple[int, int]]] = None,
    progress: Optional[Callable[[Tuple[int, int], List[str]], None]] = None,
    max_items: Optional[int] = None,
) -> Optional[List[PdsRecord]]:
    """Run every (seed, r) work item and merge the verified results.

    `skip` pairs are assumed already logged by `progress` in an earlier
    run; their results must be replayed by the caller.  Returns the sorted
    records, or None when `max_items` stopped the run early.
    """
    chars = chars or CharacterTable(tree)
    ctx = SearchContext(tree, chars)
    seeds = seed_partial_colorings(tree)
    todo = [
        item
        for item in (items if items is not None else work_items(tree.n))
        if not skip or item not in skip
    ]
    truncated = max_items is not None and len(todo) > max_items
    if max_items is not None:
        todo = todo[:max_items]
    found: List[Tuple[Tuple[int, int], List[str]]] = []
    if jobs <= 1:
        for item in todo:
            results = run_item(tree, chars, seeds, item, ctx)
            if progress:
                progress(item, results)
            found.append((item, results))
    else:
        with multiprocessing.Pool(jobs, initializer=_pool_init, initargs=(tree.n,)) as pool:
            for item, results in pool.imap_unordered(_pool_run, todo, chunksize=4):
                if progress:
                    progress(item, results)
                found.append((item, results))
    if truncated:
        return None
    return merge_results(tree, chars, [bits for _, results in found for bits in results])


def merge_results(
    tree: OrbitTree, chars: CharacterTable, bits_list: Iterable[str]
) -> List[PdsRecord]:
    """Verify, deduplicate-check, and sort raw search output."""
    from .serialization import decode

    seen: Set[str] = set()
    records: List[PdsRecord] = []
    for bits in bits_list:
        assert bits not in seen, f"duplicate across work items: {bits}"
        seen.add(bits)
        record = is_pds_by_eigenvalues(tree, chars, decode(tree.n, bits))
        assert record is not None, f"search emitted a non-PDS: {bits}"
        assert is_canonical(tree, decode(tree.n, bits))
        records.append(record)
    records.sort(key=lambda rec: (rec.k, rec.bits))
    return records
