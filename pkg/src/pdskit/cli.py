"""Batch front-end: enumerate, verify, count, and brute-force commands.

Exit codes: 0 success, 1 verification/comparison failure, 2 usage error.

The enumerate command writes a checkpoint log next to the output file
(`<out>.log`): a `pds seed=<i> r=<r> <bits>` line per found coloring and a
`done seed=<i> r=<r> found=<c>` line per completed work item.  With
--resume, logged items are skipped and their results replayed, so an
interrupted run continues where it stopped.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple

from .characters import CharacterTable
from .orbit_tree import build_tree
from .search import enumerate_all, merge_results, work_items
from .serialization import (
    RecordText,
    format_records,
    read_records,
    write_records,
)
from .verify import verify_record

_DONE = re.compile(r"^done seed=(\d+) r=(\d+) found=(\d+)$")
_PDS = re.compile(r"^pds seed=(\d+) r=(\d+) (\S+)$")


def _read_log(path: Path) -> Tuple[Set[Tuple[int, int]], List[str]]:
    done: Set[Tuple[int, int]] = set()
    bits: Dict[Tuple[int, int], List[str]] = {}
    if not path.exists():
        return done, []
    for line in path.read_text(encoding="utf-8").splitlines():
        m = _DONE.match(line)
        if m:
            done.add((int(m.group(1)), int(m.group(2))))
            continue
        m = _PDS.match(line)
        if m:
            bits.setdefault((int(m.group(1)), int(m.group(2))), []).append(m.group(3))
    replay = [b for item in sorted(done) for b in bits.get(item, [])]
    return done, replay


def cmd_enumerate(args) -> int:
    n = args.n
    if n < 2:
        print("enumerate requires n >= 2", file=sys.stderr)
        return 2
    jobs = args.jobs or int(os.environ.get("PDSKIT_JOBS", "0")) or os.cpu_count() or 1
    tree = build_tree(n)
    chars = CharacterTable(tree)
    items = work_items(n)
    if args.seed_index:
        wanted = set(args.seed_index)
        items = [it for it in items if it[0] in wanted]
    if args.r:
        wanted_r = set(args.r)
        items = [it for it in items if it[1] in wanted_r]

    log_path = Path(f"{args.out}.log") if args.out else None
    skip: Set[Tuple[int, int]] = set()
    replay: List[str] = []
    if args.resume:
        if log_path is None:
            print("--resume requires --out", file=sys.stderr)
            return 2
        skip, replay = _read_log(log_path)
        skip &= set(items)
    log_handle = open(log_path, "a", encoding="utf-8") if log_path else None

    def progress(item, results):
        i, r = item
        if log_handle:
            for bits in results:
                log_handle.write(f"pds seed={i} r={r} {bits}\n")
            log_handle.write(f"done seed={i} r={r} found={len(results)}\n")
            log_handle.flush()

    try:
        found = enumerate_all(
            tree,
            chars,
            jobs=jobs,
            items=items,
            skip=skip,
            progress=progress,
            max_items=args.max_items,
        )
    finally:
        if log_handle:
            log_handle.close()
    if found is None:
        print(f"stopped after --max-items {args.max_items}; resume with --resume")
        return 0
    all_bits = [rec.bits for rec in found] + replay
    records = merge_results(tree, chars, all_bits)
    texts = [rec.to_text() for rec in records]
    if args.out:
        write_records(args.out, texts)
        print(f"wrote {len(texts)} records to {args.out}")
    else:
        sys.stdout.write(format_records(texts) if texts else "")
    if args.golden:
        golden_path = Path(args.golden) / f"n{n}.txt"
        ours = format_records(texts) if texts else ""
        theirs = golden_path.read_text(encoding="utf-8")
        if ours != theirs:
            print(f"MISMATCH against {golden_path}", file=sys.stderr)
            return 1
        print(f"byte-identical to {golden_path}")
    return 0


def cmd_verify(args) -> int:
    tree = build_tree(args.n)
    chars = CharacterTable(tree)
    records = read_records(args.file)
    failures = 0
    for i, rec in enumerate(records):
        problems = verify_record(
            tree, chars, rec, check_definition=args.n <= 3
        )
        status = "ok" if not problems else "FAIL: " + "; ".join(problems)
        print(f"record {i + 1} k={rec.k}: {status}")
        failures += bool(problems)
    print(f"{len(records) - failures}/{len(records)} records verified")
    return 1 if failures else 0


def cmd_count(args) -> int:
    from .counting import (
        format_summary,
        group_inequivalent_count,
        write_summary_csv,
    )
    from .serialization import decode
    from .verify import is_pds_by_eigenvalues

    tree = build_tree(args.n)
    chars = CharacterTable(tree)
    records = []
    for rec in read_records(args.file):
        verified = is_pds_by_eigenvalues(tree, chars, decode(args.n, rec.bits))
        if verified is None:
            print(f"not a PDS: {rec.bits}", file=sys.stderr)
            return 1
        records.append(verified)
    print(format_summary(tree, records))
    if args.csv:
        write_summary_csv(args.csv, tree, records)
        print(f"wrote {args.csv}")
    if args.group_classes:
        if args.n > 4:
            print("--group-classes requires n <= 4", file=sys.stderr)
            return 2
        print(f"group-inequivalent classes: {group_inequivalent_count(tree, records)}")
    return 0


def cmd_bruteforce(args) -> int:
    from .verify import brute_force_canonical_bits

    n = args.n
    if n > 3:
        print("bruteforce is limited to n <= 3", file=sys.stderr)
        return 2
    tree = build_tree(n)
    chars = CharacterTable(tree)
    records = merge_results(tree, chars, brute_force_canonical_bits(tree))
    texts = [rec.to_text() for rec in records]
    if args.out:
        write_records(args.out, texts)
        print(f"wrote {len(texts)} records to {args.out}")
    else:
        sys.stdout.write(format_records(texts) if texts else "")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdskit",
        description="Enumerate and verify partial difference sets in C_{2^n} x C_{2^n}.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="search all canonical even-size PDS")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--jobs", type=int, default=0, help="worker processes (default: machine)")
    p.add_argument("--out", help="output record file (default: stdout)")
    p.add_argument("--resume", action="store_true", help="skip items already in <out>.log")
    p.add_argument("--seed-index", type=int, action="append", help="restrict to these seed indices")
    p.add_argument("--r", type=int, action="append", help="restrict to these eigenvalues")
    p.add_argument("--golden", help="directory with n<k>.txt files to compare against")
    p.add_argument("--max-items", type=int, help="stop after this many work items (for smoke tests)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="re-verify a record file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--file", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", help="orbit-stabilizer totals for a record file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--file", required=True)
    p.add_argument("--csv", help="also write a CSV summary")
    p.add_argument("--group-classes", action="store_true", help="also count Aut(G_n)-classes (n <= 4, slow)")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bruteforce", help="exhaustive definition-based enumeration (n <= 3)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", help="output record file (default: stdout)")
    p.set_defaults(func=cmd_bruteforce)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AssertionError as exc:
        print(f"internal assertion failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
