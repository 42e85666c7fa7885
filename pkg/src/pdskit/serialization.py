"""Bit-exact text encodings for colorings and verified result records.

A coloring of T_n serializes to its rows joined by ';' in the linear
order: one character for row 0, then 3*2^{i-1} characters for row i.
The expanded form is the storage and comparison format.  A run-length
display form is also supported, writing repeated characters as ``b^e``
and repeated multi-character blocks as ``(pattern)^e``; the decoder
accepts both forms interchangeably.

Record files are UTF-8 text, one block per record::

    k=<int> r=<int>^<mult> s=<int>^<mult> class=<tag>
    <bits string>

with blank lines between blocks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np

from .orbit_tree import ColoringLike, OrbitTree


class SerializationError(ValueError):
    """Malformed coloring string or record text."""


def _row_widths(n: int) -> List[int]:
    return [1] + [3 << (i - 1) for i in range(1, n + 1)]


def encode(tree: OrbitTree, coloring: ColoringLike) -> str:
    """Expanded row-by-row bit string, rows joined by ';'."""
    arr = tree.color_array(coloring)
    if not np.isin(arr, (0, 1)).all():
        raise SerializationError("coloring values must be 0 or 1")
    parts = []
    pos = 0
    for width in _row_widths(tree.n):
        parts.append("".join("01"[v] for v in arr[pos : pos + width]))
        pos += width
    return ";".join(parts)


_ATOM = re.compile(r"([01])(?:\^(\d+))?|\(([01]+)\)\^(\d+)")


def _expand_row(row: str, n_row: int, width: int) -> str:
    """Expand one row, accepting plain bits and run-length atoms."""
    out: List[str] = []
    pos = 0
    stripped = row.replace(" ", "").replace("$", "")
    while pos < len(stripped):
        m = _ATOM.match(stripped, pos)
        if m is None:
            raise SerializationError(
                f"row {n_row}: unexpected character at offset {pos}: {stripped[pos]!r}"
            )
        if m.group(1) is not None:
            out.append(m.group(1) * (int(m.group(2)) if m.group(2) else 1))
        else:
            out.append(m.group(3) * int(m.group(4)))
        pos = m.end()
    expanded = "".join(out)
    if len(expanded) != width:
        raise SerializationError(
            f"row {n_row}: expected {width} bits, got {len(expanded)}"
        )
    return expanded


def decode(n: int, text: str) -> np.ndarray:
    """Parse a coloring string (expanded or run-length) for T_n.

    Returns the flat color array in linear order.
    """
    rows = text.strip().split(";")
    widths = _row_widths(n)
    if len(rows) != len(widths):
        raise SerializationError(
            f"expected {len(widths)} rows for n={n}, got {len(rows)}"
        )
    bits = "".join(
        _expand_row(row, i, width) for i, (row, width) in enumerate(zip(rows, widths))
    )
    return np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")


def _compress_row(row: str) -> str:
    """Greedy run-length form of one row: longest repeated block first."""
    out: List[str] = []
    pos = 0
    while pos < len(row):
        best_unit, best_reps = row[pos], 1
        best_cover = 1
        limit = len(row) - pos
        for unit_len in range(1, limit // 2 + 1):
            unit = row[pos : pos + unit_len]
            reps = 1
            while row[pos + reps * unit_len : pos + (reps + 1) * unit_len] == unit:
                reps += 1
            cover = reps * unit_len
            # Prefer more coverage; on ties prefer the shorter unit.
            if reps >= 2 and cover > best_cover:
                best_unit, best_reps, best_cover = unit, reps, cover
        if best_reps == 1:
            out.append(best_unit)
        elif len(best_unit) == 1:
            out.append(f"{best_unit}^{best_reps}")
        else:
            out.append(f"({best_unit})^{best_reps}")
        pos += best_cover
    # Space-separate atoms so exponents cannot run into following bits.
    return " ".join(out)


def encode_runlength(tree: OrbitTree, coloring: ColoringLike) -> str:
    """Run-length display form; decode() always round-trips it."""
    return ";".join(_compress_row(row) for row in encode(tree, coloring).split(";"))


# -- record files -----------------------------------------------------------


@dataclass(frozen=True)
class RecordText:
    """One record block as stored in a result file."""

    k: int
    r: int
    mult_r: int
    s: int
    mult_s: int
    class_tag: str
    bits: str

    def header(self) -> str:
        return (
            f"k={self.k} r={self.r}^{self.mult_r} "
            f"s={self.s}^{self.mult_s} class={self.class_tag}"
        )

    def block(self) -> str:
        return f"{self.header()}\n{self.bits}"


_HEADER = re.compile(
    r"k=(-?\d+) r=(-?\d+)\^(\d+) s=(-?\d+)\^(\d+) class=(\S+)$"
)


def format_records(records: Iterable[RecordText]) -> str:
    return "\n\n".join(rec.block() for rec in records) + "\n"


def parse_records(text: str) -> List[RecordText]:
    records: List[RecordText] = []
    blocks = [b for b in re.split(r"\n\s*\n", text.strip()) if b.strip()]
    for block in blocks:
        lines = [line.strip() for line in block.splitlines() if line.strip()]
        if len(lines) != 2:
            raise SerializationError(f"record block must be 2 lines: {block!r}")
        m = _HEADER.match(lines[0])
        if m is None:
            raise SerializationError(f"bad record header: {lines[0]!r}")
        records.append(
            RecordText(
                k=int(m.group(1)),
                r=int(m.group(2)),
                mult_r=int(m.group(3)),
                s=int(m.group(4)),
                mult_s=int(m.group(5)),
                class_tag=m.group(6),
                bits=lines[1],
            )
        )
    return records


def read_records(path) -> List[RecordText]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if not text.strip():
        return []
    return parse_records(text)


def write_records(path, records: Sequence[RecordText]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if records:
            fh.write(format_records(records))
