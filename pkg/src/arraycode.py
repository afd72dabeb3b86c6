"""PIR array code model: spans, singleton normalization, statistics and file format."""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import DimensionError, FormatError
from .gf2core import BitVec, Gf2Basis, basis_insert, basis_of, spans_unit
from .models import CodeStats, PirArrayCode
from .utils import load_json, require_int

EXAMPLE_PATH = os.path.join(os.path.dirname(os.path.dirname(__file__)), "data", "example_7x4.json")

# 1-based parts, row by row, as printed in the [7x4,12] 3-PIR example
_EXAMPLE_ROWS = [
    [[1], [2], [3], [1, 2, 3]],
    [[2], [3], [1], [6]],
    [[4], [5], [4, 5, 6], [4]],
    [[5], [6], [8], [9]],
    [[7], [7, 8, 9], [9], [7]],
    [[8], [10], [11], [12]],
    [[10, 11, 12], [11], [12], [10]],
]


def code_from_parts(p: int, columns: Sequence[Sequence[Iterable[int]]], family: Optional[Dict] = None) -> PirArrayCode:
    """Build a code from 0-based part lists, one list of cells per column."""
    if not columns:
        raise DimensionError("a code needs at least one column")
    t = len(columns[0])
    cols = tuple(tuple(BitVec.from_parts(p, cell) for cell in col) for col in columns)
    return PirArrayCode(p=p, t=t, columns=cols, family=family)


def paper_example() -> PirArrayCode:
    columns = [[[i - 1 for i in row[j]] for row in _EXAMPLE_ROWS] for j in range(4)]
    return code_from_parts(12, columns, family={"name": "example-7x4"})


def _check_cols(code: PirArrayCode, cols: Iterable[int]) -> List[int]:
    out = sorted(set(cols))
    for c in out:
        if not 0 <= c < code.m:
            raise DimensionError(f"column index {c} out of range for m={code.m}")
    return out


def column_span(code: PirArrayCode, cols: Iterable[int]) -> Gf2Basis:
    cells = [cell for c in _check_cols(code, cols) for cell in code.columns[c]]
    return basis_of(code.p, cells)


def _normalize_column(p: int, t: int, column: Sequence[BitVec]) -> Tuple[BitVec, ...]:
    span = basis_of(p, column)
    units = [BitVec.unit(p, i) for i in range(p) if spans_unit(span, i)]
    out = list(units)
    acc = basis_of(p, units)
    for cell in column:
        acc, inserted = basis_insert(acc, cell)
        if inserted:
            out.append(cell)
    # a column's span has rank <= t, so units plus completion always fit
    out.extend(BitVec.zero(p) for _ in range(t - len(out)))
    return tuple(out)


def normalize_singletons(code: PirArrayCode) -> PirArrayCode:
    """Rewrite every column so each unit vector in its span is stored as a cell."""
    cols = tuple(_normalize_column(code.p, code.t, col) for col in code.columns)
    return PirArrayCode(p=code.p, t=code.t, columns=cols, family=code.family)


def singleton_census(code: PirArrayCode) -> Tuple[int, ...]:
    alphas = [0] * code.p
    for col in code.columns:
        span = basis_of(code.p, col)
        for i in range(code.p):
            if spans_unit(span, i):
                alphas[i] += 1
    return tuple(alphas)


def singleton_upper_k(code: PirArrayCode) -> int:
    """k <= a_u + (m - a_u)/2 for the part u of fewest singleton columns."""
    a_u = min(singleton_census(code))
    return a_u + (code.m - a_u) // 2


def code_stats(code: PirArrayCode, k: int) -> CodeStats:
    overhead = Fraction(code.t * code.m, code.p)
    return CodeStats(
        s=code.s,
        k=k,
        storage_overhead=overhead,
        rate=Fraction(k, code.m),
        overhead_ratio=Fraction(k) / overhead,
        singleton_counts=singleton_census(code),
    )


def restrict_columns(code: PirArrayCode, cols: Iterable[int]) -> PirArrayCode:
    keep = _check_cols(code, cols)
    return PirArrayCode(p=code.p, t=code.t, columns=tuple(code.columns[c] for c in keep), family=None)


def render_array(code: PirArrayCode) -> List[List[str]]:
    """Rows of cell labels (x_1+x_2 ...) for display."""
    return [[str(code.cell(r, c)) for c in range(code.m)] for r in range(code.t)]


# ---------------------------------------------------------------------------
# file format

def _parse_cell(raw, p: int, where: str) -> BitVec:
    if not isinstance(raw, list):
        raise FormatError(f"{where}: cell must be a list of part indices")
    seen = set()
    for idx in raw:
        if not isinstance(idx, int) or isinstance(idx, bool):
            raise FormatError(f"{where}: part index {idx!r} is not an integer")
        if not 1 <= idx <= p:
            raise FormatError(f"{where}: part index {idx} outside 1..{p}")
        if idx in seen:
            raise FormatError(f"{where}: part index {idx} repeated")
        seen.add(idx)
    return BitVec.from_parts(p, [i - 1 for i in raw])


def load_code(data) -> PirArrayCode:
    doc = load_json(data)
    p = require_int(doc, "p")
    t = require_int(doc, "t")
    m = require_int(doc, "m")
    columns = doc.get("columns")
    if not isinstance(columns, list):
        raise FormatError("field 'columns' must be a list")
    if len(columns) != m:
        raise FormatError(f"expected m={m} columns, found {len(columns)}")
    cols = []
    for j, col in enumerate(columns):
        if not isinstance(col, list) or len(col) != t:
            got = len(col) if isinstance(col, list) else type(col).__name__
            raise FormatError(f"column {j + 1}: expected t={t} cells, found {got}")
        cols.append(tuple(_parse_cell(cell, p, f"column {j + 1} row {r + 1}") for r, cell in enumerate(col)))
    family = doc.get("family")
    if family is not None and not isinstance(family, dict):
        raise FormatError("field 'family' must be an object")
    return PirArrayCode(p=p, t=t, columns=tuple(cols), family=family)


def save_code(code: PirArrayCode) -> bytes:
    # one column per line keeps large codes diffable
    lines = ["{", f' "p": {code.p},', f' "t": {code.t},', f' "m": {code.m},']
    if code.family:
        lines.append(f' "family": {json.dumps(code.family, sort_keys=True)},')
    lines.append(' "columns": [')
    body = [json.dumps([[i + 1 for i in cell.parts()] for cell in col]) for col in code.columns]
    lines.append(",\n".join("  " + b for b in body))
    lines.append(" ]")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")
