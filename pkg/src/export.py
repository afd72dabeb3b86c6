from __future__ import annotations

import os
from typing import Dict, List, Optional, Sequence

import pandas as pd

from .models import BoundReport
from .settings import load_cfg
from .utils import frac_float, frac_str

TABLE_COLUMNS = ["s", "t", "best_lower", "best_upper", "tight", "lower_sources", "upper_sources"]


def _sources(bounds) -> str:
    return "; ".join(f"{label}={frac_str(v)}" for label, v in bounds)


def _opt(x) -> str:
    return frac_str(x) if x is not None else ""


def bound_table_frame(reports: Sequence[BoundReport], with_floats: bool = False, decimals: Optional[int] = None) -> pd.DataFrame:
    """One row per (s, t); exact values rendered as num/den."""
    if decimals is None:
        decimals = load_cfg()["bounds"]["decimals"]
    rows: List[Dict] = []
    for r in reports:
        row = {
            "s": frac_str(r.s),
            "t": r.t,
            "best_lower": _opt(r.best_lower),
            "best_upper": _opt(r.best_upper),
            "tight": r.tight,
            "lower_sources": _sources(r.lower),
            "upper_sources": _sources(r.upper),
        }
        if with_floats:
            row["best_lower_value"] = frac_float(r.best_lower, decimals) if r.best_lower is not None else None
            row["best_upper_value"] = frac_float(r.best_upper, decimals) if r.best_upper is not None else None
            row["notes"] = r.notes
        rows.append(row)
    columns = TABLE_COLUMNS + (["best_lower_value", "best_upper_value", "notes"] if with_floats else [])
    return pd.DataFrame(rows, columns=columns)


def save_table(df: pd.DataFrame, path: str) -> None:
    ext = os.path.splitext(path)[1].lower()
    if ext == ".xlsx":
        df.to_excel(path, index=False)
    else:
        df.to_csv(path, index=False)
