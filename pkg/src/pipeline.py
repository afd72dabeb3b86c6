from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional

from .constructions import best_construction, get_construction
from .errors import PirArrayError
from .utils import frac_str
from .verifier import check_certificate, exact_k

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Instance:
    family: str  # a registry name or "auto"
    s: Fraction
    t: int


def run_grid(
    instances: Iterable[Instance],
    verify_limit: int = 0,
    max_servers: Optional[int] = None,
) -> List[Dict]:
    """Build and certify each instance; exact-verify those with m <= verify_limit.

    A failing instance yields a row with its error in ``notes`` and the batch
    carries on.
    """
    rows = []
    for inst in instances:
        row = {
            "family": inst.family,
            "s": frac_str(inst.s),
            "t": inst.t,
            "m": None,
            "k": None,
            "rate": "",
            "certified": False,
            "exact_k": None,
            "notes": "",
        }
        try:
            name = inst.family
            if name == "auto":
                name = best_construction(inst.s, inst.t)
                if name is None:
                    raise PirArrayError(f"no family handles s={frac_str(inst.s)}, t={inst.t}")
                row["family"] = name
            out = get_construction(name).build(inst.s, inst.t, max_servers=max_servers)
            ok, violation = check_certificate(out.code, out.certificate)
            row.update(m=out.predicted_m, k=out.predicted_k, rate=frac_str(out.rate), certified=ok)
            if not ok:
                row["notes"] = str(violation)
            if out.predicted_m <= verify_limit:
                row["exact_k"] = exact_k(out.code, exact_limit=verify_limit).k
        except Exception as e:
            logger.warning("grid row %s s=%s t=%d failed: %s", inst.family, frac_str(inst.s), inst.t, e)
            row["notes"] = f"error={type(e).__name__}: {e}"
        rows.append(row)
    return rows
