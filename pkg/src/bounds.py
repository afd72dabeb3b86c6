"""Exact rate bounds for PIR array codes.

Everything here is a pure function of (s, t) returning `Fraction` values, so
tables compare exactly. Lower bounds come from known constructions, upper
bounds from singleton counting. Each formula is only reported inside the
parameter range where it holds; out-of-range formulas are left out rather
than zeroed.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import factorial, prod
from typing import Iterable, List, Optional, Tuple

from .constructions.typed import multi_type_rate
from .errors import ConstructionInvariantError, ParameterError
from .models import Bound, BoundReport
from .utils import frac_str

logger = logging.getLogger(__name__)


def _as_s(s) -> Fraction:
    s = Fraction(s)
    if s <= 1:
        raise ParameterError(f"s must be a rational > 1, got {s}")
    return s


def _split_d(s: Fraction, t: int) -> Optional[int]:
    """d with s = 1 + d/t, or None when p = s*t is not integral."""
    d = (s - 1) * t
    return int(d) if d.denominator == 1 else None


def admissible(s, t: int) -> bool:
    return t >= 1 and (Fraction(s) * t).denominator == 1


def upper_g_s(s) -> Fraction:
    """(s+1)/(2s). Never attained at any finite t."""
    s = _as_s(s)
    return (s + 1) / (2 * s)


def corollary_g(s) -> Bound:
    """Limit of the best rate as t grows; the multi-type construction approaches it."""
    return ("limit over t (singleton counting)", upper_g_s(s))


def upper_g_st(t: int, d: int) -> Fraction:
    if t < 2 or d < 1:
        raise ParameterError(f"s = 1 + d/t upper bound needs t >= 2 and d >= 1; got t={t}, d={d}")
    return Fraction((2 * d + 1) * t + d * d, (t + d) * (2 * d + 1))


def construction1_rate(t: int, d: int) -> Fraction:
    if not (t > 1 and 1 <= d <= t):
        raise ParameterError(f"two-type construction needs t > 1 and 1 <= d <= t; got t={t}, d={d}")
    return Fraction((2 * d + 1) * t + d * d, (t + d) * (2 * d + 1))


def construction1_alt_form(t: int, d: int) -> Fraction:
    """Same value written through s: (s + 1 + 1/d) / ((2 + 1/d) s)."""
    if not (t > 1 and 1 <= d <= t):
        raise ParameterError(f"two-type construction needs t > 1 and 1 <= d <= t; got t={t}, d={d}")
    s = 1 + Fraction(d, t)
    return (s + 1 + Fraction(1, d)) / ((2 + Fraction(1, d)) * s)


def beta_gamma(s: int, t: int) -> Tuple[int, int, Fraction]:
    if not (isinstance(s, int) and s >= 2 and t >= 2):
        raise ParameterError(f"beta/gamma rate needs integers s >= 2 and t >= 2; got s={s}, t={t}")

    def tail(r: int) -> int:
        return prod(l * t + 1 for l in range(r, s))

    beta = tail(1) + (t - 1) * sum(
        factorial(s - 1) // factorial(s - r) * t ** (r - 2) * tail(r) for r in range(2, s + 1)
    )
    gamma = sum(factorial(s - 1) // factorial(s - 1 - r) * t ** (r - 1) * tail(r) for r in range(1, s))
    return beta, gamma, Fraction(beta + gamma, beta + 2 * gamma)


def s3_closed_form(t: int) -> Fraction:
    return Fraction(16 * t * t + 7 * t + 1, 24 * t * t + 15 * t + 3)


def s7_3_closed_form(u: int) -> Fraction:
    """Rate of the multi-type code at s = 7/3 with t = 3u cells per server."""
    if u < 1:
        raise ParameterError(f"s=7/3 closed form needs u >= 1, got {u}")
    return Fraction(160 * u * u + 45 * u + 3, 224 * u * u + 77 * u + 7)


def general_rate(s, t: int) -> Fraction:
    """Multi-type construction rate from counting only, for any admissible s > 1, t >= 2."""
    s = _as_s(s)
    if t < 2 or not admissible(s, t):
        raise ParameterError(f"multi-type rate needs t >= 2 and integral p = s*t; got s={s}, t={t}")
    return multi_type_rate(int(s * t), t)


def _few_cells(s: int, t: int) -> List[Bound]:
    out = []
    for c in range(1, t):
        lo = 2 ** (c - 1) * t - 2 ** (c - 1) * (c - 2) + 1
        hi = 2 ** c * t - 2 ** c * (c - 1)
        if lo <= s <= hi:
            out.append((f"few cells[c={c}]", Fraction(t - c + (t - 1) * s + 1, t - c + 2 * (t - 1) * s + 2)))
    return out


def lower_formulas(s, t: int) -> List[Bound]:
    s = _as_s(s)
    if t < 1:
        raise ParameterError(f"t must be >= 1, got {t}")
    if not admissible(s, t):
        return []
    integer = s.denominator == 1
    si = int(s) if integer else None
    out: List[Bound] = []

    if t == 1 and integer:
        out.append(("t=1 exact", Fraction(2 ** (si - 1), 2 ** si - 1)))
    if integer and si >= 3 and t == si - 1:
        out.append(("s-1 cells bound", Fraction(si, 2 * si - 1)))

    d = _split_d(s, t)
    if t > 1 and 1 <= d <= t:
        out.append((f"two-type construction[d={d}]", construction1_rate(t, d)))

    if not integer:
        r = s.numerator // s.denominator
        rd = (s - r) * t
        if r > 1 and r <= t and 1 <= rd <= t - 1:
            rd = int(rd)
            n = r * t + rd
            out.append((f"rational-split[r={r},d={rd}]", Fraction(n * n - t * (t - r), n * (2 * n - 2 * t + r))))

    if integer and si >= 2 and t >= si:
        out.append(("integer s", Fraction(si * t + t + 1, si * (2 * t + 1))))
    if integer:
        out.extend(_few_cells(si, t))

    if t >= 2:
        if integer:
            out.append(("multi-type beta/gamma", beta_gamma(si, t)[2]))
        elif s > 2:
            out.append(("multi-type counts", general_rate(s, t)))
    if s == 3 and t >= 2:
        out.append(("s=3 closed form", s3_closed_form(t)))
    if s == Fraction(7, 3) and t % 3 == 0:
        out.append(("s=7/3 closed form", s7_3_closed_form(t // 3)))
    return out


def upper_formulas(s, t: int) -> List[Bound]:
    s = _as_s(s)
    out: List[Bound] = [("singleton counting", upper_g_s(s))]
    if not admissible(s, t):
        return out
    if t == 1 and s.denominator == 1:
        si = int(s)
        out.append(("t=1 exact", Fraction(2 ** (si - 1), 2 ** si - 1)))
    # valid for every d >= 1, including s > 2
    d = _split_d(s, t)
    if t >= 2 and d >= 1:
        out.append((f"s=1+d/t upper[d={d}]", upper_g_st(t, d)))
    return out


def bound_report(s, t: int) -> BoundReport:
    s = _as_s(s)
    rep = BoundReport(s=s, t=t, lower=lower_formulas(s, t), upper=upper_formulas(s, t), limit=corollary_g(s))
    if not admissible(s, t):
        rep.notes = f"p = s*t = {frac_str(s * t)} is not an integer"
    for lab_lo, lo in rep.lower:
        for lab_hi, hi in rep.upper:
            if lo > hi:
                raise ConstructionInvariantError(
                    f"lower bound {lab_lo}={lo} exceeds upper bound {lab_hi}={hi} at s={s}, t={t}"
                )
    return rep


def bound_table(s_list: Iterable, t_range: Iterable[int]) -> List[BoundReport]:
    t_values = list(t_range)
    rows = [bound_report(s, t) for s in s_list for t in t_values]
    logger.info("bound table: %d rows, %d tight", len(rows), sum(r.tight for r in rows))
    return rows
