from __future__ import annotations

from fractions import Fraction
from math import comb, gcd
from typing import Optional, Tuple

from ..errors import ParameterError
from ..models import ConstructionOutput, TypeGroup
from ..utils import frac_str
from .base import Construction
from .typed import build_typed, check_capacity, shape_layouts

DOMAIN = "t > 1 and 1 <= d <= t (s = 1 + d/t, p = t + d)"


def _check(t: int, d: int) -> None:
    if not (t > 1 and 1 <= d <= t):
        raise ParameterError(f"two-type construction needs {DOMAIN}; got t={t}, d={d}")


def construction1_counts(t: int, d: int) -> Tuple[int, int, int]:
    """(theta, m, k) with theta = lcm(d, t)."""
    _check(t, d)
    theta = d * t // gcd(d, t)
    m = comb(t + d, t) * theta // d + comb(t + d, t - 1) * theta // t
    k = m - comb(t + d - 1, t) * theta // d
    return theta, m, k


def construction1(t: int, d: int, max_servers: Optional[int] = None) -> ConstructionOutput:
    theta, m, k = construction1_counts(t, d)
    check_capacity(m, max_servers)
    p = t + d
    groups = [
        TypeGroup("A", t, 0, theta // d, shape_layouts(p, (t, 0), "A")),
        TypeGroup("B", t - 1, d + 1, theta // t, shape_layouts(p, (t - 1, d + 1), "B")),
    ]
    family = {
        "name": "c1",
        "s": frac_str(Fraction(p, t)),
        "t": t,
        "d": d,
        "p": p,
        "theta": theta,
        "eta": [g.eta for g in groups],
    }
    return build_typed(p, t, groups, family, k, m, max_servers)


def _split(s: Fraction, t: int) -> Optional[int]:
    d = (Fraction(s) - 1) * t
    if d.denominator != 1:
        return None
    return int(d)


class Construction1(Construction):
    name = "c1"

    def can_handle(self, s: Fraction, t: int) -> bool:
        d = _split(s, t)
        return d is not None and t > 1 and 1 <= d <= t

    def predict(self, s: Fraction, t: int) -> Tuple[Fraction, int]:
        _theta, m, k = construction1_counts(t, _split(s, t))
        return Fraction(k, m), m

    def build(self, s: Fraction, t: int, max_servers: Optional[int] = None, **kwargs) -> ConstructionOutput:
        d = _split(s, t)
        if d is None:
            raise ParameterError(f"s={s} with t={t} does not give an integer d; two-type construction needs {DOMAIN}")
        return construction1(t, d, max_servers)
