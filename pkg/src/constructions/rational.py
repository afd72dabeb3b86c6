from __future__ import annotations

from fractions import Fraction
from typing import Optional, Tuple

from ..errors import ParameterError, UnsupportedParameters
from ..models import ConstructionOutput
from ..utils import frac_str
from .base import Construction
from .construction1 import construction1
from .typed import build_typed, check_capacity, multi_type_counts, multi_type_groups

DOMAIN = "non-integer s = num/den > 1 with den dividing t (p = s*t integral)"


def _rational_p(num: int, den: int, t: int) -> Tuple[Fraction, int]:
    if den <= 0 or t < 1:
        raise ParameterError(f"rational multi-type construction needs {DOMAIN}; got {num}/{den}, t={t}")
    s = Fraction(num, den)
    if s.denominator == 1 or s <= 1:
        raise ParameterError(f"rational multi-type construction needs {DOMAIN}; got s={s}")
    if t % s.denominator:
        raise UnsupportedParameters(
            f"s={s} with t={t} gives non-integral p={s * t}; rational multi-type construction needs {DOMAIN}"
        )
    return s, int(s * t)


def rational_counts(num: int, den: int, t: int) -> Tuple[list, int, int, int]:
    _s, p = _rational_p(num, den, t)
    return multi_type_counts(p, t)


def general_construction_rational(num: int, den: int, t: int, max_servers: Optional[int] = None) -> ConstructionOutput:
    """Below s = 2 the types reduce to the two-type family, which is built directly."""
    s, p = _rational_p(num, den, t)
    if s < 2:
        return construction1(t, p - t, max_servers)
    eta, m, gamma, k = multi_type_counts(p, t)
    check_capacity(m, max_servers)
    family = {"name": "general-rational", "s": frac_str(s), "t": t, "p": p, "eta": eta, "gamma": gamma}
    return build_typed(p, t, multi_type_groups(p, t, eta), family, k, m, max_servers)


class RationalConstruction(Construction):
    name = "general-rational"

    def can_handle(self, s: Fraction, t: int) -> bool:
        s = Fraction(s)
        return s.denominator != 1 and s > 2 and t % s.denominator == 0

    def predict(self, s: Fraction, t: int) -> Tuple[Fraction, int]:
        s = Fraction(s)
        _eta, m, _gamma, k = rational_counts(s.numerator, s.denominator, t)
        return Fraction(k, m), m

    def build(self, s: Fraction, t: int, max_servers: Optional[int] = None, **kwargs) -> ConstructionOutput:
        s = Fraction(s)
        return general_construction_rational(s.numerator, s.denominator, t, max_servers)
