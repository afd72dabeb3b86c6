from __future__ import annotations

from fractions import Fraction
from typing import Optional, Tuple

from ..errors import ParameterError
from ..models import ConstructionOutput
from .base import Construction
from .typed import build_typed, check_capacity, multi_type_counts, multi_type_groups

DOMAIN = "integer s >= 2 and t >= 2 (p = s*t)"


def general_counts(s: int, t: int) -> Tuple[list, int, int, int]:
    """(eta, m, gamma, k) for the integer-s multi-type family."""
    if not (isinstance(s, int) and s >= 2 and t >= 2):
        raise ParameterError(f"multi-type construction needs {DOMAIN}; got s={s}, t={t}")
    return multi_type_counts(s * t, t)


def general_construction(s: int, t: int, max_servers: Optional[int] = None) -> ConstructionOutput:
    eta, m, gamma, k = general_counts(s, t)
    check_capacity(m, max_servers)
    p = s * t
    family = {"name": "general", "s": f"{s}/1", "t": t, "p": p, "eta": eta, "beta": m - 2 * gamma, "gamma": gamma}
    return build_typed(p, t, multi_type_groups(p, t, eta), family, k, m, max_servers)


class GeneralConstruction(Construction):
    name = "general"

    def can_handle(self, s: Fraction, t: int) -> bool:
        s = Fraction(s)
        return s.denominator == 1 and s >= 2 and t >= 2

    def predict(self, s: Fraction, t: int) -> Tuple[Fraction, int]:
        _eta, m, _gamma, k = general_counts(int(s), t)
        return Fraction(k, m), m

    def build(self, s: Fraction, t: int, max_servers: Optional[int] = None, **kwargs) -> ConstructionOutput:
        s = Fraction(s)
        if s.denominator != 1:
            raise ParameterError(f"multi-type construction needs {DOMAIN}; got s={s}")
        return general_construction(int(s), t, max_servers)
