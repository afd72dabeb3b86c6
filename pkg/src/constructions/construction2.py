from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Optional, Tuple

from ..designs import make_steiner
from ..errors import ParameterError, UnsupportedParameters
from ..models import ConstructionOutput, ServerSpec, SteinerSystem, TypeGroup
from ..utils import frac_str
from .base import Construction
from .construction1 import _split
from .typed import build_typed, check_capacity, shape_layouts

DOMAIN = "t > 1, d >= 1 and a Steiner system S(d, d+1, t+d)"


def construction2_counts(t: int, d: int) -> Tuple[int, int]:
    """(m, k): C(t+d,d) Type A servers plus d copies of each of C(t+d,d)/(d+1) blocks."""
    p = t + d
    blocks = comb(p, d) // (d + 1)
    m = comb(p, d) + d * blocks
    return m, m - comb(p - 1, t)


def construction2(t: int, d: int, sys: Optional[SteinerSystem] = None, max_servers: Optional[int] = None) -> ConstructionOutput:
    if t <= 1 or d < 1:
        raise ParameterError(f"Steiner construction needs {DOMAIN}; got t={t}, d={d}")
    p = t + d
    if sys is None:
        sys = make_steiner(d, p)
    if sys.p != p or sys.d != d:
        raise ParameterError(f"Steiner system S({sys.d},{sys.d + 1},{sys.p}) does not match S({d},{d + 1},{p}) for t={t}, d={d}")
    m, k = construction2_counts(t, d)
    check_capacity(m, max_servers)

    type_b = []
    for block in sys.blocks:
        singles = frozenset(x for x in range(p) if x not in block)
        type_b.append(ServerSpec(singles, (frozenset(block),), 1, "B"))
    groups = [
        TypeGroup("A", t, 0, 1, shape_layouts(p, (t, 0), "A")),
        TypeGroup("B", t - 1, d + 1, d, tuple(type_b)),
    ]
    family = {
        "name": "c2",
        "s": frac_str(Fraction(p, t)),
        "t": t,
        "d": d,
        "p": p,
        "blocks": len(sys.blocks),
        "eta": [1, d],
    }
    return build_typed(p, t, groups, family, k, m, max_servers)


class Construction2(Construction):
    name = "c2"

    def can_handle(self, s: Fraction, t: int) -> bool:
        d = _split(s, t)
        if d is None or t <= 1 or d < 1:
            return False
        try:
            make_steiner(d, t + d)
        except UnsupportedParameters:
            return False
        return True

    def predict(self, s: Fraction, t: int) -> Tuple[Fraction, int]:
        m, k = construction2_counts(t, _split(s, t))
        return Fraction(k, m), m

    def build(self, s: Fraction, t: int, max_servers: Optional[int] = None, **kwargs) -> ConstructionOutput:
        d = _split(s, t)
        if d is None:
            raise ParameterError(f"s={s} with t={t} does not give an integer d; Steiner construction needs {DOMAIN}")
        return construction2(t, d, kwargs.get("steiner"), max_servers)
