from __future__ import annotations

import logging
from fractions import Fraction
from typing import List, Optional

from ..errors import ParameterError, UnsupportedParameters
from .base import Construction
from .construction1 import Construction1
from .construction2 import Construction2
from .general import GeneralConstruction
from .rational import RationalConstruction

logger = logging.getLogger(__name__)

FAMILIES = [
    Construction2(),
    Construction1(),
    GeneralConstruction(),
    RationalConstruction(),
]


def family_names() -> List[str]:
    return [f.name for f in FAMILIES]


def get_construction(name: str) -> Construction:
    for f in FAMILIES:
        if f.name == name:
            return f
    raise ParameterError(f"unknown family {name!r}; choose one of {', '.join(family_names())}")


def applicable(s: Fraction, t: int) -> List[Construction]:
    out = []
    for f in FAMILIES:
        try:
            if f.can_handle(s, t):
                out.append(f)
        except ParameterError:
            continue
    return out


def best_construction(s: Fraction, t: int) -> Optional[str]:
    """Family with the highest predicted rate for (s, t); fewer servers wins a tie."""
    best = None
    for f in applicable(Fraction(s), t):
        try:
            rate, m = f.predict(Fraction(s), t)
        except (ParameterError, UnsupportedParameters) as e:
            logger.debug("%s skipped for s=%s t=%d: %s", f.name, s, t, e)
            continue
        key = (rate, -m)
        if best is None or key > best[0]:
            best = (key, f.name)
    return best[1] if best else None
