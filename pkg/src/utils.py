from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Dict

from slugify import slugify

from .errors import FormatError, ParameterError

_RATIONAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Accepts ``a/b`` or a bare integer ``a``."""
    m = _RATIONAL.match(str(text))
    if not m:
        raise ParameterError(f"not a rational: {text!r} (expected a/b or an integer)")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParameterError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def frac_float(x: Fraction, decimals: int = 6) -> float:
    # round() on a Fraction is exact and rounds half to even
    return float(round(Fraction(x), decimals))


def load_json(data) -> Dict:
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise FormatError(f"document is not UTF-8: {e}") from e
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise FormatError(f"malformed JSON: {e}") from e
    if not isinstance(doc, dict):
        raise FormatError("top-level JSON value must be an object")
    return doc


def require_int(doc: Dict, key: str, minimum: int = 1) -> int:
    val = doc.get(key)
    if not isinstance(val, int) or isinstance(val, bool):
        raise FormatError(f"field {key!r} must be an integer, got {val!r}")
    if val < minimum:
        raise FormatError(f"field {key!r} must be >= {minimum}, got {val}")
    return val


def family_slug(family: Dict) -> str:
    parts = [str(family.get("name", "code"))]
    for key in ("s", "t", "d"):
        if key in family and family[key] is not None:
            parts.append(f"{key}{family[key]}")
    return slugify("-".join(parts).replace("/", "_"), separator="_")[:64]
