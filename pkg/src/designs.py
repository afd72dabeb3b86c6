"""Steiner systems S(d, d+1, p): generation for d in {1, 2}, validation, file format."""

from __future__ import annotations

import json
import logging
from collections import Counter
from itertools import combinations
from math import comb
from typing import List, Optional, Tuple

from .errors import DesignError, FormatError, UnsupportedParameters
from .models import SteinerSystem
from .utils import load_json, require_int

logger = logging.getLogger(__name__)


def _system(p: int, d: int, blocks) -> SteinerSystem:
    return SteinerSystem(p=p, d=d, blocks=tuple(sorted(tuple(sorted(b)) for b in blocks)))


def validate_steiner(sys: SteinerSystem) -> Tuple[bool, Optional[str]]:
    """Exhaustive check that every d-subset lies in exactly one block."""
    p, d = sys.p, sys.d
    if d < 1 or p < d + 1:
        return False, f"need 1 <= d < p, got d={d}, p={p}"
    seen_blocks = set()
    covered: Counter = Counter()
    for n, block in enumerate(sys.blocks):
        label = "{" + ",".join(str(x + 1) for x in block) + "}"
        if len(block) != d + 1 or len(set(block)) != d + 1:
            return False, f"block #{n + 1} {label} does not have {d + 1} distinct points"
        if any(not 0 <= x < p for x in block):
            return False, f"block #{n + 1} {label} has a point outside 1..{p}"
        key = tuple(sorted(block))
        if key in seen_blocks:
            return False, f"block {label} repeated"
        seen_blocks.add(key)
        covered.update(combinations(key, d))
    for sub in combinations(range(p), d):
        hits = covered.get(sub, 0)
        if hits != 1:
            label = "{" + ",".join(str(x + 1) for x in sub) + "}"
            return False, f"{d}-subset {label} lies in {hits} blocks"
    expected = comb(p, d) // (d + 1)
    if len(sys.blocks) != expected:
        return False, f"{len(sys.blocks)} blocks, expected C(p,d)/(d+1) = {expected}"
    return True, None


def _pairs(p: int) -> List[Tuple[int, ...]]:
    return [(2 * i, 2 * i + 1) for i in range(p // 2)]


def _bose(p: int) -> List[Tuple[int, ...]]:
    # p = 6n+3 on Z_{2n+1} x Z_3 with x.y = (x+y)/2 mod 2n+1
    order = p // 3
    half = (order + 1) // 2

    def pt(x: int, i: int) -> int:
        return x + (i % 3) * order

    blocks = [(pt(x, 0), pt(x, 1), pt(x, 2)) for x in range(order)]
    for i in range(3):
        for x, y in combinations(range(order), 2):
            blocks.append((pt(x, i), pt(y, i), pt(((x + y) * half) % order, i + 1)))
    return blocks


def _skolem(p: int) -> List[Tuple[int, ...]]:
    # p = 6n+1 on {inf} u Z_{2n} x Z_3 with a half-idempotent commutative quasigroup
    n = (p - 1) // 6
    order = 2 * n
    inf = p - 1

    def pt(x: int, i: int) -> int:
        return x + (i % 3) * order

    def op(x: int, y: int) -> int:
        z = (x + y) % order
        return z // 2 if z % 2 == 0 else n + z // 2

    blocks = [(pt(x, 0), pt(x, 1), pt(x, 2)) for x in range(n)]
    for i in range(3):
        for x in range(n):
            blocks.append((inf, pt(n + x, i), pt(x, i + 1)))
        for x, y in combinations(range(order), 2):
            blocks.append((pt(x, i), pt(y, i), pt(op(x, y), i + 1)))
    return blocks


def make_steiner(d: int, p: int) -> SteinerSystem:
    if d == 1:
        if p < 2 or p % 2:
            raise UnsupportedParameters(f"S(1,2,p) needs p even and >= 2, got p={p}")
        sys = _system(p, 1, _pairs(p))
    elif d == 2:
        if p < 3 or p % 6 not in (1, 3):
            raise UnsupportedParameters(f"S(2,3,p) needs p = 1 or 3 (mod 6) and p >= 3, got p={p}")
        sys = _system(p, 2, _bose(p) if p % 6 == 3 else _skolem(p))
    else:
        raise UnsupportedParameters(f"only d in {{1, 2}} is generated; supply S({d},{d + 1},{p}) as a file")
    ok, why = validate_steiner(sys)
    if not ok:
        raise DesignError(f"generated S({d},{d + 1},{p}) failed validation: {why}")
    logger.debug("generated S(%d,%d,%d) with %d blocks", d, d + 1, p, len(sys.blocks))
    return sys


def load_steiner(data) -> SteinerSystem:
    doc = load_json(data)
    p = require_int(doc, "p")
    d = require_int(doc, "d")
    raw = doc.get("blocks")
    if not isinstance(raw, list):
        raise FormatError("field 'blocks' must be a list")
    blocks = []
    for n, block in enumerate(raw):
        if not isinstance(block, list):
            raise FormatError(f"block #{n + 1} must be a list of points")
        for x in block:
            if not isinstance(x, int) or isinstance(x, bool) or not 1 <= x <= p:
                raise FormatError(f"block #{n + 1}: point {x!r} outside 1..{p}")
        blocks.append([x - 1 for x in block])
    sys = _system(p, d, blocks)
    ok, why = validate_steiner(sys)
    if not ok:
        raise DesignError(f"not an S({d},{d + 1},{p}) Steiner system: {why}")
    return sys


def save_steiner(sys: SteinerSystem) -> bytes:
    body = ",\n".join("  " + json.dumps([x + 1 for x in b]) for b in sys.blocks)
    lines = ["{", f' "p": {sys.p},', f' "d": {sys.d},', ' "blocks": [', body, " ]", "}"]
    return ("\n".join(lines) + "\n").encode("utf-8")
