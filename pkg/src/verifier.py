"""Exact k-PIR verification and recovery-certificate checking."""

from __future__ import annotations

import json
import logging
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .arraycode import column_span
from .errors import FormatError
from .gf2core import Gf2Basis, basis_extend, spans_unit
from .models import PartResult, PirArrayCode, RecoveryCertificate, RecoverySet, VerifierReport, Violation
from .settings import load_cfg
from .utils import load_json, require_int

logger = logging.getLogger(__name__)

MEMO_MAX_COLUMNS = 24


class _BudgetExceeded(Exception):
    pass


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _mask_cols(mask: int) -> frozenset:
    out = []
    c = 0
    while mask:
        if mask & 1:
            out.append(c)
        mask >>= 1
        c += 1
    return frozenset(out)


def _keep_minimal(masks: List[int]) -> List[int]:
    masks = sorted(set(masks), key=lambda x: (_popcount(x), sorted(_mask_cols(x))))
    kept: List[int] = []
    for mk in masks:
        if not any(f & mk == f for f in kept):
            kept.append(mk)
    return kept


def _recovery_masks(code: PirArrayCode, parts: Sequence[int], max_size: int) -> Dict[int, List[int]]:
    """Column masks spanning each part, found by a depth-first walk that stops
    extending a set once it spans every part still of interest."""
    found: Dict[int, List[int]] = {i: [] for i in parts}

    def walk(start: int, mask: int, size: int, basis: Gf2Basis, alive: Tuple[int, ...]):
        for c in range(start, code.m):
            b = basis_extend(basis, code.columns[c])
            m2 = mask | (1 << c)
            still = []
            for i in alive:
                if spans_unit(b, i):
                    found[i].append(m2)
                else:
                    still.append(i)
            if still and size + 1 < max_size:
                walk(c + 1, m2, size + 1, b, tuple(still))

    if max_size > 0:
        walk(0, 0, 0, Gf2Basis.empty(code.p), tuple(parts))
    return {i: _keep_minimal(v) for i, v in found.items()}


def _to_sets(masks: Sequence[int]) -> List[RecoverySet]:
    return [RecoverySet(_mask_cols(mk)) for mk in masks]


def minimal_recovery_sets(code: PirArrayCode, i: int, max_size: Optional[int] = None) -> List[RecoverySet]:
    max_size = code.m if max_size is None else min(max_size, code.m)
    return _to_sets(_recovery_masks(code, [i], max_size)[i])


def greedy_packing(sets: Sequence[RecoverySet]) -> Tuple[int, List[RecoverySet]]:
    used = 0
    chosen: List[RecoverySet] = []
    for s in sorted(sets, key=RecoverySet.sort_key):
        mk = s.mask()
        if not used & mk:
            used |= mk
            chosen.append(s)
    return len(chosen), chosen


def _pack(masks: List[int], m: int, node_budget: int) -> Tuple[int, List[int], int]:
    by_min: List[List[int]] = [[] for _ in range(m)]
    for mk in masks:
        by_min[(mk & -mk).bit_length() - 1].append(mk)
    min_size = min((_popcount(mk) for mk in masks), default=1)
    memo: Optional[Dict[int, Tuple[int, Tuple[int, ...]]]] = {} if m <= MEMO_MAX_COLUMNS else None
    nodes = 0

    def best(avail: int) -> Tuple[int, Tuple[int, ...]]:
        nonlocal nodes
        if not avail:
            return 0, ()
        if memo is not None and avail in memo:
            return memo[avail]
        nodes += 1
        if nodes > node_budget:
            raise _BudgetExceeded()
        ceiling = _popcount(avail) // min_size
        c = (avail & -avail).bit_length() - 1
        rest = avail & ~(1 << c)
        top: Tuple[int, Tuple[int, ...]] = (0, ())
        for mk in by_min[c]:
            if mk & avail != mk:
                continue
            cnt, chosen = best(avail & ~mk)
            if cnt + 1 > top[0]:
                top = (cnt + 1, (mk,) + chosen)
                if top[0] >= ceiling:
                    break
        if top[0] < ceiling:
            cnt, chosen = best(rest)
            if cnt > top[0]:
                top = (cnt, chosen)
        if memo is not None:
            memo[avail] = top
        return top

    count, chosen = best((1 << m) - 1)
    return count, list(chosen), nodes


def max_disjoint_packing(
    sets: Sequence[RecoverySet], m: int, node_budget: Optional[int] = None
) -> Tuple[int, List[RecoverySet]]:
    count, witness, _exact, _nodes = _packing_with_status(sets, m, node_budget)
    return count, witness


def _packing_with_status(sets: Sequence[RecoverySet], m: int, node_budget: Optional[int]):
    if node_budget is None:
        node_budget = load_cfg()["verifier"]["node_budget"]
    ordered = sorted(sets, key=RecoverySet.sort_key)
    if not ordered:
        return 0, [], True, 0
    try:
        count, masks, nodes = _pack([s.mask() for s in ordered], m, node_budget)
    except _BudgetExceeded:
        logger.warning("packing node budget %d exhausted over %d sets; falling back to greedy", node_budget, len(ordered))
        count, witness = greedy_packing(ordered)
        return count, witness, False, node_budget
    witness = sorted(_to_sets(masks), key=RecoverySet.sort_key)
    return count, witness, True, nodes


def exact_k(
    code: PirArrayCode,
    exact_limit: Optional[int] = None,
    node_budget: Optional[int] = None,
) -> VerifierReport:
    cfg = load_cfg()["verifier"]
    exact_limit = cfg["exact_limit"] if exact_limit is None else exact_limit
    node_budget = cfg["node_budget"] if node_budget is None else node_budget
    parts = list(range(code.p))

    if code.m > exact_limit:
        size = min(cfg["lower_bound_max_size"], code.m)
        logger.info("m=%d exceeds exact limit %d; lower bound from sets of size <= %d", code.m, exact_limit, size)
        found = _recovery_masks(code, parts, size)
        results = []
        for i in parts:
            count, witness = greedy_packing(_to_sets(found[i]))
            results.append(PartResult(part=i, max_disjoint=count, exact=False, witness=tuple(witness)))
        return VerifierReport(m=code.m, parts=tuple(results))

    found = _recovery_masks(code, parts, code.m)
    results = []
    for i in parts:
        count, witness, exact, nodes = _packing_with_status(_to_sets(found[i]), code.m, node_budget)
        results.append(PartResult(part=i, max_disjoint=count, exact=exact, witness=tuple(witness), nodes=nodes))
    report = VerifierReport(m=code.m, parts=tuple(results))
    logger.debug("exact_k: k=%d exact=%s m=%d", report.k, report.exact, code.m)
    return report


def check_certificate(code: PirArrayCode, cert: RecoveryCertificate) -> Tuple[bool, Optional[Violation]]:
    if len(cert.parts) != code.p:
        return False, Violation(0, None, "part-count", f"certificate lists {len(cert.parts)} parts, code has p={code.p}")
    for i, sets in enumerate(cert.parts):
        used: Dict[int, int] = {}
        for idx, rs in enumerate(sets):
            bad = [c for c in rs.cols if not 0 <= c < code.m]
            if bad:
                return False, Violation(i, idx, "out-of-range", f"column {bad[0] + 1} not in 1..{code.m}")
            for c in sorted(rs.cols):
                if c in used:
                    return False, Violation(i, idx, "non-disjoint", f"column {c + 1} also in set #{used[c] + 1}")
                used[c] = idx
        for idx, rs in enumerate(sets):
            if not spans_unit(column_span(code, rs.cols), i):
                cols = ",".join(str(c + 1) for c in sorted(rs.cols))
                return False, Violation(i, idx, "non-spanning", f"columns {{{cols}}} do not span x_{i + 1}")
        if len(sets) < cert.claimed_k:
            return False, Violation(i, None, "too-few-sets", f"{len(sets)} sets < claimed_k={cert.claimed_k}")
    return True, None


# ---------------------------------------------------------------------------
# certificate file format (1-based columns)

def load_certificate(data) -> RecoveryCertificate:
    doc = load_json(data)
    claimed = require_int(doc, "claimed_k", minimum=0)
    raw_parts = doc.get("parts")
    if not isinstance(raw_parts, list):
        raise FormatError("field 'parts' must be a list")
    parts = []
    for i, raw_sets in enumerate(raw_parts):
        if not isinstance(raw_sets, list):
            raise FormatError(f"part {i + 1}: expected a list of column sets")
        sets = []
        for raw in raw_sets:
            if not isinstance(raw, list) or not raw:
                raise FormatError(f"part {i + 1}: each set must be a nonempty list of columns")
            for c in raw:
                if not isinstance(c, int) or isinstance(c, bool) or c < 1:
                    raise FormatError(f"part {i + 1}: bad column index {c!r}")
            sets.append(RecoverySet(frozenset(c - 1 for c in raw)))
        parts.append(tuple(sets))
    return RecoveryCertificate(claimed_k=claimed, parts=tuple(parts))


def save_certificate(cert: RecoveryCertificate) -> bytes:
    body = [json.dumps([sorted(c + 1 for c in rs.cols) for rs in sets]) for sets in cert.parts]
    lines = ["{", f' "claimed_k": {cert.claimed_k},', ' "parts": [', ",\n".join("  " + b for b in body), " ]", "}"]
    return ("\n".join(lines) + "\n").encode("utf-8")
