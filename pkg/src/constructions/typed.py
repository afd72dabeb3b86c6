"""Shared builder for codes made of server types that each store some
singleton cells plus at most one sum cell.

A part x_i is recovered from every server holding it as a singleton, and
from pairs (v, u) where v belongs to type r and involves x_i nowhere, u
belongs to type r+1 and has x_i in its sum. Such a pair recovers x_i exactly
when the other parts of u's sum are all involved in v (the layouts built
here make that the full span condition). Pairs come from a perfect matching
of the per-part bipartite graph between the two sides.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Dict, List, Optional, Sequence, Tuple

from ..arraycode import code_from_parts
from ..errors import CapacityError, ConstructionInvariantError, ParameterError
from ..matching import Bipartite, is_regular, max_matching
from ..models import ConstructionOutput, RecoveryCertificate, RecoverySet, ServerSpec, TypeGroup
from ..settings import load_cfg

logger = logging.getLogger(__name__)

TypeShape = Tuple[int, int]  # (singleton cells, sum size); sum size 0 means no sum cell


def multi_type_shapes(p: int, t: int) -> List[TypeShape]:
    """T_1 holds t singletons, T_r holds t-1 singletons and a sum of (r-1)t+1
    parts, and the last type sums every part its singletons leave out."""
    if t < 1 or p <= t:
        raise ParameterError(f"need p > t >= 1, got p={p}, t={t}")
    last = -(-p // t)  # ceil(p/t)
    shapes: List[TypeShape] = [(t, 0)]
    for r in range(2, last + 1):
        shapes.append((t - 1, min((r - 1) * t + 1, p - t + 1)))
    return shapes


def part_counts(p: int, shape: TypeShape) -> Dict[str, int]:
    """Layouts of one type, split by how a fixed part appears in them."""
    a, sigma = shape
    return {
        "total": comb(p, a) * comb(p - a, sigma),
        "singleton": comb(p - 1, a - 1) * comb(p - a, sigma) if a else 0,
        "sum": comb(p - 1, sigma - 1) * comb(p - sigma, a) if sigma else 0,
        "none": comb(p - 1, a) * comb(p - 1 - a, sigma),
    }


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def balance_eta(p: int, shapes: Sequence[TypeShape]) -> List[int]:
    """Smallest positive multiplicities giving |V_1| = |V_2| in every graph."""
    counts = [part_counts(p, sh) for sh in shapes]
    ratios = [Fraction(1)]
    for r in range(len(shapes) - 1):
        left, right = counts[r]["none"], counts[r + 1]["sum"]
        if not left or not right:
            raise ConstructionInvariantError(f"type {r + 1} -> {r + 2} cannot be balanced (sides {left}, {right})")
        ratios.append(ratios[-1] * Fraction(left, right))
    scale = 1
    for q in ratios:
        scale = _lcm(scale, q.denominator)
    ints = [int(q * scale) for q in ratios]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints]


def family_totals(p: int, shapes: Sequence[TypeShape], eta: Sequence[int]) -> Tuple[int, int, int]:
    """(m, gamma, k): servers, matched pairs per part, and k = m - gamma."""
    counts = [part_counts(p, sh) for sh in shapes]
    m = sum(e * c["total"] for e, c in zip(eta, counts))
    gamma = sum(e * c["none"] for e, c in zip(eta[:-1], counts[:-1]))
    return m, gamma, m - gamma


def multi_type_counts(p: int, t: int) -> Tuple[List[int], int, int, int]:
    """(eta, m, gamma, k) from counting alone, no servers built."""
    shapes = multi_type_shapes(p, t)
    eta = balance_eta(p, shapes)
    m, gamma, k = family_totals(p, shapes, eta)
    return eta, m, gamma, k


def multi_type_rate(p: int, t: int) -> Fraction:
    _eta, m, _gamma, k = multi_type_counts(p, t)
    return Fraction(k, m)


def check_capacity(m: int, max_servers: Optional[int]) -> None:
    if max_servers is None:
        max_servers = load_cfg()["constructions"]["max_servers"]
    if m > max_servers:
        raise CapacityError(f"construction needs m={m} servers, above the cap of {max_servers}")


def shape_layouts(p: int, shape: TypeShape, label: str) -> Tuple[ServerSpec, ...]:
    """All layouts of a shape: singleton sets in lex order, then sum sets in lex order."""
    a, sigma = shape
    out = []
    for singles in combinations(range(p), a):
        rest = [x for x in range(p) if x not in singles]
        if sigma:
            for summed in combinations(rest, sigma):
                out.append(ServerSpec(frozenset(singles), (frozenset(summed),), 1, label))
        else:
            out.append(ServerSpec(frozenset(singles), (), 1, label))
    return tuple(out)


def _server_list(groups: Sequence[TypeGroup]) -> List[Tuple[int, ServerSpec]]:
    servers = []
    for g_idx, group in enumerate(groups):
        for spec in group.layouts:
            servers.extend((g_idx, spec) for _ in range(group.eta))
    return servers


def _columns(t: int, servers: Sequence[Tuple[int, ServerSpec]]) -> List[List[List[int]]]:
    columns = []
    for _g, spec in servers:
        cells = [[x] for x in sorted(spec.singleton_parts)]
        cells.extend(sorted(c) for c in spec.sum_cells)
        if len(cells) != t:
            raise ConstructionInvariantError(f"server layout has {len(cells)} cells, expected t={t}")
        columns.append(cells)
    return columns


def bipartite_graphs(
    p: int, groups: Sequence[TypeGroup], i: int
) -> List[Tuple[Bipartite, List[int], List[int]]]:
    """Per-part graphs between consecutive types, with the column ids of each side."""
    servers = _server_list(groups)
    by_group: List[List[Tuple[int, ServerSpec]]] = [[] for _ in groups]
    for col, (g_idx, spec) in enumerate(servers):
        by_group[g_idx].append((col, spec))
    others = [x for x in range(p) if x != i]
    out = []
    for r in range(len(groups) - 1):
        left_cols, index = [], {}
        width = None
        for col, spec in by_group[r]:
            inv = spec.involved()
            if i in inv:
                continue
            index.setdefault(inv, []).append(len(left_cols))
            left_cols.append(col)
            width = len(inv)
        right_cols, edges = [], []
        for col, spec in by_group[r + 1]:
            summed = spec.sum_cells[0] if spec.sum_cells else frozenset()
            if i not in summed:
                continue
            u = len(right_cols)
            right_cols.append(col)
            rest = summed - {i}
            need = (width or 0) - len(rest)
            if need < 0:
                continue
            free = [x for x in others if x not in rest]
            for extra in combinations(free, need):
                for v in index.get(rest | frozenset(extra), ()):
                    edges.append((v, u))
        out.append((Bipartite.from_edges(len(left_cols), len(right_cols), edges), left_cols, right_cols))
    return out


def build_typed(
    p: int,
    t: int,
    groups: List[TypeGroup],
    family: Dict,
    predicted_k: int,
    predicted_m: int,
    max_servers: Optional[int] = None,
) -> ConstructionOutput:
    check_capacity(predicted_m, max_servers)
    servers = _server_list(groups)
    if len(servers) != predicted_m:
        raise ConstructionInvariantError(f"built {len(servers)} servers, predicted m={predicted_m}")
    code = code_from_parts(p, _columns(t, servers), family=family)

    parts = []
    for i in range(p):
        sets = [RecoverySet(frozenset([col])) for col, (_g, spec) in enumerate(servers) if i in spec.singleton_parts]
        for r, (graph, left, right) in enumerate(bipartite_graphs(p, groups, i)):
            regular, dl, dr = is_regular(graph)
            if not regular:
                raise ConstructionInvariantError(
                    f"graph {r + 1} for x_{i + 1} is not regular (|V1|={graph.left_count}, |V2|={graph.right_count}, degrees {dl}/{dr})"
                )
            matching = max_matching(graph)
            if not matching.is_perfect(graph):
                raise ConstructionInvariantError(f"graph {r + 1} for x_{i + 1} has no perfect matching")
            sets.extend(RecoverySet(frozenset([left[a], right[b]])) for a, b in matching.pairs)
        if len(sets) != predicted_k:
            raise ConstructionInvariantError(f"x_{i + 1} gets {len(sets)} recovery sets, predicted k={predicted_k}")
        parts.append(tuple(sets))

    logger.info("built %s: m=%d k=%d", family.get("name"), predicted_m, predicted_k)
    cert = RecoveryCertificate(claimed_k=predicted_k, parts=tuple(parts))
    return ConstructionOutput(code, cert, predicted_k, predicted_m, family, list(groups))


def multi_type_groups(p: int, t: int, eta: Optional[Sequence[int]] = None) -> List[TypeGroup]:
    shapes = multi_type_shapes(p, t)
    eta = list(eta) if eta is not None else balance_eta(p, shapes)
    groups = []
    for r, (shape, e) in enumerate(zip(shapes, eta), start=1):
        label = f"T{r}"
        groups.append(TypeGroup(label, shape[0], shape[1], e, shape_layouts(p, shape, label)))
    return groups


def describe_types(output: ConstructionOutput) -> List[Dict]:
    return [
        {"type": g.label, "singletons": g.singletons, "sum_size": g.sum_size, "eta": g.eta, "servers": g.servers}
        for g in output.groups
    ]
