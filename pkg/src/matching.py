"""
Bipartite graphs on opaque integer vertices: Hopcroft-Karp maximum matching,
regularity and Hall-condition checks.

Left vertices are 0..left_count-1, right vertices 0..right_count-1. Searches
follow adjacency order, so results are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import FrozenSet, List, Optional, Sequence, Tuple

from .errors import DimensionError

INF = float("inf")


@dataclass(frozen=True)
class Bipartite:
    left_count: int
    right_count: int
    adjacency: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.adjacency) != self.left_count:
            raise DimensionError(f"adjacency has {len(self.adjacency)} rows, expected {self.left_count}")
        for u, nbrs in enumerate(self.adjacency):
            if len(set(nbrs)) != len(nbrs):
                raise DimensionError(f"duplicate edge at left vertex {u}")
            for v in nbrs:
                if not 0 <= v < self.right_count:
                    raise DimensionError(f"right vertex {v} out of range at left vertex {u}")

    @classmethod
    def from_edges(cls, left_count: int, right_count: int, edges: Sequence[Tuple[int, int]]) -> "Bipartite":
        adj: List[set] = [set() for _ in range(left_count)]
        for u, v in edges:
            if not 0 <= u < left_count:
                raise DimensionError(f"left vertex {u} out of range")
            adj[u].add(v)
        return cls(left_count, right_count, tuple(tuple(sorted(a)) for a in adj))

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency)

    def right_degrees(self) -> List[int]:
        deg = [0] * self.right_count
        for nbrs in self.adjacency:
            for v in nbrs:
                deg[v] += 1
        return deg


@dataclass(frozen=True)
class Matching:
    pairs: Tuple[Tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.pairs)

    def is_perfect(self, g: Bipartite) -> bool:
        return self.size == g.left_count == g.right_count


class _HopcroftKarp:
    def __init__(self, g: Bipartite):
        self.g = g
        self.match_l = [-1] * g.left_count
        self.match_r = [-1] * g.right_count
        self.dist: List[float] = [INF] * g.left_count
        self.dist_nil = INF

    def _bfs(self) -> bool:
        queue = deque()
        for u in range(self.g.left_count):
            if self.match_l[u] == -1:
                self.dist[u] = 0
                queue.append(u)
            else:
                self.dist[u] = INF
        self.dist_nil = INF
        while queue:
            u = queue.popleft()
            if self.dist[u] >= self.dist_nil:
                continue
            for v in self.g.adjacency[u]:
                w = self.match_r[v]
                if w == -1:
                    if self.dist_nil == INF:
                        self.dist_nil = self.dist[u] + 1
                elif self.dist[w] == INF:
                    self.dist[w] = self.dist[u] + 1
                    queue.append(w)
        return self.dist_nil != INF

    def _augment(self, root: int, ptr: List[int]) -> bool:
        # iterative DFS along layered edges; via[j] is the edge taken out of stack[j]
        stack, via = [root], []
        while stack:
            u = stack[-1]
            pushed = False
            nbrs = self.g.adjacency[u]
            while ptr[u] < len(nbrs):
                v = nbrs[ptr[u]]
                ptr[u] += 1
                w = self.match_r[v]
                if w == -1:
                    if self.dist_nil == self.dist[u] + 1:
                        via.append(v)
                        for uu, vv in zip(stack, via):
                            self.match_l[uu] = vv
                            self.match_r[vv] = uu
                        return True
                elif self.dist[w] == self.dist[u] + 1:
                    via.append(v)
                    stack.append(w)
                    pushed = True
                    break
            if not pushed:
                self.dist[u] = INF
                stack.pop()
                if via:
                    via.pop()
        return False

    def __call__(self) -> Matching:
        while self._bfs():
            ptr = [0] * self.g.left_count
            for u in range(self.g.left_count):
                if self.match_l[u] == -1:
                    self._augment(u, ptr)
        return Matching(tuple((u, v) for u, v in enumerate(self.match_l) if v != -1))


def max_matching(g: Bipartite) -> Matching:
    return _HopcroftKarp(g)()


def is_regular(g: Bipartite) -> Tuple[bool, int, int]:
    """(regular, left degree, right degree); a degree is -1 when not uniform."""
    left = {len(a) for a in g.adjacency}
    right = set(g.right_degrees())
    dl = left.pop() if len(left) == 1 else (0 if not left else -1)
    dr = right.pop() if len(right) == 1 else (0 if not right else -1)
    ok = dl >= 0 and dr >= 0 and dl == dr and g.left_count == g.right_count
    return ok, dl, dr


def _neighbourhood(g: Bipartite, xs) -> set:
    out = set()
    for u in xs:
        out.update(g.adjacency[u])
    return out


def hall_violator(g: Bipartite, exhaustive: bool = False) -> Optional[FrozenSet[int]]:
    """A left set X with |N(X)| < |X|, or None when the left side can be fully matched.

    The default reads X off the alternating-reachability cut of a maximum
    matching. ``exhaustive`` instead searches subsets by size (left_count <= 22)
    and returns a smallest violator.
    """
    if exhaustive:
        if g.left_count > 22:
            raise DimensionError(f"exhaustive Hall search limited to 22 left vertices, got {g.left_count}")
        for size in range(1, g.left_count + 1):
            for xs in combinations(range(g.left_count), size):
                if len(_neighbourhood(g, xs)) < size:
                    return frozenset(xs)
        return None

    hk = _HopcroftKarp(g)
    matching = hk()
    if matching.size == g.left_count:
        return None
    free = [u for u in range(g.left_count) if hk.match_l[u] == -1]
    reached_l = set(free)
    queue = deque(free)
    while queue:
        u = queue.popleft()
        for v in g.adjacency[u]:
            w = hk.match_r[v]
            # a maximum matching leaves no free right vertex reachable here
            if w != -1 and w not in reached_l:
                reached_l.add(w)
                queue.append(w)
    return frozenset(reached_l)
