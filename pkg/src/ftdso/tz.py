"""Approximate distance oracle (levels, bunches, clusters) with its compatible spanner.

Levels ``A_0 = V ⊇ A_1 ⊇ ... ⊇ A_{k-1} ⊇ A_k = ∅`` are sampled with rate
``n^(-1/k)``. Each vertex keeps, per level, its nearest level vertex (pivot)
and a bunch of exact distances; the spanner is the union of the cluster
shortest-path trees, so every answer is realised by a path in the spanner.
"""
from __future__ import annotations

import heapq
import random
from dataclasses import dataclass

from .graph import INF, WeightedGraph, filtered_adjacency

LEVEL_RETRIES = 32


@dataclass
class TzOracle:
    k: int
    n: int
    level: list[int]
    pivot: list[list[int | None]]
    pivot_dist: list[list[float]]
    bunch: list[dict[int, float]]

    def levels(self) -> list[list[int]]:
        """Vertex sets ``A_0 .. A_k``."""
        return [[v for v in range(self.n) if self.level[v] >= i] for i in range(self.k + 1)]

    def entries(self) -> int:
        return sum(len(b) for b in self.bunch) + self.k * self.n

    def to_payload(self) -> dict:
        offsets, ws, ds = [0], [], []
        for b in self.bunch:
            for w in sorted(b):
                ws.append(w)
                ds.append(b[w])
            offsets.append(len(ws))
        return {
            "k": self.k,
            "n": self.n,
            "level": self.level,
            "pivot": [[-1 if p is None else p for p in row] for row in self.pivot],
            "pivot_dist": self.pivot_dist,
            "bunch": [offsets, ws, ds],
        }

    @classmethod
    def from_payload(cls, d: dict) -> "TzOracle":
        offsets, ws, ds = d["bunch"]
        bunch = [
            {ws[j]: float(ds[j]) for j in range(offsets[v], offsets[v + 1])}
            for v in range(d["n"])
        ]
        return cls(
            k=d["k"],
            n=d["n"],
            level=list(d["level"]),
            pivot=[[None if p < 0 else p for p in row] for row in d["pivot"]],
            pivot_dist=[[float(x) for x in row] for row in d["pivot_dist"]],
            bunch=bunch,
        )


@dataclass
class TzSpanner:
    edge_ids: frozenset[int]
    m: int

    def __len__(self) -> int:
        return len(self.edge_ids)


def sample_levels(n: int, k: int, rng: random.Random) -> list[int]:
    """Top level of every vertex; ``level[v] >= i`` iff ``v ∈ A_i``."""
    level = [0] * n
    prob = n ** (-1.0 / k) if n > 0 else 0.0
    current = list(range(n))
    for i in range(1, k):
        if not current:
            break
        for _ in range(LEVEL_RETRIES):
            nxt = [v for v in current if rng.random() < prob]
            if nxt:
                break
        for v in nxt:
            level[v] = i
        current = nxt
    return level


def _nearest(adjacency, n: int, sources: list[int]) -> tuple[list[float], list[int | None]]:
    # labels (dist, source) compared lexicographically
    dist = [INF] * n
    src: list[int | None] = [None] * n
    heap = []
    for s in sources:
        dist[s] = 0.0
        src[s] = s
        heap.append((0.0, s, s))
    heapq.heapify(heap)
    done = [False] * n
    while heap:
        d, s, x = heapq.heappop(heap)
        if done[x]:
            continue
        done[x] = True
        for y, _, w in adjacency[x]:
            nd = d + w
            if nd < dist[y] or (nd == dist[y] and s < src[y]):
                dist[y] = nd
                src[y] = s
                heapq.heappush(heap, (nd, s, y))
    return dist, src


def build_tz(
    g: WeightedGraph, k: int, seed=0, removed=(), *, level: list[int] | None = None
) -> tuple[TzOracle, TzSpanner]:
    """Build the oracle and spanner for ``g`` minus the edge ids in ``removed``.

    ``level`` fixes the top level of every vertex instead of sampling.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    n = g.n
    adjacency = filtered_adjacency(g, frozenset(removed))
    if level is None:
        rng = seed if isinstance(seed, random.Random) else random.Random(seed)
        level = sample_levels(n, k, rng)
    elif len(level) != n or any(not 0 <= x < k for x in level):
        raise ValueError("level must give every vertex a top level in [0, k)")

    pivot: list[list[int | None]] = [[None] * n for _ in range(k + 1)]
    pivot_dist: list[list[float]] = [[INF] * n for _ in range(k + 1)]
    for i in range(k - 1, -1, -1):
        members = [v for v in range(n) if level[v] >= i]
        d, p = _nearest(adjacency, n, members)
        upper_d, upper_p = pivot_dist[i + 1], pivot[i + 1]
        for v in range(n):
            # ties defer to the higher level so that v lies in its pivot's cluster
            if d[v] != INF and d[v] == upper_d[v]:
                p[v] = upper_p[v]
        pivot[i], pivot_dist[i] = p, d

    bunch: list[dict[int, float]] = [{} for _ in range(n)]
    tree_edges: set[int] = set()
    pop, push = heapq.heappop, heapq.heappush
    for w in range(n):
        bound = pivot_dist[level[w] + 1]
        dist = {w: 0.0}
        parent_edge: dict[int, int] = {}
        done = set()
        heap = [(0.0, w)]
        while heap:
            d, x = pop(heap)
            if x in done:
                continue
            done.add(x)
            bunch[x][w] = d
            if x in parent_edge:
                tree_edges.add(parent_edge[x])
            for y, e, wt in adjacency[x]:
                nd = d + wt
                if nd < bound[y] and nd < dist.get(y, INF):
                    dist[y] = nd
                    parent_edge[y] = e
                    push(heap, (nd, y))

    oracle = TzOracle(k=k, n=n, level=level, pivot=pivot[:k], pivot_dist=pivot_dist[:k], bunch=bunch)
    return oracle, TzSpanner(frozenset(tree_edges), g.m)


def query_tz(o: TzOracle, u: int, v: int) -> float:
    """Estimate within ``[d(u,v), (2k-1) d(u,v)]``; Infinity if disconnected."""
    if u == v:
        return 0.0
    bunch = o.bunch
    i = 0
    w = u
    while w not in bunch[v]:
        i += 1
        if i >= o.k:
            return INF
        u, v = v, u
        w = o.pivot[i][u]
        if w is None:
            return INF
    return o.pivot_dist[i][u] + bunch[v][w]


def spanner_has_edge(s: TzSpanner, e: int) -> bool:
    if not (isinstance(e, int) and 0 <= e < s.m):
        raise ValueError(f"edge id {e!r} out of range [0, {s.m})")
    return e in s.edge_ids
