"""Distance sensitivity oracle for arbitrary hop diameter.

On top of the deterministic covering it keeps a pivot set ``B`` hitting every
long replacement path, and per subgraph a (2k-1)-spanner of the complete graph
on ``B`` weighted by subgraph distances. A query combines the covering
estimate with a shortest path through the pivots.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .graph import INF, FailureSet, WeightedGraph, filtered_adjacency, sssp
from .rpc import (
    BYTES_PER_ENTRY,
    DEFAULT_BUDGET_BYTES,
    BudgetExceeded,
    RpcFamily,
    build_deterministic,
    select_params,
    subfamily_deterministic,
)
from .tz import build_tz, query_tz


@dataclass
class PivotStructure:
    B: list[int]
    K: int
    # per payload slot, distances of pivot pairs (a < b positions in B), flattened
    table: list[list[float]]
    paths: int = 0

    def __post_init__(self):
        self.position = {x: i for i, x in enumerate(self.B)}

    def distance(self, slot: int, x: int, y: int) -> float:
        """Subgraph distance between pivots ``x`` and ``y``."""
        if x == y:
            return 0.0
        a, b = self.position[x], self.position[y]
        if a > b:
            a, b = b, a
        nb = len(self.B)
        return self.table[slot][a * nb - a * (a + 1) // 2 + (b - a - 1)]


@dataclass
class LargeDso:
    family: RpcFamily
    pivots: PivotStructure
    # per payload slot, spanner edges (x, y, w) between pivot vertices
    pivot_spanners: list[list[tuple[int, int, float]]]
    k: int
    f: int
    L: int
    alpha: float
    seed: object = 0
    fingerprint: dict | None = None

    def census(self) -> dict:
        c = self.family.census()
        c["pivots"] = len(self.pivots.B)
        c["pivot_table_entries"] = sum(len(row) for row in self.pivots.table)
        c["pivot_spanner_edges"] = sum(len(s) for s in self.pivot_spanners)
        c["words"] = (
            c["oracle_entries"] + c["index_slots"] + c["pivots"]
            + c["pivot_table_entries"] + 3 * c["pivot_spanner_edges"]
        )
        return c


def subpath_length(L: int, f: int) -> int:
    """Hop length K of the subpaths the pivots must hit, ``ceil(L / (4f+2))``."""
    return max(1, math.ceil(L / (4 * f + 2)))


def large_hop_threshold(n: int, alpha: float, f: int) -> int:
    """``L = n^(alpha/(f+1))`` rounded half up, floored at ``max(f, 2)``."""
    return max(f, 2, math.floor(n ** (alpha / (f + 1)) + 0.5))


def greedy_hitting_set(paths, n: int) -> list[int]:
    """Repeatedly take the vertex on the most unhit paths (lowest id on ties)."""
    on = [[] for _ in range(n)]
    count = [0] * n
    for i, path in enumerate(paths):
        for v in set(path):
            on[v].append(i)
            count[v] += 1
    hit = [False] * len(paths)
    heap = [(-c, v) for v, c in enumerate(count) if c]
    heapq.heapify(heap)
    chosen = []
    while heap:
        negc, v = heapq.heappop(heap)
        if -negc != count[v]:
            if count[v]:
                heapq.heappush(heap, (-count[v], v))
            continue
        chosen.append(v)
        for i in on[v]:
            if hit[i]:
                continue
            hit[i] = True
            for x in set(paths[i]):
                count[x] -= 1
        count[v] = 0
    return sorted(chosen)


def _k_prefixes(adjacency, n: int, root: int, K: int, edges) -> list[tuple[int, ...]]:
    dist, hops, parent = sssp(adjacency, n, root)
    out = []
    for w in range(n):
        if hops[w] != K or dist[w] == INF:
            continue
        path = [w]
        v = w
        while v != root:
            a, b, _ = edges[parent[v]]
            v = a if b == v else b
            path.append(v)
        path.reverse()
        out.append(tuple(path))
    return out


def select_pivots(
    g: WeightedGraph, fam: RpcFamily, L: int, f: int, *, budget_bytes: int | None = None
) -> PivotStructure:
    """Greedy hitting set over one K-edge prefix of every shortest path with
    at least K edges, in every subgraph of the covering, plus the pivot
    distance table."""
    if fam.variant != "det":
        raise ValueError("pivot selection needs a deterministic family")
    K = subpath_length(L, f)
    n = g.n
    paths: set[tuple[int, ...]] = set()
    for slot in range(len(fam.payloads)):
        adjacency = filtered_adjacency(g, frozenset(fam.slot_removed(slot)))
        for u in range(n):
            for path in _k_prefixes(adjacency, n, u, K, g.edges):
                paths.add(min(path, path[::-1]))
    ordered = sorted(paths)
    B = greedy_hitting_set(ordered, n)

    nb = len(B)
    budget = DEFAULT_BUDGET_BYTES if budget_bytes is None else budget_bytes
    est = len(fam.payloads) * (nb * (nb - 1) // 2) * BYTES_PER_ENTRY
    if est > budget:
        raise BudgetExceeded({"stage": "pivot table", "pivots": nb, "unique_subgraphs": len(fam.payloads),
                              "estimated_bytes": est, "budget_bytes": budget})
    table = []
    for slot in range(len(fam.payloads)):
        adjacency = filtered_adjacency(g, frozenset(fam.slot_removed(slot)))
        row = []
        for a in range(nb):
            dist, _, _ = sssp(adjacency, n, B[a])
            row.extend(dist[B[b]] for b in range(a + 1, nb))
        table.append(row)
    return PivotStructure(B=B, K=K, table=table, paths=len(ordered))


def pivot_graph(pivots: PivotStructure, slot: int) -> WeightedGraph:
    """Complete graph on pivot positions weighted by subgraph distances
    (disconnected pairs omitted)."""
    nb = len(pivots.B)
    row = pivots.table[slot]
    edges = []
    i = 0
    for a in range(nb):
        for b in range(a + 1, nb):
            if row[i] != INF:
                edges.append((a, b, row[i]))
            i += 1
    return WeightedGraph(nb, edges)


def build_pivot_spanners(fam: RpcFamily, pivots: PivotStructure, k: int, seed=0) -> list[list[tuple[int, int, float]]]:
    out = []
    for slot in range(len(fam.payloads)):
        H = pivot_graph(pivots, slot)
        _, spanner = build_tz(H, k, f"{seed}:pivot-spanner:{slot}")
        out.append(
            [(pivots.B[H.edges[e][0]], pivots.B[H.edges[e][1]], H.edges[e][2]) for e in sorted(spanner.edge_ids)]
        )
    return out


def build_large(
    g: WeightedGraph,
    k: int,
    f: int,
    alpha: float,
    seed=0,
    *,
    budget_bytes: int | None = None,
    workers: int = 1,
) -> LargeDso:
    if not (isinstance(k, int) and k >= 1):
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if not (isinstance(f, int) and f >= 1):
        raise ValueError(f"f must be a positive integer, got {f!r}")
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    L = large_hop_threshold(g.n, alpha, f)
    params = select_params(g.m, L, f)
    fam = build_deterministic(g, params, k, seed, budget_bytes=budget_bytes, workers=workers)
    pivots = select_pivots(g, fam, L, f, budget_bytes=budget_bytes)
    spanners = build_pivot_spanners(fam, pivots, k, seed)
    return LargeDso(
        family=fam, pivots=pivots, pivot_spanners=spanners, k=k, f=f, L=L, alpha=alpha,
        seed=seed, fingerprint=g.fingerprint(),
    )


def _check_failures(dso: LargeDso, F) -> FailureSet:
    F = FailureSet(F)
    if len(F) > dso.f:
        raise ValueError(f"{len(F)} failures exceed sensitivity f={dso.f}")
    m = dso.family.params.m
    for e in F:
        if not 0 <= e < m:
            raise ValueError(f"edge id {e} out of range [0, {m})")
    return F


def _check_vertices(dso: LargeDso, *vs) -> None:
    n = dso.family.n
    for v in vs:
        if not (isinstance(v, int) and 0 <= v < n):
            raise ValueError(f"vertex {v!r} out of range [0, {n})")


def _check_query(dso: LargeDso, s: int, t: int, F) -> FailureSet:
    F = _check_failures(dso, F)
    _check_vertices(dso, s, t)
    return F


def _slots(dso: LargeDso, F) -> list[int]:
    fam = dso.family
    out = []
    for idx in subfamily_deterministic(fam, F):
        slot = fam.slot(idx)
        if slot not in out:
            out.append(slot)
    return out


def _collapse(edges) -> dict[tuple[int, int], float]:
    best: dict[tuple[int, int], float] = {}
    for x, y, w in edges:
        key = (x, y) if x < y else (y, x)
        if w < best.get(key, INF):
            best[key] = w
    return best


class LargeView:
    """Queries against one failure set.

    The subfamily, the collapsed union of its pivot spanners and every oracle
    minimum seen so far are shared by all queries on the view.
    """

    def __init__(self, dso: LargeDso, F=()):
        self.dso = dso
        self.F = _check_failures(dso, F)
        self.slots = _slots(dso, self.F)
        self._oracles = [dso.family.payloads[sl].oracle for sl in self.slots]
        core: list = []
        for sl in self.slots:
            core.extend(dso.pivot_spanners[sl])
        self._core = _collapse(core)
        self._memo: dict[tuple[int, int], float] = {}

    def oracle_min(self, u: int, v: int) -> float:
        key = (u, v)
        d = self._memo.get(key)
        if d is None:
            d = min((query_tz(o, u, v) for o in self._oracles), default=INF)
            self._memo[key] = d
        return d

    def hf_edges(self, s: int, t: int) -> list[tuple[int, int, float]]:
        best = dict(self._core)
        for x in self.dso.pivots.B:
            for a, b in ((s, x), (x, t)):
                if a == b:
                    continue
                w = self.oracle_min(a, b)
                key = (a, b) if a < b else (b, a)
                if w < best.get(key, INF):
                    best[key] = w
        return [(x, y, w) for (x, y), w in sorted(best.items())]

    def estimates(self, s: int, t: int) -> tuple[float, float]:
        _check_vertices(self.dso, s, t)
        if s == t:
            return 0.0, 0.0
        d1 = self.oracle_min(s, t)
        d2 = _path_distance(self.hf_edges(s, t), s, t)
        return d1, d2

    def query(self, s: int, t: int) -> float:
        d1, d2 = self.estimates(s, t)
        return min(d1, d2)

    def from_source(self, s: int) -> list[float]:
        """``query(s, t)`` for every ``t`` with one search over ``H^F``.

        A shortest s-t route in ``H^F`` enters t last, so its prefix lives in
        the core plus the star of s alone, which is shared by all targets.
        """
        _check_vertices(self.dso, s)
        B = self.dso.pivots.B
        prefix = dict(self._core)
        for x in B:
            if x != s:
                w = self.oracle_min(s, x)
                key = (s, x) if s < x else (x, s)
                if w < prefix.get(key, INF):
                    prefix[key] = w
        adj: dict[int, list[tuple[int, float]]] = {}
        for (x, y), w in prefix.items():
            adj.setdefault(x, []).append((y, w))
            adj.setdefault(y, []).append((x, w))
        dist = _dijkstra_all(adj, s)
        reach = [(x, dist[x]) for x in B if x in dist]
        out = []
        for t in range(self.dso.family.n):
            if t == s:
                out.append(0.0)
                continue
            d2 = dist.get(t, INF) if t in adj else INF
            for x, dx in reach:
                if x == t:
                    continue
                # core and s-star edges into t are already inside dist[t]
                w = self.oracle_min(x, t)
                if dx + w < d2:
                    d2 = dx + w
            out.append(min(self.oracle_min(s, t), d2))
        return out


def _dijkstra_all(adj, s: int) -> dict[int, float]:
    dist = {s: 0.0}
    done = set()
    heap = [(0.0, s)]
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        for y, w in adj.get(x, ()):
            nd = d + w
            if nd < dist.get(y, INF):
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist


def assemble_hf(dso: LargeDso, s: int, t: int, F=(), *, collapse: bool = True):
    """Edges ``(x, y, w)`` of the query multigraph on ``B ∪ {s, t}``.

    With ``collapse`` parallel edges are merged to their minimum weight.
    Slots shared by several indices contribute once either way, since their
    edges would be exact duplicates.
    """
    F = _check_query(dso, s, t, F)
    if collapse:
        return LargeView(dso, F).hf_edges(s, t)
    fam = dso.family
    edges = []
    for slot in _slots(dso, F):
        edges.extend(dso.pivot_spanners[slot])
        oracle = fam.payloads[slot].oracle
        for x in dso.pivots.B:
            if x != s:
                w = query_tz(oracle, s, x)
                if w != INF:
                    edges.append((s, x, w))
            if x != t:
                w = query_tz(oracle, x, t)
                if w != INF:
                    edges.append((x, t, w))
    return edges


def _path_distance(edges, s: int, t: int) -> float:
    if s == t:
        return 0.0
    adj: dict[int, list[tuple[int, float]]] = {}
    for x, y, w in edges:
        adj.setdefault(x, []).append((y, w))
        adj.setdefault(y, []).append((x, w))
    dist = {s: 0.0}
    heap = [(0.0, s)]
    while heap:
        d, x = heapq.heappop(heap)
        if x == t:
            return d
        if d > dist[x]:
            continue
        for y, w in adj.get(x, ()):
            nd = d + w
            if nd < dist.get(y, INF):
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return INF


def estimates(dso: LargeDso, s: int, t: int, F=()) -> tuple[float, float]:
    """The covering estimate and the pivot-graph estimate, separately."""
    return LargeView(dso, F).estimates(s, t)


def query_large(dso: LargeDso, s: int, t: int, F=()) -> float:
    return LargeView(dso, F).query(s, t)


def hf_distance(edges, s: int, t: int) -> float:
    """Shortest s-t distance over an edge list (parallel edges allowed)."""
    return _path_distance(edges, s, t)
