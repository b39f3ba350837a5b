"""Weighted undirected graphs, hop-aware Dijkstra and the text graph format."""
from __future__ import annotations

import hashlib
import heapq
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

INF = math.inf

# advisory bound on max/min weight, as a power of n
WEIGHT_RANGE_EXPONENT = 4


class GraphFormatError(ValueError):
    """Raised when a graph file cannot be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class WeightedGraph:
    """Immutable undirected simple graph with stable integer edge ids.

    Edge ``i`` is ``edges[i] = (u, v, w)`` with ``u < v``. ``adjacency[x]`` lists
    ``(neighbor, edge_id, weight)`` triples.
    """

    __slots__ = ("n", "edges", "adjacency", "_pairs")

    def __init__(self, n: int, edges: Iterable[Sequence[float]]):
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        self.n = int(n)
        normalized = []
        pairs: dict[tuple[int, int], int] = {}
        for i, (u, v, w) in enumerate(edges):
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {i}: vertex out of range [0, {n})")
            if u == v:
                raise ValueError(f"edge {i}: self-loop at vertex {u}")
            if not (w > 0) or math.isinf(w):
                raise ValueError(f"edge {i}: weight must be positive and finite, got {w}")
            if u > v:
                u, v = v, u
            if (u, v) in pairs:
                raise ValueError(f"edge {i}: duplicate of edge {pairs[(u, v)]} ({u}, {v})")
            pairs[(u, v)] = i
            normalized.append((u, v, w))
        self.edges: tuple[tuple[int, int, float], ...] = tuple(normalized)
        self._pairs = pairs
        adjacency: list[list[tuple[int, int, float]]] = [[] for _ in range(n)]
        for i, (u, v, w) in enumerate(self.edges):
            adjacency[u].append((v, i, w))
            adjacency[v].append((u, i, w))
        self.adjacency = tuple(tuple(a) for a in adjacency)
        if self.edges:
            weights = [w for _, _, w in self.edges]
            lo, hi = min(weights), max(weights)
            if n > 1 and hi / lo > float(n) ** WEIGHT_RANGE_EXPONENT:
                warnings.warn(
                    f"weight ratio {hi / lo:g} exceeds n^{WEIGHT_RANGE_EXPONENT}; "
                    "weights are assumed polynomially bounded",
                    stacklevel=2,
                )

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_id(self, u: int, v: int) -> int:
        """Id of the edge joining ``u`` and ``v``; KeyError if absent."""
        key = (u, v) if u < v else (v, u)
        return self._pairs[key]

    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise ValueError(f"vertex {v!r} out of range [0, {self.n})")

    def check_edge(self, e: int) -> None:
        if not (isinstance(e, int) and 0 <= e < self.m):
            raise ValueError(f"edge id {e!r} out of range [0, {self.m})")

    def fingerprint(self) -> dict:
        digest = hashlib.sha256(serialize_graph(self).encode()).hexdigest()
        return {"n": self.n, "m": self.m, "checksum": digest[:16]}

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, WeightedGraph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"


class FailureSet(tuple):
    """Sorted, duplicate-free tuple of failed edge ids."""

    def __new__(cls, edge_ids: Iterable[int] = ()):
        ids = sorted({int(e) for e in edge_ids})
        return super().__new__(cls, ids)

    def validate(self, g: WeightedGraph, f: int | None = None) -> "FailureSet":
        for e in self:
            g.check_edge(e)
        if f is not None and len(self) > f:
            raise ValueError(f"{len(self)} failures exceed sensitivity f={f}")
        return self

    def __repr__(self) -> str:
        return f"FailureSet({list(self)})"


@dataclass(frozen=True)
class SsspResult:
    dist: list[float]
    hops: list[int]
    parent: list[int | None]

    def path_edges(self, g: WeightedGraph, target: int) -> list[int]:
        """Edge ids on the recorded path from the source to ``target``."""
        if self.dist[target] == INF:
            raise ValueError(f"vertex {target} is unreachable")
        out = []
        v = target
        while self.parent[v] is not None:
            e = self.parent[v]
            out.append(e)
            a, b, _ = g.edges[e]
            v = a if b == v else b
        out.reverse()
        return out

    def path_vertices(self, g: WeightedGraph, target: int) -> list[int]:
        if self.dist[target] == INF:
            raise ValueError(f"vertex {target} is unreachable")
        out = [target]
        v = target
        while self.parent[v] is not None:
            a, b, _ = g.edges[self.parent[v]]
            v = a if b == v else b
            out.append(v)
        out.reverse()
        return out


def filtered_adjacency(g: WeightedGraph, removed) -> list[list[tuple[int, int, float]]]:
    """Adjacency lists of ``g`` with the edge ids in ``removed`` dropped."""
    if not removed:
        return g.adjacency
    removed = removed if isinstance(removed, (set, frozenset)) else set(removed)
    return [[t for t in nbrs if t[1] not in removed] for nbrs in g.adjacency]


def sssp(adjacency, n: int, source: int) -> tuple[list[float], list[int], list[int | None]]:
    """Lexicographic (weight, hops) Dijkstra over raw adjacency lists.

    Heap entries are ``(dist, hops, vertex)`` so ties resolve toward fewer hops,
    then lower vertex id.
    """
    dist = [INF] * n
    hops = [0] * n
    parent: list[int | None] = [None] * n
    done = [False] * n
    dist[source] = 0.0
    heap = [(0.0, 0, source)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, h, x = pop(heap)
        if done[x]:
            continue
        done[x] = True
        h1 = h + 1
        for y, e, w in adjacency[x]:
            if done[y]:
                continue
            nd = d + w
            dy = dist[y]
            if nd < dy or (nd == dy and h1 < hops[y]):
                dist[y] = nd
                hops[y] = h1
                parent[y] = e
                push(heap, (nd, h1, y))
    return dist, hops, parent


def dijkstra(g: WeightedGraph, source: int, forbidden: Iterable[int] = ()) -> SsspResult:
    """Shortest distances from ``source`` in ``g`` minus ``forbidden`` edges.

    Among equal-weight paths the one with the fewest edges is recorded.
    """
    g.check_vertex(source)
    forbidden = FailureSet(forbidden).validate(g)
    dist, hops, parent = sssp(filtered_adjacency(g, frozenset(forbidden)), g.n, source)
    return SsspResult(dist, hops, parent)


def hop_diameter(g: WeightedGraph) -> int:
    """Largest hop count over the min-hop shortest paths of all reachable pairs."""
    best = 0
    for s in range(g.n):
        dist, hops, _ = sssp(g.adjacency, g.n, s)
        for d, h in zip(dist, hops):
            if d != INF and h > best:
                best = h
    return best


def _format_weight(w: float) -> str:
    return str(int(w)) if w == int(w) else repr(w)


def load_graph(text: str) -> WeightedGraph:
    """Parse the ``n m`` / ``u v w`` text format; ``#`` lines are comments."""
    header = None
    edges = []
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append((lineno, line))
    if not lines:
        raise GraphFormatError("missing 'n m' header")
    lineno, line = lines[0]
    parts = line.split()
    try:
        if len(parts) != 2:
            raise ValueError
        header = (int(parts[0]), int(parts[1]))
    except ValueError:
        raise GraphFormatError(f"expected 'n m', got {line!r}", lineno) from None
    n, m = header
    if n < 0 or m < 0:
        raise GraphFormatError("n and m must be non-negative", lineno)
    seen: dict[tuple[int, int], int] = {}
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise GraphFormatError(f"expected 'u v w', got {line!r}", lineno)
        try:
            u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise GraphFormatError(f"cannot parse {line!r}", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex out of range [0, {n})", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        if not (w > 0) or math.isinf(w):
            raise GraphFormatError(f"weight must be positive and finite, got {parts[2]}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        edges.append((u, v, w))
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(edges)}")
    return WeightedGraph(n, edges)


def serialize_graph(g: WeightedGraph) -> str:
    """Canonical text form: edges in id order with ``u < v``."""
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v} {_format_weight(w)}" for u, v, w in g.edges)
    return "\n".join(out) + "\n"


def canonical_graph(g: WeightedGraph) -> WeightedGraph:
    """Same graph with edges sorted by endpoint pair (edge ids renumbered)."""
    return WeightedGraph(g.n, sorted(g.edges))


def read_graph(path) -> WeightedGraph:
    with open(path, encoding="utf-8") as fh:
        return load_graph(fh.read())


def write_graph(g: WeightedGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_graph(g))
