"""Brute-force replacement distances: one Dijkstra on G - F per question.

Slow on purpose; everything else is checked against this module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import INF, FailureSet, WeightedGraph, filtered_adjacency, sssp


@dataclass(frozen=True)
class ExactAnswer:
    distance: float
    min_hops: int | None


def _run(g: WeightedGraph, s: int, F) -> tuple[list[float], list[int]]:
    g.check_vertex(s)
    F = FailureSet(F).validate(g)
    dist, hops, _ = sssp(filtered_adjacency(g, frozenset(F)), g.n, s)
    return dist, hops


def exact_replacement(g: WeightedGraph, s: int, t: int, F=()) -> ExactAnswer:
    g.check_vertex(t)
    dist, hops = _run(g, s, F)
    if dist[t] == INF:
        return ExactAnswer(INF, None)
    return ExactAnswer(dist[t], hops[t])


def exact_from_source(g: WeightedGraph, s: int, F=()) -> list[ExactAnswer]:
    """Replacement answers from ``s`` to every vertex (batch form for sweeps)."""
    dist, hops = _run(g, s, F)
    return [ExactAnswer(d, None) if d == INF else ExactAnswer(d, h) for d, h in zip(dist, hops)]


def is_hop_short(g: WeightedGraph, s: int, t: int, F, L: int) -> bool:
    """True iff some shortest s-t path in G - F has at most ``L`` edges."""
    ans = exact_replacement(g, s, t, F)
    return ans.min_hops is not None and ans.min_hops <= L


def pivot_on_some_replacement_path(g: WeightedGraph, s: int, t: int, F, x: int) -> bool:
    """True iff ``x`` lies on at least one shortest s-t path of G - F."""
    g.check_vertex(t)
    g.check_vertex(x)
    from_x, _ = _run(g, x, F)
    total = exact_replacement(g, s, t, F).distance
    if total == INF:
        return False
    return math.isclose(from_x[s] + from_x[t], total, rel_tol=1e-12)
