"""Random connected test instances."""
from __future__ import annotations

import math
import random

from .graph import WeightedGraph

MODELS = ("gnm", "grid", "cycle", "path")
MAX_TRIES = 200


def _weights(rng: random.Random, count: int, wmin: int, wmax: int) -> list[int]:
    return [rng.randint(wmin, wmax) for _ in range(count)]


def _connected(n: int, pairs) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n
    for u, v in pairs:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            comps -= 1
    return comps <= 1


def gnm(n: int, m: int, seed=0, wmin: int = 1, wmax: int = 10) -> WeightedGraph:
    """Uniform G(n, m) conditioned on connectivity.

    Rejection sampling first; if that keeps failing (m close to n - 1) a random
    spanning tree is topped up with uniform extra edges.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if m < n - 1:
        raise ValueError(f"m={m} < n-1={n - 1}: no connected graph exists")
    if m > n * (n - 1) // 2:
        raise ValueError(f"m={m} exceeds n(n-1)/2={n * (n - 1) // 2}")
    rng = random.Random(seed)
    all_pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    pairs = None
    for _ in range(MAX_TRIES):
        cand = sorted(rng.sample(all_pairs, m))
        if _connected(n, cand):
            pairs = cand
            break
    if pairs is None:
        perm = list(range(n))
        rng.shuffle(perm)
        chosen = set()
        for i in range(1, n):
            a, b = perm[i], perm[rng.randrange(i)]
            chosen.add((min(a, b), max(a, b)))
        rest = [p for p in all_pairs if p not in chosen]
        chosen.update(rng.sample(rest, m - len(chosen)))
        pairs = sorted(chosen)
    w = _weights(rng, m, wmin, wmax)
    return WeightedGraph(n, [(u, v, x) for (u, v), x in zip(pairs, w)])


def grid(rows: int, cols: int, seed=0, wmin: int = 1, wmax: int = 10) -> WeightedGraph:
    rng = random.Random(seed)
    pairs = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                pairs.append((v, v + 1))
            if r + 1 < rows:
                pairs.append((v, v + cols))
    w = _weights(rng, len(pairs), wmin, wmax)
    return WeightedGraph(rows * cols, [(u, v, x) for (u, v), x in zip(pairs, w)])


def cycle(n: int, seed=0, wmin: int = 1, wmax: int = 10) -> WeightedGraph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    rng = random.Random(seed)
    w = _weights(rng, n, wmin, wmax)
    return WeightedGraph(n, [(i, (i + 1) % n, w[i]) for i in range(n)])


def path(n: int, seed=0, wmin: int = 1, wmax: int = 10) -> WeightedGraph:
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    w = _weights(rng, n - 1, wmin, wmax)
    return WeightedGraph(n, [(i, i + 1, w[i]) for i in range(n - 1)])


def generate(model: str, n: int, m: int | None = None, seed=0, wmin: int = 1, wmax: int = 10) -> WeightedGraph:
    """Dispatch on ``model``; ``m`` only matters for ``gnm``.

    ``grid`` uses the most square ``rows x cols`` factorisation of ``n``.
    """
    if wmin < 1 or wmax < wmin:
        raise ValueError(f"invalid weight range [{wmin}, {wmax}]")
    if model == "gnm":
        if m is None:
            raise ValueError("gnm needs m")
        return gnm(n, m, seed, wmin, wmax)
    if model == "grid":
        rows = max(d for d in range(1, math.isqrt(n) + 1) if n % d == 0)
        return grid(rows, n // rows, seed, wmin, wmax)
    if model == "cycle":
        return cycle(n, seed, wmin, wmax)
    if model == "path":
        return path(n, seed, wmin, wmax)
    raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
