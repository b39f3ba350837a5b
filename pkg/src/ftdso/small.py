"""Distance sensitivity oracle for graphs of small hop diameter."""
from __future__ import annotations

from dataclasses import dataclass

from .graph import INF, FailureSet, WeightedGraph, hop_diameter
from .rpc import (
    RpcFamily,
    build_deterministic,
    build_randomized,
    select_params,
    subfamily_deterministic,
    subfamily_randomized,
)
from .tz import query_tz

VARIANTS = ("rand", "det")


def hop_bound(f: int, D: int) -> int:
    """Hop diameter bound of every ``G - F`` with ``|F| <= f``: ``(f+1) D + f``."""
    return (f + 1) * D + f


@dataclass
class SmallDso:
    family: RpcFamily
    k: int
    f: int
    L: int
    D: int
    variant: str
    seed: object = 0
    fingerprint: dict | None = None

    def census(self) -> dict:
        c = self.family.census()
        c["words"] = c["oracle_entries"] + c["dictionary_slots"] + c["index_slots"]
        return c


def build_small(
    g: WeightedGraph,
    k: int,
    f: int,
    D_bound: int | None = None,
    variant: str = "det",
    seed=0,
    *,
    L: int | None = None,
    c: float = 3.0,
    budget_bytes: int | None = None,
    workers: int = 1,
    retain: bool = False,
) -> SmallDso:
    """Build the oracle; ``D_bound=None`` measures the hop diameter of ``g``.

    An explicit ``L`` overrides ``(f+1) D_bound + f``. Underestimating the hop
    diameter voids the stretch bound but never soundness.
    """
    if not (isinstance(k, int) and k >= 1):
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if not (isinstance(f, int) and f >= 1):
        raise ValueError(f"f must be a positive integer, got {f!r}")
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    D = hop_diameter(g) if D_bound is None else int(D_bound)
    if L is None:
        L = max(hop_bound(f, D), f, 2)
    params = select_params(g.m, L, f, c)
    if variant == "det":
        fam = build_deterministic(g, params, k, seed, budget_bytes=budget_bytes, workers=workers)
    else:
        fam = build_randomized(g, params, k, seed, retain=retain, budget_bytes=budget_bytes, workers=workers)
    return SmallDso(family=fam, k=k, f=f, L=L, D=D, variant=variant, seed=seed, fingerprint=g.fingerprint())


def candidate_indices(dso: SmallDso, F) -> list:
    if dso.variant == "det":
        return subfamily_deterministic(dso.family, F)
    return subfamily_randomized(dso.family, F)


def _check_query(dso: SmallDso, F) -> FailureSet:
    F = FailureSet(F)
    if len(F) > dso.f:
        raise ValueError(f"{len(F)} failures exceed sensitivity f={dso.f}")
    for e in F:
        if not 0 <= e < dso.family.params.m:
            raise ValueError(f"edge id {e} out of range [0, {dso.family.params.m})")
    return F


class SmallView:
    """Queries against one failure set; the subfamily is resolved once."""

    def __init__(self, dso: SmallDso, F=()):
        self.dso = dso
        self.F = _check_query(dso, F)
        fam = dso.family
        slots: list[int] = []
        for idx in candidate_indices(dso, self.F):
            slot = fam.slot(idx)
            if slot not in slots:
                slots.append(slot)
        self.slots = slots
        self._oracles = [fam.payloads[sl].oracle for sl in slots]

    def query(self, s: int, t: int) -> float:
        n = self.dso.family.n
        for v in (s, t):
            if not (isinstance(v, int) and 0 <= v < n):
                raise ValueError(f"vertex {v!r} out of range [0, {n})")
        if s == t:
            return 0.0
        best = INF
        for o in self._oracles:
            d = query_tz(o, s, t)
            if d < best:
                best = d
        return best


    def from_source(self, s: int) -> list[float]:
        """``query(s, t)`` for every ``t``; the oracle walk is inlined for speed."""
        n = self.dso.family.n
        self.query(s, s)
        best = [INF] * n
        for o in self._oracles:
            bunch, pivot, pdist, k = o.bunch, o.pivot, o.pivot_dist, o.k
            for t in range(n):
                # same alternating walk as query_tz
                u, v, w, i = s, t, s, 0
                while w not in bunch[v]:
                    i += 1
                    if i >= k:
                        break
                    u, v = v, u
                    w = pivot[i][u]
                    if w is None:
                        break
                else:
                    d = pdist[i][u] + bunch[v][w]
                    if d < best[t]:
                        best[t] = d
        best[s] = 0.0
        return best


def query_small(dso: SmallDso, s: int, t: int, F=()) -> float:
    """Minimum oracle answer over the subgraphs that avoid ``F``."""
    return SmallView(dso, F).query(s, t)
