"""Property sweeps comparing oracle answers with brute-force replacement distances."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .exact import exact_from_source
from .graph import INF, FailureSet, WeightedGraph, filtered_adjacency, sssp
from .large import LargeDso, LargeView
from .rpc import RpcFamily, subfamily_deterministic
from .small import SmallDso, SmallView

MAX_EXAMPLES = 5


def view(dso, F=()):
    """A query view of ``dso`` for the failure set ``F``."""
    if isinstance(dso, SmallDso):
        return SmallView(dso, F)
    if isinstance(dso, LargeDso):
        return LargeView(dso, F)
    raise TypeError(f"not an oracle: {type(dso).__name__}")


def query(dso, s: int, t: int, F=()) -> float:
    return view(dso, F).query(s, t)


def stretch_of(dso) -> int:
    return 2 * dso.k - 1


@dataclass
class Record:
    s: int
    t: int
    F: FailureSet
    answer: float
    exact: float
    min_hops: int | None

    @property
    def ratio(self) -> float:
        if self.answer == self.exact:
            return 1.0
        if self.exact == 0:
            return INF
        return self.answer / self.exact


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    violations: int = 0
    examples: list = field(default_factory=list)
    note: str = ""

    def add(self, ok: bool, example=None) -> None:
        self.checked += 1
        if not ok:
            self.violations += 1
            if len(self.examples) < MAX_EXAMPLES:
                self.examples.append(example)

    @property
    def rate(self) -> float:
        return self.violations / self.checked if self.checked else 0.0


def sample_failure_sets(g: WeightedGraph, f: int, count: int, rng: random.Random,
                        sizes=None) -> list[FailureSet]:
    """``count`` random failure sets; sizes drawn uniformly from ``sizes`` (default 1..f)."""
    sizes = list(sizes) if sizes is not None else list(range(1, f + 1))
    out = []
    for _ in range(count):
        a = min(rng.choice(sizes), g.m)
        out.append(FailureSet(rng.sample(range(g.m), a)))
    return out


def sweep(g: WeightedGraph, dso, failure_sets, pairs=None) -> list[Record]:
    """Answer every (s, t) of ``pairs`` (default: all ordered s != t) for each F."""
    records = []
    for F in failure_sets:
        by_source: dict[int, list[int]] = {}
        if pairs is None:
            for s in range(g.n):
                by_source[s] = [t for t in range(g.n) if t != s]
        else:
            for s, t in pairs:
                by_source.setdefault(s, []).append(t)
        v = view(dso, F)
        for s, targets in by_source.items():
            exact = exact_from_source(g, s, F)
            answers = v.from_source(s)
            for t in targets:
                records.append(Record(s, t, F, answers[t], exact[t].distance, exact[t].min_hops))
    return records


def check_soundness(records) -> CheckResult:
    res = CheckResult("soundness")
    for r in records:
        res.add(r.answer >= r.exact or math.isclose(r.answer, r.exact, rel_tol=1e-12), r)
    return res


def check_stretch(records, sigma: int, L: int | None = None) -> CheckResult:
    """``exact <= answer <= sigma * exact``; restricted to hop-short queries if ``L`` given."""
    res = CheckResult("stretch", note=f"sigma={sigma}" + (f", hop-short L={L}" if L is not None else ""))
    for r in records:
        if L is not None and (r.min_hops is None or r.min_hops > L):
            continue
        if r.exact == INF:
            ok = r.answer == INF
        else:
            ok = r.exact <= r.answer * (1 + 1e-12) and r.answer <= sigma * r.exact * (1 + 1e-12)
        res.add(ok, r)
    return res


def subgraph_distances(g: WeightedGraph, removed, s: int) -> list[float]:
    dist, _, _ = sssp(filtered_adjacency(g, frozenset(removed)), g.n, s)
    return dist


def check_covering(g: WeightedGraph, fam: RpcFamily, failure_sets, L: int, sources=None) -> CheckResult:
    """For hop-short (s, t, F): min over the subfamily of exact subgraph
    distances equals the replacement distance, and no subgraph keeps an edge of F."""
    res = CheckResult("covering", note=f"L={L}")
    sources = range(g.n) if sources is None else sources
    for F in failure_sets:
        slots = sorted({fam.slot(idx) for idx in subfamily_deterministic(fam, F)})
        removed = [fam.slot_removed(sl) for sl in slots]
        for rm in removed:
            res.add(set(F) <= set(rm), ("subgraph keeps a failed edge", F, rm))
        for s in sources:
            exact = exact_from_source(g, s, F)
            best = [INF] * g.n
            for rm in removed:
                for t, d in enumerate(subgraph_distances(g, rm, s)):
                    if d < best[t]:
                        best[t] = d
            for t in range(g.n):
                e = exact[t]
                if t == s or e.min_hops is None or e.min_hops > L:
                    continue
                res.add(best[t] == e.distance, (s, t, F, best[t], e.distance))
    return res


def check_hitting(g: WeightedGraph, dso: LargeDso, failure_sets, pairs=None, min_hops=None,
                  limit: int | None = None) -> CheckResult:
    """Queries whose replacement paths all have >= ``min_hops`` edges (default L/2)
    have a replacement path through some pivot."""
    threshold = dso.L / 2 if min_hops is None else min_hops
    res = CheckResult("pivot hitting", note=f"min_hops >= {threshold:g}")
    B = dso.pivots.B
    for F in failure_sets:
        from_pivot = {x: subgraph_distances(g, F, x) for x in B}
        sources = range(g.n) if pairs is None else sorted({s for s, _ in pairs})
        wanted = None if pairs is None else set(pairs)
        for s in sources:
            exact = exact_from_source(g, s, F)
            for t in range(g.n):
                if t == s or (wanted is not None and (s, t) not in wanted):
                    continue
                e = exact[t]
                if e.min_hops is None or e.min_hops < threshold:
                    continue
                ok = any(math.isclose(from_pivot[x][s] + from_pivot[x][t], e.distance, rel_tol=1e-12) for x in B)
                res.add(ok, (s, t, F))
                if limit is not None and res.checked >= limit:
                    return res
    return res


def verify_oracle(g: WeightedGraph, dso, queries: int = 500, seed=0) -> dict[str, CheckResult]:
    """Sampled sweep over ``queries`` random (s, t, F) against the exact oracle."""
    rng = random.Random(f"{seed}:verify")
    failure_sets = sample_failure_sets(g, dso.f, max(1, queries // max(1, g.n)), rng, sizes=range(0, dso.f + 1))
    pairs = []
    while len(pairs) < queries and g.n > 1:
        s, t = rng.sample(range(g.n), 2)
        pairs.append((s, t))
    per_f = max(1, len(pairs) // len(failure_sets))
    records = []
    for i, F in enumerate(failure_sets):
        chunk = pairs[i * per_f:(i + 1) * per_f]
        records.extend(sweep(g, dso, [F], chunk))
    sigma = stretch_of(dso)
    out = {"soundness": check_soundness(records)}
    if isinstance(dso, LargeDso):
        out["stretch"] = check_stretch(records, sigma)
        out["covering"] = check_covering(g, dso.family, failure_sets[:3], dso.L, sources=range(min(g.n, 8)))
        out["hitting"] = check_hitting(g, dso, failure_sets, pairs=pairs)
    elif dso.variant == "det":
        out["stretch"] = check_stretch(records, sigma, L=dso.L)
        out["covering"] = check_covering(g, dso.family, failure_sets[:3], dso.L, sources=range(min(g.n, 8)))
    else:
        st = check_stretch(records, sigma, L=dso.L)
        st.note += f", randomized: rate {st.rate:.4f} (<= 0.01 tolerated)"
        out["stretch"] = st
    return out


def report_failed(results: dict[str, CheckResult], rand_tolerance: float = 0.01) -> bool:
    for name, r in results.items():
        if name == "stretch" and "randomized" in r.note:
            if r.rate > rand_tolerance:
                return True
        elif r.violations:
            return True
    return False
