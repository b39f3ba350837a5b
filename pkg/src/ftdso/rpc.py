"""(L, f)-replacement path coverings.

Two families of spanning subgraphs of G, each subgraph replaced by a TZ oracle:

* randomized: ``ceil(c f L^f ln n)`` subgraphs, every edge dropped with
  probability ``1/L``; each oracle keeps its spanner as an edge dictionary so
  the subgraphs avoiding F can be found by probing.
* deterministic: subgraphs ``G_(j,S)`` drop the edges whose Reed-Solomon
  symbol in column ``j`` lies in ``S``; the subgraphs avoiding F are found by
  re-encoding the failed edges.
"""
from __future__ import annotations

import hashlib
import itertools
import math
import random
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Union

from .gf import field
from .graph import WeightedGraph
from .tz import TzOracle, TzSpanner, build_tz

DEFAULT_BUDGET_BYTES = 1 << 30
# rough in-memory cost of one oracle/table entry (dict slot + boxed float)
BYTES_PER_ENTRY = 64

SubgraphIndex = Union[int, tuple]


class BudgetExceeded(RuntimeError):
    """Raised instead of building a family that would not fit the memory budget."""

    def __init__(self, report: dict):
        self.report = report
        lines = ", ".join(f"{k}={v}" for k, v in report.items())
        super().__init__(f"estimated memory exceeds budget ({lines}); shrink L, f or n")


@dataclass(frozen=True)
class RpcParams:
    L: int
    f: int
    m: int
    q: int
    p: int
    ell: int
    c: float = 3.0

    @property
    def bits(self) -> int:
        return self.q.bit_length() - 1

    def distance_ok(self) -> bool:
        """Code distance ``1 - (p-1)/q`` exceeds ``1 - 1/(fL)``."""
        return (self.p - 1) * self.f * self.L < self.q


def select_params(m: int, L: int, f: int, c: float = 3.0) -> RpcParams:
    """Field size, message length and block length for ``m`` edges.

    ``q`` is the smallest power of two with ``q > f L log_L m``. The comparison
    is done exactly as ``L^q > m^(fL)``.
    """
    if not (isinstance(f, int) and f >= 1):
        raise ValueError(f"f must be a positive integer, got {f!r}")
    if not (isinstance(L, int) and L >= max(f, 2)):
        raise ValueError(f"L must be an integer >= max(f, 2) = {max(f, 2)}, got {L!r}")
    if not (isinstance(m, int) and m >= 2):
        raise ValueError(f"need at least 2 edges, got m={m!r}")
    target = m ** (f * L)
    q = 1
    while L**q <= target:
        q *= 2
    p = 1
    while q**p < m:
        p += 1
    params = RpcParams(L=L, f=f, m=m, q=q, p=p, ell=q, c=c)
    # q <= 2 f L log_L m, i.e. L^q <= m^(2fL)
    assert L**q <= m ** (2 * f * L), params
    if not params.distance_ok():
        warnings.warn(f"code distance bound (p-1)/q < 1/(fL) violated for {params}", stacklevel=2)
    return params


def rs_codeword(edge_id: int, params: RpcParams) -> list[int]:
    """Reed-Solomon codeword of an edge: its base-q digits as polynomial
    coefficients, evaluated at every element of GF(q) in integer order."""
    if not (isinstance(edge_id, int) and 0 <= edge_id < params.m):
        raise ValueError(f"edge id {edge_id!r} out of range [0, {params.m})")
    gf = field(params.q)
    mask = params.q - 1
    coeffs = [(edge_id >> (params.bits * j)) & mask for j in range(params.p)]
    return [gf.poly_eval(coeffs, x) for x in range(params.ell)]


def deterministic_indices(params: RpcParams) -> list[tuple[int, tuple[int, ...]]]:
    """All ``(j, S)`` in canonical order: j ascending, S by size then lexicographic."""
    sets = [S for a in range(params.f + 1) for S in itertools.combinations(range(params.q), a)]
    return [(j, S) for j in range(params.ell) for S in sets]


def family_size(params: RpcParams) -> int:
    return params.ell * sum(math.comb(params.q, a) for a in range(params.f + 1))


def randomized_size(params: RpcParams, n: int) -> int:
    return math.ceil(params.c * params.f * params.L**params.f * math.log(n))


def oracle_entry_estimate(n: int, k: int) -> float:
    return k * n ** (1 + 1 / k) + k * n


@dataclass
class Payload:
    oracle: TzOracle
    spanner: TzSpanner | None = None


@dataclass
class RpcFamily:
    params: RpcParams
    variant: str
    k: int
    n: int
    payloads: list[Payload]
    # per canonical index position, the payload slot holding its oracle
    slots: list[int]
    retained: list[tuple[int, ...]] | None = None
    _position: dict = dc_field(default_factory=dict, repr=False)
    _matrix: list | None = dc_field(default=None, repr=False)
    _slot_removed: list | None = dc_field(default=None, repr=False)

    def __post_init__(self):
        if self.variant == "det" and not self._position:
            self._position = {idx: i for i, idx in enumerate(deterministic_indices(self.params))}

    @property
    def size(self) -> int:
        """Number of subgraphs (indices), counting duplicates."""
        return len(self.slots)

    def indices(self) -> list[SubgraphIndex]:
        if self.variant == "det":
            return deterministic_indices(self.params)
        return list(range(len(self.slots)))

    def slot(self, index: SubgraphIndex) -> int:
        if self.variant == "det":
            j, S = index
            return self.slots[self._position[(j, tuple(sorted(S)))]]
        return self.slots[index]

    def oracle(self, index: SubgraphIndex) -> TzOracle:
        return self.payloads[self.slot(index)].oracle

    def codeword_matrix(self) -> list[list[int]]:
        if self._matrix is None:
            self._matrix = [rs_codeword(e, self.params) for e in range(self.params.m)]
        return self._matrix

    def removed_edges(self, index: SubgraphIndex) -> tuple[int, ...]:
        """Edge ids absent from the subgraph ``index``.

        Recomputed from codewords for the deterministic family; the randomized
        family only knows them when built with ``retain=True``.
        """
        if self.variant == "det":
            j, S = index
            S = set(S)
            return tuple(e for e, row in enumerate(self.codeword_matrix()) if row[j] in S)
        if self.retained is None:
            raise LookupError("removal draws were discarded; build with retain=True")
        return self.retained[self.slots[index]]

    def slot_removed(self, slot: int) -> tuple[int, ...]:
        """Removed edge ids of the subgraph stored in payload ``slot``."""
        if self._slot_removed is None:
            if self.variant == "rand":
                return self.removed_edges(self.slots.index(slot))
            first: dict[int, tuple] = {}
            for idx, sl in zip(self.indices(), self.slots):
                first.setdefault(sl, idx)
            self._slot_removed = [self.removed_edges(first[i]) for i in range(len(self.payloads))]
        return self._slot_removed[slot]

    def census(self) -> dict:
        entries = sum(p.oracle.entries() for p in self.payloads)
        spanner_edges = sum(len(p.spanner) for p in self.payloads if p.spanner is not None)
        return {
            "subgraphs": self.size,
            "unique_subgraphs": len(self.payloads),
            "oracle_entries": entries,
            "spanner_edges": spanner_edges,
            "dictionary_slots": spanner_edges,
            "index_slots": len(self.slots) if self.variant == "det" else 0,
        }


def _tz_seed(seed, removed: tuple[int, ...]) -> str:
    digest = hashlib.sha256(",".join(map(str, removed)).encode()).hexdigest()[:16]
    return f"{seed}:tz:{digest}"


def _build_payload(args) -> Payload:
    g, k, seed, removed, keep_spanner = args
    oracle, spanner = build_tz(g, k, seed, removed)
    return Payload(oracle, spanner if keep_spanner else None)


def _build_all(g, k, jobs, keep_spanner, workers) -> list[Payload]:
    tasks = [(g, k, s, r, keep_spanner) for s, r in jobs]
    if workers and workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_build_payload, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [_build_payload(t) for t in tasks]


def _check_budget(report: dict, budget_bytes: int | None) -> None:
    budget = DEFAULT_BUDGET_BYTES if budget_bytes is None else budget_bytes
    report["budget_bytes"] = budget
    if report["estimated_bytes"] > budget:
        raise BudgetExceeded(report)


def build_randomized(
    g: WeightedGraph,
    params: RpcParams,
    k: int,
    seed=0,
    *,
    retain: bool = False,
    budget_bytes: int | None = None,
    workers: int = 1,
) -> RpcFamily:
    if params.m != g.m:
        raise ValueError(f"params built for m={params.m}, graph has m={g.m}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    r = randomized_size(params, g.n)
    per = 2 * oracle_entry_estimate(g.n, k)
    _check_budget(
        {"variant": "rand", "n": g.n, "L": params.L, "f": params.f, "subgraphs": r,
         "estimated_bytes": int(r * per * BYTES_PER_ENTRY)},
        budget_bytes,
    )
    rng = random.Random(f"{seed}:rpc")
    rate = 1.0 / params.L
    jobs = []
    for i in range(r):
        removed = tuple(e for e in range(g.m) if rng.random() < rate)
        jobs.append((f"{seed}:tz:{i}", removed))
    payloads = _build_all(g, k, jobs, True, workers)
    return RpcFamily(
        params=params,
        variant="rand",
        k=k,
        n=g.n,
        payloads=payloads,
        slots=list(range(r)),
        retained=[rm for _, rm in jobs] if retain else None,
    )


def build_deterministic(
    g: WeightedGraph,
    params: RpcParams,
    k: int,
    seed=0,
    *,
    budget_bytes: int | None = None,
    workers: int = 1,
) -> RpcFamily:
    """One oracle per ``(j, S)``; identical subgraphs share one oracle.

    The oracle seed is derived from the removed edge set, so sharing does not
    change any answer.
    """
    if params.m != g.m:
        raise ValueError(f"params built for m={params.m}, graph has m={g.m}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    total = family_size(params)
    per = oracle_entry_estimate(g.n, k)
    report = {"variant": "det", "n": g.n, "L": params.L, "f": params.f, "q": params.q,
              "subgraphs": total, "estimated_bytes": int(total * BYTES_PER_ENTRY)}
    _check_budget(report, budget_bytes)

    matrix = [rs_codeword(e, params) for e in range(g.m)]
    buckets = [[[] for _ in range(params.q)] for _ in range(params.ell)]
    for e, row in enumerate(matrix):
        for j, sym in enumerate(row):
            buckets[j][sym].append(e)

    key_slot: dict[tuple[int, ...], int] = {}
    jobs = []
    slots = []
    for j, S in deterministic_indices(params):
        removed = tuple(sorted(itertools.chain.from_iterable(buckets[j][s] for s in S)))
        slot = key_slot.get(removed)
        if slot is None:
            slot = key_slot[removed] = len(jobs)
            jobs.append((_tz_seed(seed, removed), removed))
        slots.append(slot)

    report["unique_subgraphs"] = len(jobs)
    report["estimated_bytes"] = int((total + len(jobs) * per) * BYTES_PER_ENTRY)
    _check_budget(report, budget_bytes)

    payloads = _build_all(g, k, jobs, False, workers)
    fam = RpcFamily(params=params, variant="det", k=k, n=g.n, payloads=payloads, slots=slots)
    fam._matrix = matrix
    fam._slot_removed = [rm for _, rm in jobs]
    return fam


def subfamily_randomized(fam: RpcFamily, F) -> list[int]:
    """Indices whose spanner avoids every edge of ``F`` (a superset of G_F)."""
    if fam.variant != "rand":
        raise ValueError("subfamily_randomized needs a randomized family")
    F = tuple(F)
    return [
        i for i, slot in enumerate(fam.slots)
        if fam.payloads[slot].spanner.edge_ids.isdisjoint(F)
    ]


def subfamily_deterministic(fam: RpcFamily, F) -> list[tuple[int, tuple[int, ...]]]:
    """The ``ell`` indices ``(j, {h_j(e) : e in F})``."""
    if fam.variant != "det":
        raise ValueError("subfamily_deterministic needs a deterministic family")
    F = sorted(set(F))
    if len(F) > fam.params.f:
        raise ValueError(f"{len(F)} failures exceed sensitivity f={fam.params.f}")
    words = [rs_codeword(e, fam.params) for e in F]
    return [(j, tuple(sorted({w[j] for w in words}))) for j in range(fam.params.ell)]
