import itertools
import math
import random

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from ftdso.exact import exact_from_source
from ftdso.generate import gnm
from ftdso.gf import PRIMITIVE_POLYS, field
from ftdso.graph import WeightedGraph
from ftdso.rpc import (
    BudgetExceeded,
    RpcParams,
    build_deterministic,
    build_randomized,
    deterministic_indices,
    family_size,
    randomized_size,
    rs_codeword,
    select_params,
    subfamily_deterministic,
    subfamily_randomized,
)
from ftdso.verify import check_covering, subgraph_distances

from conftest import path_graph


def clmul_mod(a, b, poly, bits):
    """Carry-less multiplication reduced by ``poly``; independent of the tables."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> bits:
            a ^= poly
    return r


@pytest.mark.parametrize("bits", sorted(PRIMITIVE_POLYS))
def test_generator_is_primitive(bits):
    gf = field(1 << bits)
    assert sorted(gf.exp[: gf.q - 1]) == list(range(1, gf.q))


@pytest.mark.parametrize("bits", [2, 3, 4, 5, 8])
def test_table_multiplication_matches_clmul(bits):
    gf = field(1 << bits)
    for a in range(gf.q):
        for b in range(gf.q):
            assert gf.mul(a, b) == clmul_mod(a, b, gf.poly, bits)
        if a:
            assert gf.mul(a, gf.inv(a)) == 1


def test_field_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        field(12)


GF4 = RpcParams(L=2, f=1, m=16, q=4, p=2, ell=4)


def test_codeword_of_zero_is_zero():
    assert rs_codeword(0, GF4) == [0, 0, 0, 0]


def test_degree_zero_message_gives_constant_codeword():
    params = RpcParams(L=2, f=1, m=4, q=4, p=1, ell=4)
    for e in range(4):
        assert rs_codeword(e, params) == [e] * 4


def test_codeword_by_hand_over_gf4():
    # 6 = 2 + 1*4 -> message (2, 1) -> 2 + x; addition in GF(4) is xor
    assert rs_codeword(6, GF4) == [2 ^ x for x in range(4)]
    # 7 = 3 + 1*4, 9 = 1 + 2*4: 1 + 2x, with 2*2 = 3, 2*3 = 1 under x^2 + x + 1
    assert rs_codeword(9, GF4) == [1, 1 ^ 2, 1 ^ 3, 1 ^ 1]


def test_codeword_rejects_bad_edge_id():
    with pytest.raises(ValueError):
        rs_codeword(16, GF4)


@pytest.mark.parametrize("q, p", [(4, 2), (8, 2), (8, 3), (16, 2)])
def test_distinct_codewords_agree_in_fewer_than_p_positions(q, p):
    params = RpcParams(L=2, f=1, m=q**p, q=q, p=p, ell=q)
    words = [rs_codeword(e, params) for e in range(params.m)]
    for a, b in itertools.combinations(range(0, params.m, max(1, params.m // 40)), 2):
        agree = sum(x == y for x, y in zip(words[a], words[b]))
        assert agree <= p - 1


def test_select_params_examples():
    p = select_params(256, 4, 1)
    assert (p.q, p.ell, p.p) == (32, 32, 2)
    assert (p.p - 1) / p.q < 1 / (p.f * p.L)
    assert select_params(2, 2, 1).q == 4


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 5000), st.integers(2, 40), st.integers(1, 3))
def test_select_params_is_smallest_power_above_threshold(m, L, f):
    if L < max(f, 2):
        with pytest.raises(ValueError):
            select_params(m, L, f)
        return
    p = select_params(m, L, f)
    with mpmath.workdps(60):
        x = f * L * mpmath.log(m) / mpmath.log(L)
        assert p.q > x
        assert p.q == 1 or p.q / 2 <= x
        assert p.q <= 2 * f * L * mpmath.log(m, 2) / mpmath.log(L, 2)
    assert p.q ** p.p >= m and (p.p == 1 or p.q ** (p.p - 1) < m)
    assert p.distance_ok()


def test_select_params_rejects_bad_arguments():
    with pytest.raises(ValueError):
        select_params(100, 1, 1)
    with pytest.raises(ValueError):
        select_params(100, 2, 3)
    with pytest.raises(ValueError):
        select_params(1, 4, 1)


def test_index_order_and_count():
    params = RpcParams(L=2, f=1, m=2, q=4, p=1, ell=4)
    idx = deterministic_indices(params)
    assert len(idx) == family_size(params) == 4 * (1 + 4)
    assert idx[:6] == [(0, ()), (0, (0,)), (0, (1,)), (0, (2,)), (0, (3,)), (1, ())]
    params2 = RpcParams(L=2, f=2, m=2, q=4, p=1, ell=4)
    assert deterministic_indices(params2)[5:8] == [(0, (0, 1)), (0, (0, 2)), (0, (0, 3))]


def test_randomized_family_size_formula():
    params = RpcParams(L=2, f=1, m=10, q=4, p=1, ell=4, c=3)
    assert randomized_size(params, 8) == math.ceil(3 * 1 * 2 * math.log(8)) == 13


def test_deterministic_family_on_q4():
    g = WeightedGraph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)])
    params = select_params(g.m, 3, 1)
    assert params.q == 4
    fam = build_deterministic(g, params, 2, seed=0)
    assert fam.size == 20
    for j in range(params.ell):
        assert fam.removed_edges((j, ())) == ()
        for e in range(g.m):
            h = rs_codeword(e, params)[j]
            assert e in fam.removed_edges((j, (h,)))


@pytest.fixture(scope="module")
def det_family():
    g = gnm(24, 50, seed=11)
    params = select_params(g.m, 4, 2)
    return g, build_deterministic(g, params, 2, seed=5)


def test_removal_rule(det_family):
    g, fam = det_family
    words = fam.codeword_matrix()
    rng = random.Random(0)
    idx = deterministic_indices(fam.params)
    for j, S in rng.sample(idx, 200):
        expected = tuple(e for e in range(g.m) if words[e][j] in S)
        assert fam.removed_edges((j, S)) == expected
        assert fam.slot_removed(fam.slot((j, S))) == expected


def test_shared_payloads_are_identical_subgraphs(det_family):
    g, fam = det_family
    seen = {}
    for idx in fam.indices():
        rm = fam.removed_edges(idx)
        slot = fam.slot(idx)
        assert seen.setdefault(slot, rm) == rm
    assert len(set(map(tuple, seen.values()))) == len(seen)


def test_every_subgraph_is_spanning(det_family):
    g, fam = det_family
    assert all(p.oracle.n == g.n for p in fam.payloads)


def test_subfamily_deterministic_rule(det_family):
    g, fam = det_family
    assert subfamily_deterministic(fam, []) == [(j, ()) for j in range(fam.params.ell)]
    for e in (0, 7, g.m - 1):
        h = rs_codeword(e, fam.params)
        assert subfamily_deterministic(fam, [e]) == [(j, (h[j],)) for j in range(fam.params.ell)]
    rng = random.Random(1)
    for _ in range(50):
        F = rng.sample(range(g.m), rng.randint(0, 2))
        sub = subfamily_deterministic(fam, F)
        assert len(sub) == fam.params.ell
        for idx in sub:
            assert set(F) <= set(fam.removed_edges(idx))
    with pytest.raises(ValueError):
        subfamily_deterministic(fam, [0, 1, 2])


def separated(words, P, F):
    return any(
        not ({words[e][j] for e in P} & {words[e][j] for e in F}) for j in range(len(words[0]))
    )


@pytest.mark.parametrize("m, L, f", [(16, 4, 1), (16, 8, 2), (64, 4, 2), (64, 8, 1)])
def test_hash_family_separates_disjoint_sets(m, L, f):
    params = select_params(m, L, f)
    words = [rs_codeword(e, params) for e in range(m)]
    rng = random.Random(m * 100 + L * 10 + f)
    for _ in range(500):
        F = rng.sample(range(m), rng.randint(1, f))
        rest = [e for e in range(m) if e not in F]
        P = rng.sample(rest, rng.randint(1, min(L, len(rest))))
        assert separated(words, P, F)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_hash_family_separation_property(data):
    m = data.draw(st.integers(2, 64))
    f = data.draw(st.integers(1, 2))
    L = data.draw(st.integers(max(f, 2), 8))
    params = select_params(m, L, f)
    words = [rs_codeword(e, params) for e in range(m)]
    F = data.draw(st.lists(st.integers(0, m - 1), min_size=1, max_size=f, unique=True))
    P = data.draw(st.lists(st.integers(0, m - 1).filter(lambda e: e not in F), max_size=L, unique=True))
    assert separated(words, P, F)


def test_deterministic_covering_small(det_family):
    g, fam = det_family
    rng = random.Random(3)
    Fs = [rng.sample(range(g.m), rng.randint(1, 2)) for _ in range(8)]
    res = check_covering(g, fam, Fs, fam.params.L)
    assert res.checked > 0 and res.violations == 0


def test_randomized_determinism_and_count():
    g = gnm(8, 12, seed=2)
    params = select_params(g.m, 2, 1, c=3)
    a = build_randomized(g, params, 2, seed=9, retain=True)
    b = build_randomized(g, params, 2, seed=9, retain=True)
    assert a.size == 13
    assert a.retained == b.retained
    assert [p.oracle for p in a.payloads] == [p.oracle for p in b.payloads]
    assert all(p.oracle.n == g.n for p in a.payloads)
    with pytest.raises(LookupError):
        build_randomized(g, params, 2, seed=9).removed_edges(0)


def test_subfamily_randomized_matches_direct_scan():
    g = gnm(20, 40, seed=4)
    fam = build_randomized(g, select_params(g.m, 4, 2), 2, seed=1)
    assert subfamily_randomized(fam, []) == list(range(fam.size))
    rng = random.Random(2)
    for _ in range(30):
        F = rng.sample(range(g.m), rng.randint(1, 2))
        expected = [i for i, p in enumerate(fam.payloads) if not any(e in p.spanner.edge_ids for e in F)]
        assert subfamily_randomized(fam, F) == expected


def test_subfamily_randomized_on_tree_is_removal_set():
    # spanners of a forest keep every surviving edge
    g = path_graph(10)
    fam = build_randomized(g, select_params(g.m, 3, 1), 2, seed=3, retain=True)
    for e in range(g.m):
        got = subfamily_randomized(fam, [e])
        assert got == [i for i in range(fam.size) if e in fam.removed_edges(i)]


def test_randomized_covering_and_subfamily_size():
    g = gnm(20, 40, seed=8)
    L, f = 5, 1
    params = select_params(g.m, L, f, c=3)
    ok = total = 0
    sizes = []
    for seed in range(5):
        fam = build_randomized(g, params, 1, seed=seed, retain=True)
        rng = random.Random(seed)
        for _ in range(10):
            F = rng.sample(range(g.m), 1)
            keep = [i for i in range(fam.size) if set(F) <= set(fam.removed_edges(i))]
            sizes.append(len(keep) * L ** len(F) / fam.size)
            for s in range(g.n):
                exact = exact_from_source(g, s, F)
                best = [math.inf] * g.n
                for i in keep:
                    for t, d in enumerate(subgraph_distances(g, fam.removed_edges(i), s)):
                        best[t] = min(best[t], d)
                for t in range(g.n):
                    if t == s or exact[t].min_hops is None or exact[t].min_hops > L:
                        continue
                    total += 1
                    ok += best[t] == exact[t].distance
    assert ok / total >= 0.99
    assert sum(sizes) / len(sizes) <= 4


def test_budget_refusal_reports_sizing():
    g = gnm(30, 60, seed=0)
    params = select_params(g.m, 4, 2)
    with pytest.raises(BudgetExceeded) as exc:
        build_deterministic(g, params, 2, budget_bytes=1000)
    rep = exc.value.report
    assert rep["subgraphs"] == family_size(params) and rep["budget_bytes"] == 1000
    with pytest.raises(BudgetExceeded):
        build_randomized(g, params, 2, budget_bytes=1000)
