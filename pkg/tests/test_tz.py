import math

import pytest
from hypothesis import given, settings, strategies as st

from ftdso.generate import gnm
from ftdso.graph import WeightedGraph
from ftdso.tz import build_tz, query_tz, spanner_has_edge

from conftest import floyd_warshall, graphs, path_graph

INF = math.inf


def spanner_graph(g, spanner):
    return WeightedGraph(g.n, [g.edges[e] for e in sorted(spanner.edge_ids)])


def test_k_below_one_rejected():
    with pytest.raises(ValueError):
        build_tz(path_graph(3), 0)


def test_k1_is_exact_and_spanner_preserves_distances():
    g = gnm(25, 60, seed=3)
    o, sp = build_tz(g, 1, seed=1)
    assert o.levels()[0] == list(range(g.n))
    assert all(len(b) == g.n for b in o.bunch)
    d = floyd_warshall(g)
    ds = floyd_warshall(spanner_graph(g, sp))
    for u in range(g.n):
        for v in range(g.n):
            assert query_tz(o, u, v) == d[u][v]
            assert ds[u][v] == d[u][v]


def test_same_vertex_is_zero():
    o, _ = build_tz(gnm(10, 20, seed=0), 3, seed=7)
    assert all(query_tz(o, v, v) == 0 for v in range(10))


@pytest.mark.parametrize("seed", range(10))
def test_path6_k2_within_factor_three(seed):
    g = path_graph(6)
    o, _ = build_tz(g, 2, seed=seed)
    d = floyd_warshall(g)
    for u in range(6):
        for v in range(6):
            assert d[u][v] <= query_tz(o, u, v) <= 3 * d[u][v]


def test_star_trace_with_centre_sampled():
    # centre 0, leaves 1 and 2; A_1 = {0}
    g = WeightedGraph(3, [(0, 1, 1), (0, 2, 1)])
    o, _ = build_tz(g, 2, level=[1, 0, 0])
    assert query_tz(o, 1, 2) == 2
    for seed in range(10):
        o, _ = build_tz(g, 2, seed=seed)
        assert 2 <= query_tz(o, 1, 2) <= 6


def test_disconnected_pairs_are_infinite():
    g = WeightedGraph(5, [(0, 1, 1), (1, 2, 1), (3, 4, 1)])
    for k in (1, 2, 3):
        o, _ = build_tz(g, k, seed=k)
        assert query_tz(o, 0, 4) == INF
        assert query_tz(o, 0, 2) < INF


def test_removed_edges_are_absent():
    g = path_graph(4)
    o, sp = build_tz(g, 2, seed=0, removed=[1])
    assert query_tz(o, 0, 3) == INF
    assert not spanner_has_edge(sp, 1)


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=2, max_n=14, connected=True), st.integers(1, 4), st.integers(0, 10**6))
def test_structure_invariants(g, k, seed):
    o, _ = build_tz(g, k, seed=seed)
    d = floyd_warshall(g)
    levels = o.levels()
    assert levels[0] == list(range(g.n)) and levels[k] == []
    for i in range(k):
        assert set(levels[i + 1]) <= set(levels[i])
    for i in range(k):
        for v in range(g.n):
            exact = min((d[a][v] for a in levels[i]), default=INF)
            assert o.pivot_dist[i][v] == exact
            if i:
                assert o.pivot_dist[i - 1][v] <= o.pivot_dist[i][v]
            if o.pivot[i][v] is not None:
                assert d[o.pivot[i][v]][v] == exact
    upper = lambda i, v: o.pivot_dist[i][v] if i < k else INF
    for v in range(g.n):
        for w in range(g.n):
            i = o.level[w]
            member = d[w][v] < upper(i + 1, v)
            assert (w in o.bunch[v]) == member
            if member:
                assert o.bunch[v][w] == d[w][v]


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("seed", [0, 1])
def test_stretch_and_compatibility_exhaustive(k, seed):
    g = gnm(60, 150, seed=seed)
    o, sp = build_tz(g, k, seed=seed)
    d = floyd_warshall(g)
    ds = floyd_warshall(spanner_graph(g, sp))
    for u in range(g.n):
        for v in range(g.n):
            a = query_tz(o, u, v)
            assert d[u][v] <= a <= (2 * k - 1) * d[u][v]
            assert ds[u][v] <= a
            assert ds[u][v] <= (2 * k - 1) * d[u][v]


def test_spanner_has_edge_examples():
    g = path_graph(5)
    _, sp = build_tz(g, 2, seed=4)
    assert all(spanner_has_edge(sp, e) for e in range(g.m))
    with pytest.raises(ValueError):
        spanner_has_edge(sp, g.m)
    tree = WeightedGraph(6, [(0, 1, 2), (0, 2, 1), (2, 3, 5), (2, 4, 1), (4, 5, 3)])
    _, sp1 = build_tz(tree, 1)
    assert all(spanner_has_edge(sp1, e) for e in range(tree.m))


@pytest.mark.parametrize("n", [50, 100])
def test_spanner_size_mean(n):
    k = 2
    sizes = []
    for seed in range(20):
        g = gnm(n, 4 * n, seed=seed)
        _, sp = build_tz(g, k, seed=seed)
        sizes.append(len(sp))
    assert sum(sizes) / len(sizes) <= 8 * k * n ** (1 + 1 / k)
