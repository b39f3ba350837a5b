import itertools
import math

import pytest
from hypothesis import strategies as st

from ftdso.graph import WeightedGraph

INF = math.inf


def path_graph(n, w=1):
    return WeightedGraph(n, [(i, i + 1, w) for i in range(n - 1)])


def cycle_graph(n, w=1):
    return WeightedGraph(n, [(i, (i + 1) % n, w) for i in range(n)])


def complete_graph(n, w=1):
    return WeightedGraph(n, [(u, v, w) for u, v in itertools.combinations(range(n), 2)])


def floyd_warshall(g, removed=()):
    """All-pairs distances, independent of any Dijkstra code path."""
    removed = set(removed)
    d = [[INF] * g.n for _ in range(g.n)]
    for v in range(g.n):
        d[v][v] = 0.0
    for i, (u, v, w) in enumerate(g.edges):
        if i in removed:
            continue
        d[u][v] = min(d[u][v], w)
        d[v][u] = min(d[v][u], w)
    for k in range(g.n):
        dk = d[k]
        for i in range(g.n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(g.n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return d


@st.composite
def graphs(draw, min_n=2, max_n=12, connected=False, max_w=9):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=min(len(pairs), 3 * n)))
    if connected:
        tree = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
        chosen = sorted(set(chosen) | set(tree))
    weights = draw(st.lists(st.integers(1, max_w), min_size=len(chosen), max_size=len(chosen)))
    return WeightedGraph(n, [(u, v, w) for (u, v), w in zip(chosen, weights)])


@pytest.fixture
def triangle():
    # 0-1 (1), 1-2 (1), 0-2 (2)
    return WeightedGraph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 2)])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
