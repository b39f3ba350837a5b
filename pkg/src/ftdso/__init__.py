"""Compact fault-tolerant distance sensitivity oracles with stretch 2k-1."""
from .container import load, save
from .exact import ExactAnswer, exact_replacement, is_hop_short, pivot_on_some_replacement_path
from .graph import INF, FailureSet, SsspResult, WeightedGraph, dijkstra, hop_diameter, load_graph, serialize_graph
from .large import LargeDso, LargeView, build_large, query_large
from .rpc import BudgetExceeded, RpcFamily, RpcParams, rs_codeword, select_params
from .small import SmallDso, SmallView, build_small, query_small
from .tz import TzOracle, TzSpanner, build_tz, query_tz, spanner_has_edge
from .verify import query, view

__all__ = [
    "INF", "FailureSet", "SsspResult", "WeightedGraph", "dijkstra", "hop_diameter", "load_graph",
    "serialize_graph", "ExactAnswer", "exact_replacement", "is_hop_short",
    "pivot_on_some_replacement_path", "TzOracle", "TzSpanner", "build_tz", "query_tz",
    "spanner_has_edge", "RpcParams", "RpcFamily", "BudgetExceeded", "select_params", "rs_codeword",
    "SmallDso", "build_small", "query_small", "LargeDso", "build_large", "query_large", "query",
    "view", "SmallView", "LargeView",
    "load", "save",
]
