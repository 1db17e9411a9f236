"""Graph corpora shared by the tests (networkx is a test-only dependency)."""

from __future__ import annotations

import random
from functools import lru_cache

import networkx as nx

from tcdkit.graph import Graph


def from_nx(g) -> Graph:
    return Graph.from_edges(g.number_of_nodes(), list(g.edges()))


@lru_cache(maxsize=None)
def atlas(max_n: int, connected_only: bool = False) -> tuple[Graph, ...]:
    """Every graph on at most ``max_n`` vertices up to isomorphism (max_n <= 7)."""
    out = []
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if n == 0 or n > max_n:
            continue
        if connected_only and not nx.is_connected(g):
            continue
        out.append(from_nx(g))
    return tuple(out)


@lru_cache(maxsize=None)
def random_connected(n: int, count: int, seed: int) -> tuple[Graph, ...]:
    """``count`` connected graphs on ``n`` vertices, edges kept with probability 1/2."""
    rng = random.Random(seed)
    out = []
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    while len(out) < count:
        edges = [e for e in pairs if rng.random() < 0.5]
        g = nx.Graph()
        g.add_nodes_from(range(n))
        g.add_edges_from(edges)
        if nx.is_connected(g):
            out.append(Graph.from_edges(n, edges))
    return tuple(out)


def sweep_graphs() -> tuple[Graph, ...]:
    """Connected graphs exhaustively up to 6 vertices plus 500 random 7-vertex ones."""
    return atlas(6, True) + random_connected(7, 500, 3)


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])
