import json

import pytest
from hypothesis import given, settings, strategies as st

from tcdkit.decomp import (SpanningForestPair, TreeCutDecomposition, adhesion, crossing_at,
                           crossing_edges_at, ecw_of_forest, is_tree_partition, metrics, single_bag,
                           spanning_forest_bfs, tcd_from_spanning_forest, validate_tcd)
from tcdkit.families import family, s3n_decomposition
from tcdkit.graph import Graph, complete_graph, cycle_graph, disjoint_union, path_graph


def path_tcd(n):
    return TreeCutDecomposition(list(range(n)), [(i, i + 1) for i in range(n - 1)], {i: [i] for i in range(n)})


@st.composite
def graph_and_tcd(draw, max_n=8, max_nodes=7):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    N = draw(st.integers(1, max_nodes))
    parents = [draw(st.integers(0, i - 1)) for i in range(1, N)]
    place = draw(st.lists(st.integers(0, N - 1), min_size=n, max_size=n))
    bags = {t: [v for v in range(n) if place[v] == t] for t in range(N)}
    D = TreeCutDecomposition(list(range(N)), [(parents[i - 1], i) for i in range(1, N)], bags)
    return Graph.from_edges(n, edges), D


def test_validate_examples():
    P3 = path_graph(3)
    assert validate_tcd(P3, path_tcd(3)).ok
    overlap = TreeCutDecomposition([0, 1], [(0, 1)], {0: [0, 1], 1: [0, 2]})
    assert "overlap" in validate_tcd(P3, overlap).kinds()
    missing = TreeCutDecomposition([0, 1], [(0, 1)], {0: [0], 1: [1]})
    assert "uncovered" in validate_tcd(P3, missing).kinds()


def test_validate_non_tree():
    G = path_graph(3)
    cyc = TreeCutDecomposition([0, 1, 2], [(0, 1), (1, 2), (2, 0)], {0: [0], 1: [1], 2: [2]})
    assert "not_tree" in validate_tcd(G, cyc).kinds()
    forest = TreeCutDecomposition([0, 1, 2], [(0, 1)], {0: [0], 1: [1], 2: [2]})
    assert "not_tree" in validate_tcd(G, forest).kinds()


def test_crossing_s3n_values():
    for n in range(1, 7):
        G, D = s3n_decomposition(n)
        assert validate_tcd(G, D).ok
        assert crossing_at(G, D, "c") == 0
        for i in range(1, n + 1):
            for j in range(1, 5):
                # the arm nodes carrying v_{i,j}
                if j <= 3:
                    assert crossing_at(G, D, f"t_{i}_{j}") == 2
        m = metrics(G, D)
        assert (m.thickness, m.crossing) == (1, 2)


def test_crossing_k3_path():
    K3 = complete_graph(3)
    D = path_tcd(3)
    assert crossing_at(K3, D, 1) == 1
    assert crossing_edges_at(K3, D, 1) == [(0, 2)]
    assert metrics(K3, D).as_tuple() == (1, 1, 1)


def test_crossing_unknown_node():
    with pytest.raises(KeyError):
        crossing_at(complete_graph(3), path_tcd(3), 7)


def test_metrics_single_bag():
    assert metrics(complete_graph(3), single_bag(complete_graph(3))).as_tuple() == (3, 0, 3)


def test_metrics_k25_star():
    G, _ = family("Gnk", n=2, k=5)
    D = TreeCutDecomposition(list(range(6)), [(0, i) for i in range(1, 6)],
                             {0: [0, 1], **{i: [i + 1] for i in range(1, 6)}})
    assert metrics(G, D).as_tuple() == (2, 0, 2)


def test_metrics_rejects_invalid():
    with pytest.raises(ValueError):
        metrics(path_graph(3), TreeCutDecomposition([0], [], {0: [0, 1]}))


def test_adhesion_examples():
    K3 = complete_graph(3)
    assert adhesion(K3, path_tcd(3), (0, 1)) == 2
    D = TreeCutDecomposition([0, 1], [(0, 1)], {0: [0, 1, 2], 1: []})
    assert adhesion(K3, D, (0, 1)) == 0
    G, D = s3n_decomposition(2)
    assert adhesion(G, D, ("c", "t_1_1")) == 3
    with pytest.raises(ValueError):
        adhesion(K3, path_tcd(3), (0, 2))


def test_tree_partition_examples():
    assert is_tree_partition(path_graph(3), path_tcd(3))
    assert not is_tree_partition(complete_graph(3), path_tcd(3))
    assert is_tree_partition(complete_graph(4), single_bag(complete_graph(4)))


def test_ecw_examples():
    K3 = complete_graph(3)
    assert ecw_of_forest(SpanningForestPair(K3, [(0, 1), (1, 2)])) == 2
    T = path_graph(5)
    assert ecw_of_forest(SpanningForestPair(T, T.edges)) == 1
    assert ecw_of_forest(SpanningForestPair(cycle_graph(4), [(0, 1), (1, 2), (2, 3)])) == 2


def test_forest_pair_checks():
    K3 = complete_graph(3)
    with pytest.raises(ValueError):
        ecw_of_forest(SpanningForestPair(K3, [(0, 1)]))
    with pytest.raises(ValueError):
        ecw_of_forest(SpanningForestPair(complete_graph(4), [(0, 1), (1, 2), (0, 2)]))
    with pytest.raises(ValueError):
        ecw_of_forest(SpanningForestPair(path_graph(3), [(0, 2), (0, 1)]))


def test_tcd_from_forest_examples():
    K3 = complete_graph(3)
    D = tcd_from_spanning_forest(SpanningForestPair(K3, [(0, 1), (1, 2)]))
    assert metrics(K3, D).as_tuple() == (1, 1, 1)
    T = path_graph(4)
    assert metrics(T, tcd_from_spanning_forest(SpanningForestPair(T, T.edges))).crossing == 0
    U = disjoint_union(K3, complete_graph(2))
    P = SpanningForestPair(U, [(0, 1), (1, 2), (3, 4)])
    D = tcd_from_spanning_forest(P)
    assert validate_tcd(U, D).ok
    assert (0, 3) in D.tree_edges
    assert metrics(U, D).crossing <= ecw_of_forest(P) - 1


def test_json_roundtrip_and_canonical_order():
    G, D = s3n_decomposition(2)
    data = json.loads(D.dumps())
    assert data["root"] == "c"
    E = TreeCutDecomposition.from_json(data)
    assert E.dumps() == D.dumps()
    assert metrics(G, E) == metrics(G, D)
    D2 = path_tcd(4)
    shuffled = TreeCutDecomposition([3, 1, 0, 2], [(3, 2), (1, 0), (2, 1)], {t: [t] for t in range(4)})
    assert shuffled.dumps() == D2.dumps()


@settings(max_examples=200)
@given(graph_and_tcd())
def test_tree_partition_means_zero_crossing(data):
    G, D = data
    if is_tree_partition(G, D):
        assert all(crossing_at(G, D, t) == 0 for t in D.nodes)


@settings(max_examples=200)
@given(graph_and_tcd())
def test_adhesion_sum_dominates_crossing(data):
    G, D = data
    total = sum(adhesion(G, D, e) for e in D.tree_edges)
    assert all(crossing_at(G, D, t) <= total for t in D.nodes)


@settings(max_examples=200)
@given(graph_and_tcd())
def test_crossing_matches_edge_scan(data):
    G, D = data
    owner = D.owner()
    for t in D.nodes:
        labels = D.component_labels(t)
        expected = sum(1 for u, v in G.edges if owner[u] != t and owner[v] != t
                       and labels[owner[u]] != labels[owner[v]])
        assert crossing_at(G, D, t) == expected


@settings(max_examples=100)
@given(graph_and_tcd(), st.randoms(use_true_random=False))
def test_metrics_invariant_under_relabeling(data, rng):
    G, D = data
    names = [f"n{i}" for i in range(len(D.nodes))]
    rng.shuffle(names)
    E = D.relabeled(dict(zip(D.nodes, names)))
    assert metrics(G, E) == metrics(G, D)


@settings(max_examples=100)
@given(graph_and_tcd())
def test_bfs_forest_bound(data):
    G, _ = data
    P = spanning_forest_bfs(G)
    P.check()
    assert metrics(G, tcd_from_spanning_forest(P)).crossing <= ecw_of_forest(P) - 1
