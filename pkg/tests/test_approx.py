import pytest
from hypothesis import given, settings, strategies as st

from _graphs import random_graph
from tcdkit.approx import ApproxTrace, ExceedsK, approx_ecrw, gamma_for_leaf, splice_star
from tcdkit.decomp import TreeCutDecomposition, metrics, single_bag, validate_tcd
from tcdkit.families import family
from tcdkit.graph import Graph, complete_graph, path_graph
from tcdkit.oracle import exact_ecrw_alpha
from tcdkit.starcut import StarCutSolution


def test_gamma_examples():
    K3 = complete_graph(3)
    assert gamma_for_leaf(K3, [0, 1, 2]) == {0: 0, 1: 0, 2: 0}
    assert gamma_for_leaf(K3, [0, 1]) == {0: 1, 1: 1}
    G, _ = family("Gnk", n=2, k=5)
    assert gamma_for_leaf(G, range(2, 7)) == {v: 2 for v in range(2, 7)}


def test_single_vertex():
    D = approx_ecrw(Graph.from_edges(1, []), 1, 1)
    assert metrics(Graph.from_edges(1, []), D).as_tuple() == (1, 0, 1)


def test_k3_alpha1():
    K3 = complete_graph(3)
    D = approx_ecrw(K3, 1, 1)
    assert not isinstance(D, ExceedsK)
    m = metrics(K3, D)
    assert m.thickness <= 1 and m.crossing <= 7


def test_k25_alpha1():
    G, _ = family("Gnk", n=2, k=5)
    out = approx_ecrw(G, 1, 1)
    if isinstance(out, ExceedsK):
        assert exact_ecrw_alpha(G, 1).value >= 2
    else:
        m = metrics(G, out)
        assert m.thickness == 1 and m.crossing <= 7


def test_s32_within_bound():
    G, _ = family("S", k=3, n=2)
    D = approx_ecrw(G, 1, 2)
    assert not isinstance(D, ExceedsK)
    m = metrics(G, D)
    assert m.thickness == 1 and m.crossing <= 12


def test_bad_parameters():
    with pytest.raises(ValueError):
        approx_ecrw(path_graph(3), 0, 1)
    with pytest.raises(ValueError):
        approx_ecrw(path_graph(3), 1, 0)


def test_splice_star_k13():
    G = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    D = splice_star(single_bag(G), 0, StarCutSolution([0], [[1], [2], [3]]))
    assert validate_tcd(G, D).ok
    assert sorted(D.neighbors(0)) == [1, 2, 3]
    assert all(len(D.bags[t]) == 1 for t in D.nodes)


def test_splice_empty_leaf():
    G = path_graph(2)
    D = splice_star(single_bag(G), 0, StarCutSolution([0, 1], [()]))
    assert validate_tcd(G, D).ok and len(D.nodes) == 2
    assert D.bags[1] == ()


def test_two_splices_on_p4():
    G = path_graph(4)
    D = splice_star(single_bag(G), 0, StarCutSolution([1], [[0], [2, 3]]))
    assert validate_tcd(G, D).ok
    leaf = next(t for t in D.nodes if D.bags[t] == (2, 3))
    D = splice_star(D, leaf, StarCutSolution([2], [[3]]))
    assert validate_tcd(G, D).ok
    assert metrics(G, D).as_tuple() == (1, 0, 1)


def test_splice_errors():
    G = path_graph(3)
    D = TreeCutDecomposition([0, 1, 2], [(0, 1), (1, 2)], {0: [0], 1: [1], 2: [2]})
    with pytest.raises(ValueError):
        splice_star(D, 1, StarCutSolution([1], [()]))
    with pytest.raises(ValueError):
        splice_star(single_bag(G), 0, StarCutSolution([0], [[1]]))


def test_large_sparse_graph_runs():
    G, _ = family("S", k=3, n=5)
    trace = ApproxTrace()
    D = approx_ecrw(G, 1, 2, trace=trace)
    assert not isinstance(D, ExceedsK)
    assert trace.rounds <= G.n
    assert metrics(G, D).crossing <= 12


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(1, 2), st.integers(1, 3), st.randoms(use_true_random=False))
def test_contract_against_oracle(n, alpha, k, rng):
    G = random_graph(rng, n, 0.5)
    trace = ApproxTrace()
    out = approx_ecrw(G, alpha, k, trace=trace)
    if isinstance(out, ExceedsK):
        assert exact_ecrw_alpha(G, alpha).value > k
    else:
        assert validate_tcd(G, out).ok
        m = metrics(G, out)
        assert m.thickness <= alpha and m.crossing <= 2 * alpha ** 2 + 5 * k
        # refinement terminates within n rounds
        assert trace.rounds <= n
