import pytest
from hypothesis import given, settings, strategies as st

from _graphs import atlas
from tcdkit.families import family
from tcdkit.graph import Graph, complete_graph, path_graph
from tcdkit.oracle import exact_aux
from tcdkit.treedec import (NICE_NODE_FACTOR, TooWide, TreeDecomposition, build_tree_decomposition,
                            check_nice, decomposition_from_order, make_nice, validate_td)


def nice_ok(G, td):
    nt = make_nice(G, td)
    assert check_nice(G, nt).ok, check_nice(G, nt).as_dict()
    assert validate_td(G, nt).ok
    assert nt.width == td.width
    assert len(nt.nodes) <= NICE_NODE_FACTOR * (td.width + 1) * max(G.n, 1)
    return nt


def test_build_k3():
    td = build_tree_decomposition(complete_graph(3), 2)
    assert not isinstance(td, TooWide) and td.width == 2 and validate_td(complete_graph(3), td).ok
    assert isinstance(build_tree_decomposition(complete_graph(3), 1), TooWide)


def test_build_grid4():
    G, _ = family("grid", n=4)
    td = build_tree_decomposition(G, 3)
    if not isinstance(td, TooWide):
        assert validate_td(G, td).ok and td.width <= 7
    # tw(4-grid) = 4, so a budget of 4 must succeed
    td = build_tree_decomposition(G, 4)
    assert not isinstance(td, TooWide) and validate_td(G, td).ok and td.width <= 9
    nice_ok(G, td)


def test_build_rejects_bad_budget():
    with pytest.raises(ValueError):
        build_tree_decomposition(path_graph(3), 0)


def test_validate_examples():
    K4 = complete_graph(4)
    single = TreeDecomposition([0], [], {0: [0, 1, 2, 3]})
    assert validate_td(K4, single).ok and single.width == 3
    P3 = path_graph(3)
    good = TreeDecomposition([0, 1], [(0, 1)], {0: [0, 1], 1: [1, 2]})
    assert validate_td(P3, good).ok and good.width == 1
    bad = TreeDecomposition([0, 1], [(0, 1)], {0: [0, 1], 1: [2]})
    assert "uncovered_edge" in validate_td(P3, bad).kinds()


def test_validate_disconnected_occurrence():
    G = path_graph(3)
    D = TreeDecomposition([0, 1, 2], [(0, 1), (1, 2)], {0: [0, 1], 1: [2], 2: [1, 2]})
    assert not validate_td(G, D).ok


def test_make_nice_examples():
    G1 = Graph.from_edges(1, [])
    nt = nice_ok(G1, TreeDecomposition([0], [], {0: [0]}))
    leaves = [t for t in nt.nodes if nt.kind[t] == "leaf"]
    assert all(len(nt.bags[t]) == 1 for t in leaves)
    K3 = complete_graph(3)
    nt = nice_ok(K3, TreeDecomposition([0], [], {0: [0, 1, 2]}))
    assert nt.width == 2
    assert sum(1 for t in nt.nodes if nt.kind[t] == "introduce") >= 2
    P3 = path_graph(3)
    nice_ok(P3, TreeDecomposition([0, 1], [(0, 1)], {0: [0, 1], 1: [1, 2]}))


def test_make_nice_rejects_invalid():
    with pytest.raises(ValueError):
        make_nice(path_graph(3), TreeDecomposition([0], [], {0: [0, 1]}))


def test_builder_contract_exhaustive():
    # every connected graph on <= 7 vertices, w = 1..4, against the exact tree-width
    for G in atlas(7, True):
        tw = exact_aux(G, "tw").value
        for w in range(1, 5):
            td = build_tree_decomposition(G, w)
            if isinstance(td, TooWide):
                assert tw > w
            else:
                assert validate_td(G, td).ok and td.width <= 2 * w + 1
                nice_ok(G, td)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), st.data())
def test_order_decompositions_are_valid_and_nice(n, data):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    G = Graph.from_edges(n, edges)
    order = data.draw(st.permutations(range(n)))
    td = decomposition_from_order(G, list(order))
    assert validate_td(G, td).ok
    nice_ok(G, td)
