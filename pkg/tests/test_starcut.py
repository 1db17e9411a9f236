import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from _graphs import atlas, random_graph
from tcdkit.graph import Graph, complete_graph, path_graph
from tcdkit.starcut import (StarCutInstance, StarCutSolution, brute_star_cut, check_legitimate,
                            check_solution, count_valid_tuples, restrict_pair, solve_star_cut)
from tcdkit.treedec import build_tree_decomposition, decomposition_from_order, make_nice, min_fill_order


def star13():
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


def nice_of(G):
    return make_nice(G, decomposition_from_order(G, min_fill_order(G)))


def test_check_solution_examples():
    inst = StarCutInstance(star13(), 1, 3, (0, 0, 0, 0))
    assert check_solution(inst, StarCutSolution([0], [[1], [2], [3]])).ok
    bad = check_solution(inst, StarCutSolution([], [[0, 1, 2, 3]]))
    assert "leaf_is_everything" in bad.kinds()
    heavy = StarCutInstance(complete_graph(2), 1, 1, (10, 10))
    for sol in ([[0], [[1]]], [[1], [[0]]], [[], [[0], [1]]]):
        assert "leaf_weight" in check_solution(heavy, StarCutSolution(*sol)).kinds()


def test_check_solution_violation_kinds():
    inst = StarCutInstance(path_graph(4), 1, 1, (0, 0, 0, 0))
    assert "center_too_large" in check_solution(inst, StarCutSolution([0, 1], [[2, 3]])).kinds()
    assert "overlap" in check_solution(inst, StarCutSolution([0], [[0, 1], [2, 3]])).kinds()
    assert "uncovered" in check_solution(inst, StarCutSolution([0], [[1]])).kinds()
    assert "no_leaf" in check_solution(inst, StarCutSolution([0], [])).kinds()
    K4 = StarCutInstance(complete_graph(4), 1, 1, (0,) * 4)
    assert "center_crossing" in check_solution(K4, StarCutSolution([0], [[1], [2], [3]])).kinds()


def test_brute_examples():
    sol = brute_star_cut(StarCutInstance(star13(), 1, 3, (0,) * 4))
    assert sol is not None and check_solution(StarCutInstance(star13(), 1, 3, (0,) * 4), sol).ok
    assert brute_star_cut(StarCutInstance(complete_graph(2), 1, 1, (10, 10))) is None
    single = brute_star_cut(StarCutInstance(Graph.from_edges(1, []), 1, 1, (0,)))
    assert single.center == (0,) and single.leaves == [()]


def test_brute_guard():
    with pytest.raises(ValueError):
        brute_star_cut(StarCutInstance(path_graph(11), 1, 1, (0,) * 11))


def test_solve_examples():
    inst = StarCutInstance(star13(), 1, 3, (0,) * 4)
    assert check_solution(inst, solve_star_cut(inst, nice_of(inst.G))).ok
    heavy = StarCutInstance(complete_graph(2), 1, 1, (10, 10))
    assert solve_star_cut(heavy, nice_of(heavy.G)) is None
    p4 = StarCutInstance(path_graph(4), 1, 1, (0,) * 4)
    assert check_solution(p4, solve_star_cut(p4, nice_of(p4.G))).ok


def test_solve_rejects_non_nice():
    G = path_graph(3)
    td = decomposition_from_order(G, [0, 1, 2])
    with pytest.raises(ValueError):
        solve_star_cut(StarCutInstance(G, 1, 1, (0,) * 3), td)


def test_solution_json_roundtrip():
    sol = StarCutSolution([3, 1], [[5, 4], [2]])
    assert StarCutSolution.from_json(sol.to_json()) == sol
    assert sol.to_json() == {"center": [1, 3], "leaves": [[2], [4, 5]]}


def gamma_choices(alpha, k):
    cap = alpha ** 2 + 2 * k
    return [0, 1, cap, cap + 1]


def test_dp_matches_brute_small_graphs():
    rng = random.Random(11)
    for G in atlas(5):
        for alpha in (1, 2):
            for k in (1, 2):
                gamma = tuple(rng.choice(gamma_choices(alpha, k)) for _ in range(G.n))
                inst = StarCutInstance(G, alpha, k, gamma)
                got = solve_star_cut(inst, nice_of(G))
                want = brute_star_cut(inst)
                assert (got is None) == (want is None), (G, alpha, k, gamma)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 7), st.integers(1, 2), st.integers(1, 2), st.randoms(use_true_random=False))
def test_canonical_and_plain_agree(n, alpha, k, rng):
    G = random_graph(rng, n, 0.5)
    gamma = tuple(rng.choice(gamma_choices(alpha, k)) for _ in range(n))
    inst = StarCutInstance(G, alpha, k, gamma)
    ntd = nice_of(G)
    a = solve_star_cut(inst, ntd, canonical=True)
    b = solve_star_cut(inst, ntd, canonical=False)
    assert (a is None) == (b is None)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(1, 2), st.integers(1, 2), st.randoms(use_true_random=False))
def test_record_count_within_valid_tuples(n, alpha, k, rng):
    G = random_graph(rng, n, 0.5)
    gamma = tuple(rng.choice(gamma_choices(alpha, k)) for _ in range(n))
    inst = StarCutInstance(G, alpha, k, gamma)
    ntd = nice_of(G)
    for canonical in (True, False):
        out = []
        solve_star_cut(inst, ntd, dp_out=out, canonical=canonical)
        if not out:
            continue
        dp = out[0]
        for t, recs in dp.records.items():
            # the last field is a bookkeeping flag that is not part of a tuple
            assert len({r[:6] for r in recs}) <= count_valid_tuples(inst, len(ntd.bags[t]))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 7), st.integers(1, 2), st.integers(1, 2), st.randoms(use_true_random=False))
def test_restriction_of_legitimate_pair_is_legitimate(n, alpha, k, rng):
    G = random_graph(rng, n, 0.4)
    gamma = tuple(rng.choice(gamma_choices(alpha, k)) for _ in range(n))
    inst = StarCutInstance(G, alpha, k, gamma)
    Z = sorted(rng.sample(range(n), rng.randint(0, n)))
    # random labeling of Z into X_0..X_2k and Y, with a random partition of Y
    label = {v: rng.randint(0, 2 * k + 1) for v in Z}
    X = [[v for v in Z if label[v] == i] for i in range(2 * k + 1)]
    Y = [v for v in Z if label[v] == 2 * k + 1]
    blocks: dict = {}
    for v in Y:
        blocks.setdefault(rng.randint(0, 2), []).append(v)
    P = list(blocks.values())
    assume(check_legitimate(inst, Z, X, Y, P).ok)
    Zp = [v for v in Z if rng.random() < 0.6]
    X2, Y2, P2 = restrict_pair(X, Y, P, Zp)
    assert check_legitimate(inst, Zp, X2, Y2, P2).ok


def test_check_legitimate_flags_problems():
    G = path_graph(3)
    inst = StarCutInstance(G, 1, 1, (0, 0, 0))
    assert check_legitimate(inst, [0, 1, 2], [[1], [0], [2]], [], []).ok
    assert "center_too_large" in check_legitimate(inst, [0, 1, 2], [[0, 1], [2], []], [], []).kinds()
    assert "class_touches_part" in check_legitimate(inst, [0, 1, 2], [[], [0], []], [1, 2], [[1, 2]]).kinds()
    assert "not_cover" in check_legitimate(inst, [0, 1, 2], [[1], [0], []], [], []).kinds()


def test_dp_on_approx_style_instance():
    # gamma from the edges leaving a proper subset, as the approximation loop uses it
    G = complete_graph(6)
    S = [0, 1, 2, 3]
    from tcdkit.approx import gamma_for_leaf
    from tcdkit.graph import induced_subgraph

    H, ids = induced_subgraph(G, S)
    w = gamma_for_leaf(G, S)
    inst = StarCutInstance(H, 2, 2, tuple(w[v] for v in ids))
    td = build_tree_decomposition(H, 3 * 2 + 2 * 2 - 1)
    got = solve_star_cut(inst, make_nice(H, td))
    assert (got is None) == (brute_star_cut(inst) is None)
