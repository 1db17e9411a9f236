"""Approximating the alpha-edge-crossing width by repeated star-cut refinement."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .decomp import TreeCutDecomposition, crossing_at, metrics, single_bag, validate_tcd
from .graph import Graph, induced_subgraph, to_mask
from .starcut import StarCutInstance, StarCutSolution, solve_star_cut
from .treedec import TooWide, build_tree_decomposition, make_nice


@dataclass(frozen=True)
class ExceedsK:
    """Certificate that ``ecrw_alpha(G) > k``; ``reason`` says which test failed."""

    alpha: int
    k: int
    reason: str
    leaf_bag: tuple = ()


@dataclass
class ApproxTrace:
    rounds: int = 0
    leaf_sizes: list = field(default_factory=list)


def gamma_for_leaf(G: Graph, S) -> dict[int, int]:
    inside = to_mask(S)
    return {v: (G.nbr_mask[v] & ~inside).bit_count() for v in sorted(set(S))}


def splice_star(D: TreeCutDecomposition, leaf, sol: StarCutSolution) -> TreeCutDecomposition:
    """Put the star's center into ``leaf`` and hang one new node per star leaf bag from it."""
    if len(D.neighbors(leaf)) > 1:
        raise ValueError(f"node {leaf} is not a leaf of the decomposition")
    covered = list(sol.center) + [v for x in sol.leaves for v in x]
    if sorted(covered) != sorted(D.bags[leaf]) or len(set(covered)) != len(covered):
        raise ValueError("star-cut solution does not partition the leaf bag")
    bags = dict(D.bags)
    bags[leaf] = sol.center
    nodes = list(D.nodes)
    edges = list(D.tree_edges)
    nxt = max((t for t in nodes if isinstance(t, int)), default=-1) + 1
    fresh = [x for x in sol.leaves if x] or [()]
    for bag in fresh:
        nodes.append(nxt)
        edges.append((leaf, nxt))
        bags[nxt] = bag
        nxt += 1
    return TreeCutDecomposition(nodes, edges, bags, D.root)


def _check_state(G: Graph, D: TreeCutDecomposition, alpha: int, k: int) -> None:
    report = validate_tcd(G, D)
    assert report.ok, report.as_dict()
    owner = D.owner()
    for t in D.nodes:
        if D.is_leaf(t) and len(D.nodes) > 1:
            out = to_mask(D.bags[t])
            boundary = sum((G.nbr_mask[v] & ~out).bit_count() for v in D.bags[t])
            assert boundary <= 2 * alpha ** 2 + 4 * k, (t, boundary)
        elif not D.is_leaf(t):
            assert len(D.bags[t]) <= alpha, (t, D.bags[t])
            cross = crossing_at(G, D, t, owner)
            assert cross <= 2 * alpha ** 2 + 5 * k, (t, cross)


def approx_ecrw(G: Graph, alpha: int, k: int, check: bool = True,
                trace: Optional[ApproxTrace] = None) -> TreeCutDecomposition | ExceedsK:
    """Decomposition of thickness <= alpha and crossing number <= 2 alpha^2 + 5k, or ExceedsK.

    With ``check`` set, the state invariants are asserted after every splice
    and the final metrics are recomputed before returning.
    """
    if alpha < 1 or k < 1:
        raise ValueError("alpha and k must be positive")
    D = single_bag(G)
    if G.n <= alpha:
        return D
    budget = 3 * k + 2 * alpha - 1
    while True:
        oversized = sorted(t for t in D.nodes if D.is_leaf(t) and len(D.bags[t]) > alpha)
        if not oversized:
            break
        leaf = oversized[0]
        bag = D.bags[leaf]
        H, ids = induced_subgraph(G, bag)
        td = build_tree_decomposition(H, budget)
        if isinstance(td, TooWide):
            return ExceedsK(alpha, k, "treewidth", bag)
        weights = gamma_for_leaf(G, bag)
        inst = StarCutInstance(H, alpha, k, tuple(weights[v] for v in ids))
        local = solve_star_cut(inst, make_nice(H, td))
        if local is None:
            return ExceedsK(alpha, k, "starcut", bag)
        sol = StarCutSolution([ids[v] for v in local.center],
                              [[ids[v] for v in x] for x in local.leaves])
        D = splice_star(D, leaf, sol)
        if trace is not None:
            trace.rounds += 1
            trace.leaf_sizes.append(len(bag))
        if check:
            _check_state(G, D, alpha, k)
    if check:
        m = metrics(G, D)
        assert m.thickness <= alpha and m.crossing <= 2 * alpha ** 2 + 5 * k, m
    return D
