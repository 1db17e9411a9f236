"""Exact values of ecrw_alpha, ecrw, tpw, tw and ecw on small graphs.

ecrw_alpha, ecrw and tpw share one threshold dynamic program.  Root the tree
anywhere; a node whose subtree covers the vertex set ``U`` has its bag ``X``
and child subtrees covering the blocks of a partition of ``U - X``.  Its
crossing number is

    e(U - X, V - U) + e(U - X) - sum of e(block)

so for a fixed crossing budget ``c`` the set of coverable ``U`` can be filled
in by increasing size, maximising the edges kept inside blocks.  Empty bags are
only needed at nodes with two or more children, and a node with an empty bag
and a single child can always be contracted, which keeps the search finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Any, Optional

from .decomp import (SpanningForestPair, TreeCutDecomposition, ecw_of_forest,
                     is_tree_partition, metrics)
from .graph import Graph, connected_components, from_mask
from .treedec import _reach_beyond, decomposition_from_order, validate_td

EXACT_LIMIT = 10
ECW_LIMIT = 7


@dataclass(frozen=True)
class ExactResult:
    param: str
    value: int
    witness: Any
    alpha: Optional[int] = None


def _guard(G: Graph, limit: int) -> None:
    if G.n > limit:
        raise ValueError(f"exact computation is limited to {limit} vertices, got {G.n}")


class _Tables:
    """Per-graph edge counts indexed by vertex bitmask."""

    def __init__(self, G: Graph):
        n = G.n
        size = 1 << n
        inner = [0] * size
        degsum = [0] * size
        for S in range(1, size):
            low = S & -S
            v = low.bit_length() - 1
            rest = S ^ low
            inner[S] = inner[rest] + (G.nbr_mask[v] & rest).bit_count()
            degsum[S] = degsum[rest] + G.degree(v)
        self.n = n
        self.full = size - 1
        self.inner = inner
        self.cut = [degsum[S] - 2 * inner[S] for S in range(size)]
        self.by_size = [[] for _ in range(n + 1)]
        for S in range(size):
            self.by_size[S.bit_count()].append(S)


def _submasks(U: int):
    S = U
    while S:
        yield S
        S = (S - 1) & U
    yield 0


def _threshold(tab: _Tables, alpha: int, c: int):
    """Run the DP for thickness ``alpha`` and crossing budget ``c``; return the tables."""
    size = tab.full + 1
    inner, cut = tab.inner, tab.cut
    NONE = -1
    feas = bytearray(size)
    best = [NONE] * size
    best2 = [NONE] * size
    best_pick = [0] * size
    best2_pick = [0] * size
    bag_pick = [0] * size
    best[0] = 0
    for s in range(1, tab.n + 1):
        for U in tab.by_size[s]:
            low = U & -U
            # partitions of U into at least two feasible blocks
            b2, p2 = NONE, 0
            rest_all = U ^ low
            B = rest_all
            while True:
                block = B | low
                if block != U and feas[block]:
                    r = best[U ^ block]
                    if r != NONE and inner[block] + r > b2:
                        b2, p2 = inner[block] + r, block
                if B == 0:
                    break
                B = (B - 1) & rest_all
            best2[U], best2_pick[U] = b2, p2
            # choose the bag
            ok = False
            if b2 != NONE and cut[U] + inner[U] - b2 <= c:
                ok, bag_pick[U] = True, 0
            else:
                for X in _submasks(U):
                    if X == 0 or X.bit_count() > alpha:
                        continue
                    W = U ^ X
                    bw = best[W]
                    if bw == NONE:
                        continue
                    between = inner[U] - inner[W] - inner[X]
                    if cut[W] - between + inner[W] - bw <= c:
                        ok, bag_pick[U] = True, X
                        break
            if ok:
                feas[U] = 1
            if ok and inner[U] >= b2:
                best[U], best_pick[U] = inner[U], U
            elif b2 != NONE:
                best[U], best_pick[U] = b2, p2
    return feas, best_pick, best2_pick, bag_pick


def _blocks(W: int, pick) -> list[int]:
    out = []
    while W:
        B = pick[W]
        out.append(B)
        W ^= B
    return out


def _witness(tab: _Tables, tables) -> TreeCutDecomposition:
    feas, best_pick, best2_pick, bag_pick = tables
    nodes, edges, bags = [], [], {}

    def build(U: int, parent: Optional[int]) -> None:
        t = len(nodes)
        nodes.append(t)
        if parent is not None:
            edges.append((parent, t))
        X = bag_pick[U]
        bags[t] = from_mask(X)
        if X == 0:
            first = best2_pick[U]
            children = [first] + _blocks(U ^ first, best_pick)
        else:
            children = _blocks(U ^ X, best_pick)
        for Z in children:
            build(Z, t)

    if tab.full == 0:
        return TreeCutDecomposition([0], [], {0: ()}, 0)
    build(tab.full, None)
    return TreeCutDecomposition(nodes, edges, bags, 0)


def _search(G: Graph, alpha_of_c, start: int = 0) -> tuple[int, TreeCutDecomposition]:
    tab = _Tables(G)
    c = start
    while True:
        alpha = alpha_of_c(c)
        if alpha is not None:
            tables = _threshold(tab, alpha, c)
            if tab.full == 0 or tables[0][tab.full]:
                return c, _witness(tab, tables)
        c += 1


def exact_ecrw_alpha(G: Graph, alpha: int) -> ExactResult:
    if alpha < 1:
        raise ValueError("alpha must be positive")
    _guard(G, EXACT_LIMIT)
    value, D = _search(G, lambda c: alpha)
    m = metrics(G, D)
    assert m.thickness <= alpha and m.crossing == value, (m, value)
    return ExactResult("ecrw_alpha", value, D, alpha)


def _exact_ecrw(G: Graph) -> ExactResult:
    if G.n == 0:
        return ExactResult("ecrw", 0, TreeCutDecomposition([0], [], {0: ()}, 0))
    value, D = _search(G, lambda c: c if c >= 1 else None, 1)
    m = metrics(G, D)
    assert m.ecrw == value, (m, value)
    return ExactResult("ecrw", value, D)


def _exact_tpw(G: Graph) -> ExactResult:
    tab = _Tables(G)
    if G.n == 0:
        return ExactResult("tpw", 0, TreeCutDecomposition([0], [], {0: ()}, 0))
    for alpha in range(1, G.n + 1):
        tables = _threshold(tab, alpha, 0)
        if tables[0][tab.full]:
            D = _witness(tab, tables)
            assert is_tree_partition(G, D) and metrics(G, D).thickness == alpha
            return ExactResult("tpw", alpha, D)
    raise AssertionError("the single-bag decomposition is always a tree-partition")


def _exact_tw(G: Graph) -> ExactResult:
    if G.n == 0:
        return ExactResult("tw", -1, decomposition_from_order(G, []))
    full = (1 << G.n) - 1
    tw = {0: -1}
    last = {}
    for s in range(1, G.n + 1):
        for S in (sum(1 << v for v in c) for c in combinations(range(G.n), s)):
            bestv, bestw = None, None
            for v in from_mask(S):
                prev = S ^ (1 << v)
                w = max(tw[prev], _reach_beyond(G, prev, v).bit_count())
                if bestw is None or w < bestw:
                    bestv, bestw = v, w
            tw[S], last[S] = bestw, bestv
    order = []
    S = full
    while S:
        v = last[S]
        order.append(v)
        S ^= 1 << v
    order.reverse()
    td = decomposition_from_order(G, order)
    assert validate_td(G, td).ok and td.width == tw[full]
    return ExactResult("tw", tw[full], td)


def spanning_forests(G: Graph):
    """Every maximal spanning forest, as a sorted edge tuple."""
    size = G.n - len(connected_components(G))
    for edges in combinations(G.edges, size):
        parent = list(range(G.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for u, v in edges:
            ru, rv = find(u), find(v)
            if ru == rv:
                ok = False
                break
            parent[ru] = rv
        if ok:
            yield edges


def _exact_ecw(G: Graph) -> ExactResult:
    _guard(G, ECW_LIMIT)
    best = None
    for forest in spanning_forests(G):
        P = SpanningForestPair(G, forest)
        w = ecw_of_forest(P)
        if best is None or w < best[0]:
            best = (w, P)
    return ExactResult("ecw", best[0], best[1])


def exact_aux(G: Graph, which: str) -> ExactResult:
    _guard(G, EXACT_LIMIT)
    table = {"ecrw": _exact_ecrw, "tpw": _exact_tpw, "tw": _exact_tw, "ecw": _exact_ecw}
    if which not in table:
        raise ValueError(f"unknown parameter {which!r}; choose from {sorted(table)}")
    return table[which](G)


# -- literal enumeration, used to cross-check the dynamic program ------------


def prufer_trees(N: int):
    """All labeled trees on nodes ``0..N-1`` as edge lists."""
    if N == 1:
        yield []
        return
    if N == 2:
        yield [(0, 1)]
        return
    for seq in product(range(N), repeat=N - 2):
        degree = [1] * N
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = min(i for i in range(N) if degree[i] == 1)
            edges.append((leaf, x))
            degree[leaf] -= 1
            degree[x] -= 1
        u, v = [i for i in range(N) if degree[i] == 1]
        edges.append((u, v))
        yield edges


def brute_ecrw_alpha(G: Graph, alpha: int, max_nodes: int) -> int:
    """Minimum crossing number over every tree with at most ``max_nodes`` nodes and every bag map."""
    best = None
    for N in range(1, max_nodes + 1):
        for edges in prufer_trees(N):
            for assign in product(range(N), repeat=G.n):
                sizes = [0] * N
                for t in assign:
                    sizes[t] += 1
                if max(sizes, default=0) > alpha:
                    continue
                bags = {t: [v for v in range(G.n) if assign[v] == t] for t in range(N)}
                D = TreeCutDecomposition(list(range(N)), edges, bags)
                c = metrics(G, D).crossing
                if best is None or c < best:
                    best = c
    return best
