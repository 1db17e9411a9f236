"""Representative colorings and list coloring over a tree-cut decomposition.

``reduce_vectors`` keeps a bounded subset of a vector family that still
contains a B-compatible partner for every vector some member of the family was
compatible with.  ``reduce_colorings`` applies it to colorings through their
boundary vectors.  ``solve_list_coloring`` runs the bottom-up table
computation, storing for every node a small set of colorings of the subtree
boundary together with the child choices that realised them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Mapping, Optional, Sequence

from .decomp import TreeCutDecomposition, metrics, validate_tcd
from .graph import Graph, connected_components, induced_subgraph

Lists = Mapping[int, Sequence[int]]
Coloring = dict


class ColoringError(ValueError):
    """Malformed coloring input (improper precoloring, bad color, oversized list)."""


# -- representative vectors -------------------------------------------------


def compatible(V: Sequence, W: Sequence, B) -> bool:
    return all(V[i] != W[j] for i, j in B)


def vector_bound(q: int, t: int) -> int:
    """Size guarantee of ``reduce_vectors`` for q coordinates against t."""
    if q == 0 or t == 0:
        return 1
    return factorial(q) * 2 ** (q * (q + 1) // 2) * t ** (q - 1) * (t + 1)


def _reduce(q: int, t: int, B: list, P: list) -> list:
    if len(P) <= 1 or not B:
        return P[:1]
    if q == 1:
        return P[: t + 1]
    cap = q * t + 1
    base: list = []
    for V in P:
        if all(all(V[i] != U[i] for i in range(q)) for U in base):
            base.append(V)
            if len(base) == cap:
                return base
    chosen = set(base)
    classes: dict = {}
    for V in P:
        if V in chosen:
            continue
        # every leftover vector agrees with some base vector somewhere
        for j, U in enumerate(base):
            agree = tuple(i for i in range(q) if V[i] == U[i])
            if agree:
                classes.setdefault((j, agree), []).append(V)
                break
    out = list(base)
    for (_, agree), members in classes.items():
        keep = [i for i in range(q) if i not in agree]
        pos = {i: n for n, i in enumerate(keep)}
        sub_B = [(pos[i], j) for i, j in B if i in pos]
        projected = [tuple(V[i] for i in keep) for V in members]
        back = dict(zip(projected, members))
        out.extend(back[x] for x in _reduce(len(keep), t, sub_B, projected))
    return out


def reduce_vectors(q: int, t: int, B, P: Sequence[Sequence[int]]) -> list[tuple]:
    """Subset of ``P`` (in input order) with the representative property for B-compatibility.

    ``B`` holds 0-based pairs ``(i, j)`` meaning coordinate i of a P-vector must
    differ from coordinate j of the partner vector.
    """
    P = [tuple(V) for V in P]
    if len(set(P)) != len(P):
        raise ValueError("vectors must be distinct")
    if any(len(V) != q for V in P):
        raise ValueError(f"every vector must have length {q}")
    B = sorted(set((int(i), int(j)) for i, j in B))
    if any(not (0 <= i < q and 0 <= j < t) for i, j in B):
        raise ValueError("pair index out of range")
    kept = set(_reduce(q, t, B, P))
    return [V for V in P if V in kept]


def boundary(G: Graph, S, T) -> tuple[list[int], list[int]]:
    S, T = set(S), set(T)
    if S & T:
        raise ValueError("S and T must be disjoint")
    bdS = sorted(v for v in S if any(u in T for u in G.adj[v]))
    bdT = sorted(v for v in T if any(u in S for u in G.adj[v]))
    return bdS, bdT


def reduce_colorings(G: Graph, S, T, F: Sequence[Mapping[int, int]]) -> list:
    """Representative subset of colorings of ``G[S]`` with respect to colorings of ``G[T]``."""
    bdS, bdT = boundary(G, S, T)
    if not bdS:
        return list(F[:1])
    tindex = {v: j for j, v in enumerate(bdT)}
    U = [(i, tindex[u]) for i, v in enumerate(bdS) for u in G.adj[v] if u in tindex]
    first: dict = {}
    for n, g in enumerate(F):
        first.setdefault(tuple(g[v] for v in bdS), n)
    vectors = list(first)
    kept = reduce_vectors(len(bdS), len(bdT), U, vectors)
    return [F[first[V]] for V in kept]


# -- list pruning ------------------------------------------------------------


@dataclass
class PrunedInstance:
    graph: Graph
    ids: list
    lists: dict
    stack: list = field(default_factory=list)


def normalize_lists(G: Graph, L: Lists) -> dict[int, tuple]:
    out = {}
    for v in range(G.n):
        if v not in L:
            raise ColoringError(f"vertex {v} has no list")
        out[v] = tuple(sorted(set(int(c) for c in L[v])))
    return out


def prune_large_lists(G: Graph, L: Lists) -> PrunedInstance:
    """Remove vertices whose list outgrows their degree, repeatedly.

    ``stack`` records ``(v, remaining neighbours)`` in removal order.
    """
    L = normalize_lists(G, L)
    alive = set(range(G.n))
    deg = [G.degree(v) for v in range(G.n)]
    stack = []
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            if len(L[v]) > deg[v]:
                alive.discard(v)
                nbrs = tuple(u for u in G.adj[v] if u in alive)
                for u in nbrs:
                    deg[u] -= 1
                stack.append((v, nbrs))
                changed = True
    H, ids = induced_subgraph(G, alive)
    return PrunedInstance(H, ids, {i: L[v] for i, v in enumerate(ids)}, stack)


def extend_coloring(G: Graph, L: Lists, partial: Mapping[int, int], stack) -> dict:
    """Colour the pruned vertices greedily, last removed first."""
    colors = dict(partial)
    for v, _ in reversed(stack):
        used = {colors[u] for u in G.adj[v] if u in colors}
        colors[v] = next(c for c in sorted(L[v]) if c not in used)
    return colors


def is_proper_list_coloring(G: Graph, L: Lists, c: Mapping[int, int]) -> bool:
    if set(c) != set(range(G.n)):
        return False
    if any(c[v] not in set(L[v]) for v in range(G.n)):
        return False
    return all(c[u] != c[v] for u, v in G.edges)


# -- brute force -------------------------------------------------------------

BRUTE_PRODUCT_LIMIT = 10 ** 7


def _degeneracy_order(G: Graph) -> list[int]:
    deg = [G.degree(v) for v in range(G.n)]
    alive = set(range(G.n))
    order = []
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        order.append(v)
        alive.discard(v)
        for u in G.adj[v]:
            if u in alive:
                deg[u] -= 1
    return order[::-1]


def brute_list_coloring(G: Graph, L: Lists) -> Optional[dict]:
    L = normalize_lists(G, L)
    size = 1
    for v in range(G.n):
        size *= max(len(L[v]), 1)
    if size > BRUTE_PRODUCT_LIMIT:
        raise ValueError(f"search space {size} exceeds {BRUTE_PRODUCT_LIMIT}")
    order = _degeneracy_order(G)
    colors: dict = {}

    def go(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for c in L[v]:
            if all(colors.get(u) != c for u in G.adj[v]):
                colors[v] = c
                if go(i + 1):
                    return True
                del colors[v]
        return False

    return dict(colors) if go(0) else None


# -- decomposition-based solver ------------------------------------------------


def zeta(alpha: int, w: int) -> int:
    s = alpha + w
    first = factorial(s + 1) * 2 ** (s * (s + 1) // 2) * s ** max(s - 1, 0)
    return max(first, (w + 2 * alpha - 1) ** alpha)


@dataclass
class NodeTable:
    """Stored boundary colorings at one node, each with the choices that built it."""

    domain: tuple
    colorings: list
    witnesses: list
    bag_colorings: list


@dataclass
class ColoringRun:
    tables: dict = field(default_factory=dict)
    alpha: int = 0
    width: int = 0
    zeta: int = 0
    max_table: int = 0
    max_domain: int = 0
    max_boundary_edges: int = 0


def _proper_colorings(G: Graph, bag: Sequence[int], L) -> list[tuple]:
    out = []
    bag = list(bag)

    def go(i: int, cur: list) -> None:
        if i == len(bag):
            out.append(tuple(cur))
            return
        v = bag[i]
        for c in L[v]:
            if all(not (G.has_edge(v, bag[j]) and cur[j] == c) for j in range(i)):
                cur.append(c)
                go(i + 1, cur)
                cur.pop()

    go(0, [])
    return out


def _pick_root(D: TreeCutDecomposition):
    if D.root is not None:
        if not D.bags[D.root]:
            raise ValueError("root bag must be non-empty")
        return D.root
    candidates = [t for t in D.nodes if D.bags[t]]
    if not candidates:
        raise ValueError("decomposition has no non-empty bag")
    return min(candidates)


def solve_list_coloring(G: Graph, L: Lists, D: TreeCutDecomposition,
                        run: Optional[ColoringRun] = None) -> Optional[dict]:
    """Proper list coloring of G guided by D, or None when none exists.

    Lists must already be pruned (no list longer than the vertex degree).
    """
    report = validate_tcd(G, D)
    if not report.ok:
        raise ValueError(f"invalid tree-cut decomposition: {report.as_dict()['violations']}")
    L = normalize_lists(G, L)
    for v in range(G.n):
        if len(L[v]) > G.degree(v):
            raise ColoringError(f"list of vertex {v} is longer than its degree; prune first")
    if G.n == 0:
        return {}
    if any(not L[v] for v in range(G.n)):
        return None
    root = _pick_root(D)
    parent, children = D.rooted(root)
    m = metrics(G, D)
    alpha, w = max(m.thickness, 1), m.crossing
    Z = zeta(alpha, w)
    run = run if run is not None else ColoringRun()
    run.alpha, run.width, run.zeta = alpha, w, Z

    # postorder and subtree vertex sets
    order = []
    stack = [root]
    while stack:
        t = stack.pop()
        order.append(t)
        stack.extend(children[t])
    order.reverse()
    below: dict = {}
    for t in order:
        s = set(D.bags[t])
        for c in children[t]:
            s |= below[c]
        below[t] = s
    bd: dict = {}
    hat: dict = {}
    for t in order:
        inside = below[t]
        bd[t] = sorted(v for v in inside if any(u not in inside for u in G.adj[v]))
        hat[t] = tuple(sorted(set(bd[t]) | set(D.bags[t])))
        edges_out = sum(1 for v in bd[t] for u in G.adj[v] if u not in inside)
        assert len(hat[t]) <= alpha + w, (t, hat[t])
        assert edges_out <= alpha ** 2 + 2 * w, (t, edges_out)
        run.max_domain = max(run.max_domain, len(hat[t]))
        run.max_boundary_edges = max(run.max_boundary_edges, edges_out)

    tables = run.tables
    for t in order:
        bag = D.bags[t]
        kids = children[t]
        C = _proper_colorings(G, bag, L)
        if not kids and t != root:
            assert len(C) <= (w + 2 * alpha - 1) ** alpha, (t, len(C))
            tables[t] = NodeTable(hat[t], C, [(i, {}, {}) for i in range(len(C))], C)
            run.max_table = max(run.max_table, len(C))
            continue
        bagset = set(bag)
        A1, A2 = [], []
        for x in kids:
            outside = {u for v in bd[x] for u in G.adj[v] if u not in below[x]}
            (A1 if outside <= bagset else A2).append(x)

        # Step 1: colorings of the bag with a compatible stored coloring in each A1 child
        def links(x, targets):
            dom = tables[x].domain
            return [(dom.index(v), u) for v in bd[x] for u in G.adj[v] if u in targets]

        survivors = []
        for fi, f in enumerate(C):
            fmap = dict(zip(bag, f))
            picks = {}
            for x in A1:
                pairs = links(x, bagset)
                hit = next((gi for gi, g in enumerate(tables[x].colorings)
                            if all(g[a] != fmap[u] for a, u in pairs)), None)
                if hit is None:
                    break
                picks[x] = hit
            else:
                survivors.append((fi, fmap, picks))

        # Steps 2-3: combine A2 children one at a time, keeping only colours still needed
        keep_always = set(bd[t]) | bagset
        needed = []
        for i, x in enumerate(A2):
            rest = set()
            for y in A2[i + 1:]:
                rest |= below[y]
            needed.append(keep_always | {v for u in rest for v in G.adj[u]})
        candidates = []
        for fi, fmap, picks in survivors:
            layer = {tuple(sorted(fmap.items())): None}
            history = []
            for i, x in enumerate(A2):
                dom = tables[x].domain
                ext = [(dom.index(v), u) for v in bd[x] for u in G.adj[v] if u not in below[x]]
                nxt: dict = {}
                for key in layer:
                    state = dict(key)
                    for gi, g in enumerate(tables[x].colorings):
                        if any(u in state and g[a] == state[u] for a, u in ext):
                            continue
                        new = {v: c for v, c in state.items() if v in needed[i]}
                        for v, c in zip(dom, g):
                            if v in needed[i]:
                                new[v] = c
                        nkey = tuple(sorted(new.items()))
                        if nkey not in nxt:
                            nxt[nkey] = (key, gi)
                history.append(nxt)
                layer = nxt
                if not layer:
                    break
            if A2 and not layer:
                continue
            for key in layer:
                state = dict(key)
                choices = {}
                cur = key
                for i in range(len(A2) - 1, -1, -1):
                    prev, gi = history[i][cur]
                    choices[A2[i]] = gi
                    cur = prev
                g = tuple(state[v] for v in hat[t])
                candidates.append((g, (fi, picks, choices)))
        outside = set(range(G.n)) - below[t]
        F = [dict(zip(hat[t], g)) for g, _ in candidates]
        reduced = reduce_colorings(G, hat[t], outside, F)
        index = {tuple(sorted(g.items())): n for n, g in enumerate(F)}
        kept = [candidates[index[tuple(sorted(g.items()))]] for g in reduced]
        assert len(kept) <= Z, (t, len(kept), Z)
        run.max_table = max(run.max_table, len(kept))
        tables[t] = NodeTable(hat[t], [g for g, _ in kept], [wit for _, wit in kept], C)
        if not kept:
            return None

    # rebuild a full coloring from the stored choices
    colors: dict = {}
    stack = [(root, 0)]
    while stack:
        t, gi = stack.pop()
        fi, picks, choices = tables[t].witnesses[gi]
        colors.update(zip(D.bags[t], tables[t].bag_colorings[fi]))
        for x, xi in list(picks.items()) + list(choices.items()):
            stack.append((x, xi))
    if not is_proper_list_coloring(G, L, colors):
        raise AssertionError("reconstructed coloring is not a proper list coloring")
    return colors


# -- pipelines ----------------------------------------------------------------


def decomposition_for(G: Graph, alpha: int) -> TreeCutDecomposition:
    """Run the approximation with k = 1, 2, 4, ... until it yields a decomposition."""
    from .approx import ExceedsK, approx_ecrw

    k = 1
    while True:
        out = approx_ecrw(G, alpha, k, check=False)
        if not isinstance(out, ExceedsK):
            return out
        k *= 2


def list_coloring(G: Graph, L: Lists, alpha: int = 1,
                  decomposition: Optional[TreeCutDecomposition] = None,
                  runs: Optional[list] = None) -> Optional[dict]:
    """Prune, split into components, decompose each and solve; None means UNSAT."""
    L = normalize_lists(G, L)
    if any(not L[v] for v in range(G.n)):
        return None
    pruned = prune_large_lists(G, L)
    H = pruned.graph
    partial: dict = {}
    for comp in connected_components(H):
        sub, local = induced_subgraph(H, comp)
        sub_lists = {i: pruned.lists[v] for i, v in enumerate(local)}
        if decomposition is not None:
            keep = [pruned.ids[v] for v in local]
            relabel = {g: i for i, g in enumerate(keep)}
            D = decomposition.restricted(keep, relabel)
            D.root = None
        else:
            D = decomposition_for(sub, alpha)
        run = ColoringRun()
        c = solve_list_coloring(sub, sub_lists, D, run)
        if runs is not None:
            runs.append(run)
        if c is None:
            return None
        partial.update({pruned.ids[local[i]]: col for i, col in c.items()})
    colors = extend_coloring(G, L, partial, pruned.stack)
    if not is_proper_list_coloring(G, L, colors):
        raise AssertionError("final coloring failed verification")
    return colors


def precoloring_lists(G: Graph, S, q: int, cS: Mapping[int, int]) -> dict:
    S = set(S)
    if q < 1:
        raise ColoringError("q must be positive")
    if set(cS) != S:
        raise ColoringError("precoloring must cover exactly S")
    for v in S:
        if not 0 <= v < G.n:
            raise ColoringError(f"vertex {v} is not in the graph")
        if not 1 <= cS[v] <= q:
            raise ColoringError(f"color {cS[v]} of vertex {v} is outside 1..{q}")
    for u, v in G.edges:
        if u in S and v in S and cS[u] == cS[v]:
            raise ColoringError(f"precoloring is improper on edge {u} {v}")
    lists = {}
    for v in range(G.n):
        if v in S:
            lists[v] = (cS[v],)
        else:
            banned = {cS[u] for u in G.adj[v] if u in S}
            lists[v] = tuple(c for c in range(1, q + 1) if c not in banned)
    return lists


def solve_precoloring(G: Graph, S, q: int, cS: Mapping[int, int], alpha: int = 1,
                      decomposition: Optional[TreeCutDecomposition] = None) -> Optional[dict]:
    lists = precoloring_lists(G, S, q, cS)
    colors = list_coloring(G, lists, alpha, decomposition)
    if colors is not None:
        assert all(colors[v] == cS[v] for v in S)
    return colors
