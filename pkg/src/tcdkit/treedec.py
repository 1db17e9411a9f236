"""Tree-decompositions: a width-bounded builder, a validator and nice conversion.

The builder satisfies the usual approximation contract: given ``w`` it returns
a decomposition of width at most ``2w + 1`` or proves ``tw(G) > w``.  It does
so with a min-fill heuristic backed by an exact search over elimination
prefixes, which is adequate for the small induced subgraphs the approximation
loop hands it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .decomp import ValidityReport
from .graph import Graph, from_mask

# |V(nice)| <= NICE_NODE_FACTOR * (width + 1) * max(n, 1)
NICE_NODE_FACTOR = 4


@dataclass
class TreeDecomposition:
    nodes: list
    tree_edges: list
    bags: dict
    root: Optional[int] = None

    def __post_init__(self):
        self.tree_edges = [tuple(e) for e in self.tree_edges]
        self.bags = {t: tuple(sorted(set(self.bags.get(t, ())))) for t in self.nodes}

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def adjacency(self) -> dict:
        adj = {t: [] for t in self.nodes}
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def to_json(self) -> dict:
        return {
            "nodes": sorted(self.nodes),
            "tree_edges": sorted(sorted(e) for e in self.tree_edges),
            "bags": {str(t): list(self.bags[t]) for t in sorted(self.nodes)},
            "root": self.root,
        }


@dataclass
class NiceTreeDecomposition(TreeDecomposition):
    """Rooted decomposition whose nodes are typed leaf / introduce / forget / join.

    ``vertex[t]`` is the vertex introduced or forgotten at ``t`` (absent for
    leaves and joins); ``children[t]`` lists the children of ``t``.
    """

    kind: dict = field(default_factory=dict)
    vertex: dict = field(default_factory=dict)
    children: dict = field(default_factory=dict)

    def postorder(self) -> list:
        order, stack = [], [(self.root, False)]
        while stack:
            t, done = stack.pop()
            if done:
                order.append(t)
                continue
            stack.append((t, True))
            for c in reversed(self.children[t]):
                stack.append((c, False))
        return order

    def to_json(self) -> dict:
        data = super().to_json()
        data["kind"] = {str(t): self.kind[t] for t in sorted(self.nodes)}
        data["vertex"] = {str(t): self.vertex[t] for t in sorted(self.vertex)}
        return data


@dataclass(frozen=True)
class TooWide:
    """Certificate that the tree-width exceeds ``w``."""

    w: int
    reason: str = ""


# -- validation -------------------------------------------------------------


def _is_tree(nodes, edges) -> bool:
    if not nodes or len(edges) != len(nodes) - 1:
        return False
    adj = {t: [] for t in nodes}
    for a, b in edges:
        if a not in adj or b not in adj:
            return False
        adj[a].append(b)
        adj[b].append(a)
    seen = {nodes[0]}
    queue = deque([nodes[0]])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == len(nodes)


def validate_td(G: Graph, D: TreeDecomposition) -> ValidityReport:
    report = ValidityReport()
    if not _is_tree(D.nodes, D.tree_edges):
        report.add("not_tree", nodes=len(D.nodes), edges=len(D.tree_edges))
        return report
    holders: dict[int, list] = {v: [] for v in range(G.n)}
    for t in D.nodes:
        for v in D.bags[t]:
            if v not in holders:
                report.add("unknown_vertex", vertex=v, node=t)
            else:
                holders[v].append(t)
    for v in range(G.n):
        if not holders[v]:
            report.add("uncovered_vertex", vertex=v)
    bag_sets = {t: set(D.bags[t]) for t in D.nodes}
    for u, v in G.edges:
        if not any(u in s and v in s for s in bag_sets.values()):
            report.add("uncovered_edge", edge=[u, v])
    adj = D.adjacency()
    for v in range(G.n):
        ts = holders[v]
        if len(ts) <= 1:
            continue
        inside = set(ts)
        seen = {ts[0]}
        stack = [ts[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in inside and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(inside):
            report.add("disconnected_vertex", vertex=v)
    return report


def check_nice(G: Graph, D: NiceTreeDecomposition) -> ValidityReport:
    """Decomposition validity plus the node-typing rules of a nice decomposition."""
    report = validate_td(G, D)
    if not report.ok:
        return report
    if D.root not in D.bags:
        report.add("no_root")
        return report
    # children must agree with the tree rooted at D.root
    adj = D.adjacency()
    parent = {D.root: None}
    queue = deque([D.root])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                queue.append(y)
    for t in D.nodes:
        expected = sorted(c for c in adj[t] if parent.get(c) == t)
        if sorted(D.children.get(t, [])) != expected:
            report.add("children_mismatch", node=t)
    for t in D.nodes:
        kids = D.children.get(t, [])
        bag = set(D.bags[t])
        kind = D.kind.get(t)
        if not kids:
            if kind != "leaf":
                report.add("bad_kind", node=t, expected="leaf", got=kind)
            if t != D.root and len(bag) != 1:
                report.add("leaf_size", node=t, size=len(bag))
        elif len(kids) == 1:
            child = set(D.bags[kids[0]])
            v = D.vertex.get(t)
            if kind == "introduce":
                if v is None or v in child or bag != child | {v}:
                    report.add("bad_introduce", node=t)
            elif kind == "forget":
                if v is None or v not in child or bag != child - {v}:
                    report.add("bad_forget", node=t)
            else:
                report.add("bad_kind", node=t, expected="introduce|forget", got=kind)
        elif len(kids) == 2:
            if kind != "join":
                report.add("bad_kind", node=t, expected="join", got=kind)
            if any(set(D.bags[c]) != bag for c in kids):
                report.add("bad_join", node=t)
        else:
            report.add("too_many_children", node=t, count=len(kids))
    return report


# -- elimination orderings --------------------------------------------------


def _reach_beyond(G: Graph, eliminated: int, v: int) -> int:
    """Vertices outside ``eliminated | {v}`` reachable from v through eliminated vertices."""
    seen = 1 << v
    frontier = [v]
    out = 0
    while frontier:
        x = frontier.pop()
        nb = G.nbr_mask[x] & ~seen
        seen |= nb
        out |= nb & ~eliminated
        for y in from_mask(nb & eliminated):
            frontier.append(y)
    return out & ~(1 << v)


def decomposition_from_order(G: Graph, order: list[int]) -> TreeDecomposition:
    """Bags ``{v} | Q(v)`` for each eliminated vertex, wired into a tree."""
    if G.n == 0:
        return TreeDecomposition([0], [], {0: ()})
    pos = {v: i for i, v in enumerate(order)}
    eliminated = 0
    bags, edges = {}, []
    for v in order:
        q = _reach_beyond(G, eliminated, v)
        bags[v] = [v] + from_mask(q)
        eliminated |= 1 << v
    for v in order[:-1]:
        later = [u for u in bags[v] if u != v]
        if later:
            p = min(later, key=pos.__getitem__)
        else:
            p = order[pos[v] + 1]
        edges.append((v, p))
    return TreeDecomposition(list(order), edges, bags)


def min_fill_order(G: Graph) -> list[int]:
    nbrs = [set(G.adj[v]) for v in range(G.n)]
    alive = set(range(G.n))
    order = []
    while alive:
        best, best_key = None, None
        for v in sorted(alive):
            ns = sorted(nbrs[v])
            fill = sum(1 for i, a in enumerate(ns) for b in ns[i + 1:] if b not in nbrs[a])
            key = (fill, len(ns), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        ns = list(nbrs[best])
        for i, a in enumerate(ns):
            for b in ns[i + 1:]:
                nbrs[a].add(b)
                nbrs[b].add(a)
        for a in ns:
            nbrs[a].discard(best)
        alive.discard(best)
        order.append(best)
    return order


def degeneracy(G: Graph) -> int:
    deg = [G.degree(v) for v in range(G.n)]
    alive = set(range(G.n))
    best = 0
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        best = max(best, deg[v])
        alive.discard(v)
        for u in G.adj[v]:
            if u in alive:
                deg[u] -= 1
    return best


def exact_order_within(G: Graph, w: int) -> Optional[list[int]]:
    """Elimination order of width <= w, or None if tw(G) > w.

    Breadth-first over eliminated prefixes, keeping only prefixes every step of
    which stayed within the budget.
    """
    full = (1 << G.n) - 1
    back = {0: None}
    queue = deque([0])
    while queue:
        S = queue.popleft()
        if S == full:
            order = []
            while back[S] is not None:
                prev, v = back[S]
                order.append(v)
                S = prev
            return order[::-1]
        for v in from_mask(full & ~S):
            nxt = S | (1 << v)
            if nxt in back:
                continue
            if _reach_beyond(G, S, v).bit_count() <= w:
                back[nxt] = (S, v)
                queue.append(nxt)
    return None


def build_tree_decomposition(G: Graph, w: int) -> TreeDecomposition | TooWide:
    if w < 1:
        raise ValueError("width budget must be at least 1")
    if G.n == 0:
        return decomposition_from_order(G, [])
    if degeneracy(G) > w:
        return TooWide(w, "degeneracy exceeds budget")
    td = decomposition_from_order(G, min_fill_order(G))
    if td.width <= 2 * w + 1:
        return td
    order = exact_order_within(G, w)
    if order is None:
        return TooWide(w, "exhaustive elimination search")
    return decomposition_from_order(G, order)


# -- nice conversion --------------------------------------------------------


def _contract_subset_edges(D: TreeDecomposition) -> tuple[dict, dict]:
    bags = {t: frozenset(D.bags[t]) for t in D.nodes}
    adj = {t: set() for t in D.nodes}
    for a, b in D.tree_edges:
        adj[a].add(b)
        adj[b].add(a)
    changed = True
    while changed:
        changed = False
        for a in sorted(adj):
            for b in sorted(adj[a]):
                if bags[a] <= bags[b]:
                    for c in adj[a]:
                        if c != b:
                            adj[c].discard(a)
                            adj[c].add(b)
                            adj[b].add(c)
                    adj[b].discard(a)
                    del adj[a]
                    del bags[a]
                    changed = True
                    break
            if changed:
                break
    return bags, adj


def make_nice(G: Graph, D: TreeDecomposition) -> NiceTreeDecomposition:
    report = validate_td(G, D)
    if not report.ok:
        raise ValueError(f"invalid tree-decomposition: {report.as_dict()['violations']}")
    bags, adj = _contract_subset_edges(D)
    root = min(bags, key=lambda t: (min(bags[t]) if bags[t] else G.n, t)) if G.n else min(bags)

    out_bags: dict[int, tuple] = {}
    kind: dict[int, str] = {}
    vertex: dict[int, int] = {}
    children: dict[int, list] = {}
    counter = [0]

    def new(bag, k, kids, v=None):
        t = counter[0]
        counter[0] += 1
        out_bags[t] = tuple(sorted(bag))
        kind[t] = k
        children[t] = list(kids)
        if v is not None:
            vertex[t] = v
        return t

    def chain(bottom: int, target: frozenset) -> int:
        cur = bottom
        current = set(out_bags[bottom])
        for v in sorted(current - target):
            current.discard(v)
            cur = new(current, "forget", [cur], v)
        for v in sorted(target - current):
            current.add(v)
            cur = new(current, "introduce", [cur], v)
        return cur

    parent = {root: None}
    order = [root]
    for x in order:
        for y in sorted(adj[x]):
            if y not in parent:
                parent[y] = x
                order.append(y)
    built: dict = {}
    for t in reversed(order):
        bag = bags[t]
        kids = [c for c in sorted(adj[t]) if parent.get(c) == t]
        if not kids:
            vs = sorted(bag)
            if not vs:
                built[t] = new((), "leaf", [])
                continue
            cur = new((vs[0],), "leaf", [])
            built[t] = chain(cur, bag)
            continue
        tops = [chain(built[c], bag) for c in kids]
        cur = tops[0]
        for other in tops[1:]:
            cur = new(bag, "join", [cur, other])
        built[t] = cur
    nodes = sorted(out_bags)
    edges = [(c, t) for t in nodes for c in children[t]]
    return NiceTreeDecomposition(nodes, edges, out_bags, built[root], kind, vertex, children)
