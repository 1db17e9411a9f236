"""Tree-cut decompositions and the width measures defined on them."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional

from .graph import Edge, Graph, connected_components, to_mask

Node = Hashable


@dataclass
class Violation:
    kind: str
    detail: dict

    def as_dict(self) -> dict:
        return {"kind": self.kind, **self.detail}


@dataclass
class ValidityReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def add(self, kind: str, **detail) -> None:
        self.violations.append(Violation(kind, detail))

    def as_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.as_dict() for v in self.violations]}

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class TreeCutDecomposition:
    """A tree on arbitrary hashable node ids with one (possibly empty) bag per node."""

    nodes: list
    tree_edges: list
    bags: dict
    root: Optional[Node] = None

    def __post_init__(self):
        self.nodes = list(self.nodes)
        self.tree_edges = [tuple(e) for e in self.tree_edges]
        self.bags = {t: tuple(sorted(self.bags.get(t, ()))) for t in self.nodes}
        self._adj = {t: [] for t in self.nodes}
        for a, b in self.tree_edges:
            if a in self._adj and b in self._adj:
                self._adj[a].append(b)
                self._adj[b].append(a)

    def neighbors(self, t: Node) -> list:
        return self._adj[t]

    def is_leaf(self, t: Node) -> bool:
        return len(self._adj[t]) <= 1

    def leaves(self) -> list:
        return [t for t in self.nodes if self.is_leaf(t)]

    def owner(self) -> dict[int, Node]:
        """Vertex -> node whose bag holds it."""
        return {v: t for t in self.nodes for v in self.bags[t]}

    def is_tree(self) -> bool:
        if not self.nodes or len(self.tree_edges) != len(self.nodes) - 1:
            return False
        if len(set(self.nodes)) != len(self.nodes):
            return False
        seen = {self.nodes[0]}
        queue = deque([self.nodes[0]])
        while queue:
            t = queue.popleft()
            for s in self._adj[t]:
                if s not in seen:
                    seen.add(s)
                    queue.append(s)
        return len(seen) == len(self.nodes)

    def component_labels(self, t: Node) -> dict[Node, int]:
        """Label every node other than t by the component of T - t containing it."""
        labels = {}
        for idx, start in enumerate(self._adj[t]):
            labels[start] = idx
            stack = [start]
            while stack:
                x = stack.pop()
                for y in self._adj[x]:
                    if y != t and y not in labels:
                        labels[y] = idx
                        stack.append(y)
        return labels

    def side_of_edge(self, a: Node, b: Node) -> set:
        """Nodes of the component of T - ab containing a."""
        seen = {a}
        stack = [a]
        while stack:
            x = stack.pop()
            for y in self._adj[x]:
                if y not in seen and not (x == a and y == b):
                    seen.add(y)
                    stack.append(y)
        return seen

    def rooted(self, root: Node) -> tuple[dict, dict]:
        """``(parent, children)`` maps for the tree hung from ``root``; children keep adjacency order."""
        parent = {root: None}
        children = {t: [] for t in self.nodes}
        order = [root]
        for x in order:
            for y in self._adj[x]:
                if y not in parent:
                    parent[y] = x
                    children[x].append(y)
                    order.append(y)
        return parent, children

    def copy(self) -> "TreeCutDecomposition":
        return TreeCutDecomposition(list(self.nodes), list(self.tree_edges), dict(self.bags), self.root)

    def relabeled(self, mapping: Mapping) -> "TreeCutDecomposition":
        return TreeCutDecomposition(
            [mapping[t] for t in self.nodes],
            [(mapping[a], mapping[b]) for a, b in self.tree_edges],
            {mapping[t]: self.bags[t] for t in self.nodes},
            None if self.root is None else mapping[self.root],
        )

    def restricted(self, keep: Iterable[int], relabel: Optional[Mapping[int, int]] = None) -> "TreeCutDecomposition":
        """Same tree, bags intersected with ``keep`` and optionally renamed through ``relabel``."""
        keep = set(keep)
        bags = {}
        for t in self.nodes:
            inside = [v for v in self.bags[t] if v in keep]
            bags[t] = [relabel[v] for v in inside] if relabel is not None else inside
        return TreeCutDecomposition(list(self.nodes), list(self.tree_edges), bags, self.root)

    def to_json(self) -> dict:
        def key(x):
            return (0, x) if isinstance(x, int) else (1, str(x))

        return {
            "nodes": sorted(self.nodes, key=key),
            "tree_edges": sorted((sorted(e, key=key) for e in self.tree_edges), key=lambda e: [key(x) for x in e]),
            "bags": {str(t): list(self.bags[t]) for t in sorted(self.nodes, key=key)},
            "root": self.root,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "TreeCutDecomposition":
        nodes = list(data["nodes"])
        by_str = {str(t): t for t in nodes}
        bags = {by_str[k]: list(v) for k, v in data.get("bags", {}).items()}
        return cls(nodes, [tuple(e) for e in data.get("tree_edges", [])], bags, data.get("root"))


def single_bag(G: Graph) -> TreeCutDecomposition:
    return TreeCutDecomposition([0], [], {0: list(range(G.n))}, 0)


def validate_tcd(G: Graph, D: TreeCutDecomposition) -> ValidityReport:
    report = ValidityReport()
    if len(set(D.nodes)) != len(D.nodes):
        report.add("duplicate_node")
    for a, b in D.tree_edges:
        if a not in D.bags or b not in D.bags:
            report.add("unknown_node", edge=[a, b])
    if not D.is_tree():
        report.add("not_tree", nodes=len(D.nodes), edges=len(D.tree_edges))
    if D.root is not None and D.root not in D.bags:
        report.add("unknown_root", root=D.root)
    where: dict[int, list] = {}
    for t in D.nodes:
        for v in D.bags[t]:
            if not 0 <= v < G.n:
                report.add("unknown_vertex", vertex=v, node=t)
            where.setdefault(v, []).append(t)
    for v in sorted(where):
        if len(where[v]) > 1:
            report.add("overlap", vertex=v, nodes=where[v])
    for v in range(G.n):
        if v not in where:
            report.add("uncovered", vertex=v)
    return report


def _require_valid(G: Graph, D: TreeCutDecomposition) -> None:
    report = validate_tcd(G, D)
    if not report.ok:
        raise ValueError(f"invalid tree-cut decomposition: {report.as_dict()['violations']}")


def crossing_at(G: Graph, D: TreeCutDecomposition, t: Node, owner: Optional[dict] = None) -> int:
    """Edges of G whose endpoints lie in the bags of two different components of T - t."""
    if t not in D.bags:
        raise KeyError(f"unknown node {t!r}")
    if owner is None:
        owner = D.owner()
    labels = D.component_labels(t)
    comp = [-1] * G.n
    for v, s in owner.items():
        if s != t:
            comp[v] = labels[s]
    return sum(1 for u, v in G.edges if comp[u] >= 0 and comp[v] >= 0 and comp[u] != comp[v])


def crossing_edges_at(G: Graph, D: TreeCutDecomposition, t: Node) -> list[Edge]:
    owner = D.owner()
    labels = D.component_labels(t)
    comp = {v: labels[s] for v, s in owner.items() if s != t}
    return [e for e in G.edges if e[0] in comp and e[1] in comp and comp[e[0]] != comp[e[1]]]


@dataclass(frozen=True)
class Metrics:
    thickness: int
    crossing: int

    @property
    def ecrw(self) -> int:
        return max(self.thickness, self.crossing)

    def as_tuple(self) -> tuple[int, int, int]:
        return self.thickness, self.crossing, self.ecrw


def metrics(G: Graph, D: TreeCutDecomposition) -> Metrics:
    """Thickness, crossing number and edge-crossing width of a valid decomposition."""
    _require_valid(G, D)
    owner = D.owner()
    thickness = max((len(b) for b in D.bags.values()), default=0)
    crossing = max((crossing_at(G, D, t, owner) for t in D.nodes), default=0)
    return Metrics(thickness, crossing)


def adhesion(G: Graph, D: TreeCutDecomposition, e: tuple) -> int:
    a, b = e
    if a not in D.bags or b not in D.neighbors(a):
        raise ValueError(f"{e!r} is not a tree edge")
    side = D.side_of_edge(a, b)
    left = to_mask(v for t in side for v in D.bags[t])
    return sum(1 for u, v in G.edges if (left >> u & 1) != (left >> v & 1))


def is_tree_partition(G: Graph, D: TreeCutDecomposition) -> bool:
    owner = D.owner()
    for u, v in G.edges:
        a, b = owner[u], owner[v]
        if a != b and b not in D.neighbors(a):
            return False
    return True


# -- spanning forests -------------------------------------------------------


@dataclass
class SpanningForestPair:
    graph: Graph
    forest: tuple

    def __post_init__(self):
        self.forest = tuple(sorted((min(e), max(e)) for e in self.forest))

    def check(self) -> None:
        G = self.graph
        edge_set = set(G.edges)
        for e in self.forest:
            if e not in edge_set:
                raise ValueError(f"forest edge {e} is not an edge of the graph")
        if len(set(self.forest)) != len(self.forest):
            raise ValueError("forest has repeated edges")
        parent = list(range(G.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.forest:
            ru, rv = find(u), find(v)
            if ru == rv:
                raise ValueError("forest contains a cycle")
            parent[ru] = rv
        if len(self.forest) != G.n - len(connected_components(G)):
            raise ValueError("forest is not a maximal spanning forest")

    def forest_adj(self) -> list[list[int]]:
        adj = [[] for _ in range(self.graph.n)]
        for u, v in self.forest:
            adj[u].append(v)
            adj[v].append(u)
        return adj


def _forest_path(adj: list[list[int]], s: int, t: int) -> list[int]:
    prev = {s: None}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        if x == t:
            break
        for y in adj[x]:
            if y not in prev:
                prev[y] = x
                queue.append(y)
    path = [t]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path


def local_feedback_sets(P: SpanningForestPair) -> list[list[Edge]]:
    P.check()
    adj = P.forest_adj()
    in_forest = set(P.forest)
    loc: list[list[Edge]] = [[] for _ in range(P.graph.n)]
    for e in P.graph.edges:
        if e in in_forest:
            continue
        for v in _forest_path(adj, e[0], e[1]):
            loc[v].append(e)
    return loc


def ecw_of_forest(P: SpanningForestPair) -> int:
    return 1 + max((len(x) for x in local_feedback_sets(P)), default=0)


def tcd_from_spanning_forest(P: SpanningForestPair) -> TreeCutDecomposition:
    """Singleton-bag decomposition on a tree extending the forest.

    Forest components are linked by joining each component's lowest vertex to
    the lowest vertex of the first component.
    """
    P.check()
    G = P.graph
    if G.n == 0:
        return TreeCutDecomposition([0], [], {0: []}, None)
    parent = list(range(G.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in P.forest:
        parent[find(u)] = find(v)
    reps: dict[int, int] = {}
    for v in range(G.n):
        reps.setdefault(find(v), v)
    lows = sorted(reps.values())
    links = [(lows[0], r) for r in lows[1:]]
    return TreeCutDecomposition(list(range(G.n)), list(P.forest) + links, {v: [v] for v in range(G.n)}, None)


def spanning_forest_bfs(G: Graph) -> SpanningForestPair:
    """A BFS maximal spanning forest; convenient default witness."""
    seen = [False] * G.n
    forest = []
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in G.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    forest.append((x, y))
                    queue.append(y)
    return SpanningForestPair(G, tuple(forest))
