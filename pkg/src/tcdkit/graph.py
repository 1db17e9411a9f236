"""Simple undirected graphs on dense integer vertex ids."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

Edge = tuple[int, int]


class GraphParseError(ValueError):
    """Raised when edge-list text cannot be read; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph with vertices ``0..n-1``.

    ``edges`` is a sorted tuple of normalized pairs ``(u, v)`` with ``u < v``;
    ``adj`` holds sorted neighbor tuples and ``nbr_mask`` the same neighborhoods
    as integer bitsets (bit ``i`` set iff ``i`` is a neighbor).
    """

    n: int
    edges: tuple[Edge, ...]
    adj: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    nbr_mask: tuple[int, ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        seen: set[Edge] = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            key = _norm(u, v)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in seen:
            nbrs[u].append(v)
            nbrs[v].append(u)
        adj = tuple(tuple(sorted(x)) for x in nbrs)
        masks = tuple(sum(1 << w for w in x) for x in adj)
        return cls(n, tuple(sorted(seen)), adj, masks)

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.nbr_mask[u] >> v & 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))


def vertex_set(G: Graph, members: Iterable[int]) -> tuple[int, ...]:
    """Sorted, duplicate-free tuple of ids; raises if any id is not a vertex of G."""
    out = tuple(sorted(set(members)))
    for v in out:
        if not 0 <= v < G.n:
            raise ValueError(f"vertex {v} not in graph with {G.n} vertices")
    return out


def to_mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def from_mask(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def parse_graph(text: str) -> Graph:
    """Read the edge-list format: optional ``p <n> <m>`` header, ``u v`` lines, ``#`` comments."""
    declared_n = None
    declared_m = None
    edges: list[Edge] = []
    seen: dict[Edge, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "p":
            if declared_n is not None or edges:
                raise GraphParseError(lineno, "header must come first and appear once")
            if len(parts) != 3:
                raise GraphParseError(lineno, "header must read 'p <n> <m>'")
            try:
                declared_n, declared_m = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphParseError(lineno, "non-integer header field") from None
            if declared_n < 0 or declared_m < 0:
                raise GraphParseError(lineno, "negative header field")
            continue
        if len(parts) != 2:
            raise GraphParseError(lineno, f"expected two vertex ids, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(lineno, f"non-integer vertex id in {line!r}") from None
        if u < 0 or v < 0:
            raise GraphParseError(lineno, "negative vertex id")
        if u == v:
            raise GraphParseError(lineno, f"self-loop at vertex {u}")
        if declared_n is not None and max(u, v) >= declared_n:
            raise GraphParseError(lineno, f"vertex id {max(u, v)} >= declared n={declared_n}")
        key = _norm(u, v)
        if key in seen:
            raise GraphParseError(lineno, f"duplicate edge {u} {v} (first on line {seen[key]})")
        seen[key] = lineno
        edges.append(key)
    if declared_n is not None:
        n = declared_n
    else:
        n = 1 + max((max(e) for e in edges), default=-1)
    if declared_m is not None and declared_m != len(edges):
        raise GraphParseError(0, f"header declares {declared_m} edges but {len(edges)} were read")
    return Graph.from_edges(n, edges)


def format_edge_list(G: Graph, comments: Sequence[str] = ()) -> str:
    """Serialize with a header so isolated trailing vertices survive a round trip."""
    lines = [f"# {c}" for c in comments]
    lines.append(f"p {G.n} {G.m}")
    lines.extend(f"{u} {v}" for u, v in G.edges)
    return "\n".join(lines) + "\n"


def header_comments(text: str) -> list[str]:
    """Leading ``# ...`` lines, as ``format_edge_list`` writes them."""
    out = []
    for raw in text.splitlines():
        if not raw.startswith("#"):
            break
        out.append(raw[2:] if raw.startswith("# ") else raw[1:])
    return out


def delta(G: Graph, S1: Iterable[int], S2: Iterable[int]) -> list[Edge]:
    """Edges with one endpoint in S1 and the other in S2 (the sets must be disjoint)."""
    a, b = to_mask(S1), to_mask(S2)
    if a & b:
        raise ValueError("delta requires disjoint vertex sets")
    out = []
    for u in from_mask(a):
        hits = G.nbr_mask[u] & b
        out.extend(_norm(u, w) for w in from_mask(hits))
    return sorted(out)


def delta_count(G: Graph, a: int, b: int) -> int:
    """|delta| between two disjoint vertex bitmasks."""
    total = 0
    for u in from_mask(a):
        total += (G.nbr_mask[u] & b).bit_count()
    return total


def induced_subgraph(G: Graph, S: Iterable[int]) -> tuple[Graph, list[int]]:
    """Return ``(H, ids)`` where vertex ``i`` of H is vertex ``ids[i]`` of G."""
    ids = list(vertex_set(G, S))
    index = {v: i for i, v in enumerate(ids)}
    edges = [(index[u], index[v]) for u, v in G.edges if u in index and v in index]
    return Graph.from_edges(len(ids), edges), ids


def connected_components(G: Graph) -> list[tuple[int, ...]]:
    seen = [False] * G.n
    comps = []
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], [s]
        while stack:
            u = stack.pop()
            for w in G.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
                    comp.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def disjoint_union(*graphs: Graph) -> Graph:
    edges, offset = [], 0
    for H in graphs:
        edges.extend((u + offset, v + offset) for u, v in H.edges)
        offset += H.n
    return Graph.from_edges(offset, edges)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
