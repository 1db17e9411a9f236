"""Deterministic generators for the graph families used in the width separations.

Id assignment: named vertices come first in role order, so the apex of a fan
is 0, ``u_0..u_n`` of S(k, n) are ``0..n``, the ``A`` side of Gnk is ``0..n-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Union

from .graph import Edge, Graph

FAMILIES = {
    "star": ("n",),
    "fan": ("n",),
    "grid": ("n",),
    "wall": ("n",),
    "S": ("k", "n"),
    "Gnk": ("n", "k"),
    "thick_path": ("n",),
    "thick_star": ("n",),
}


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in FAMILIES:
            raise ValueError(f"unknown family {self.name!r}; choose from {sorted(FAMILIES)}")
        expected = FAMILIES[self.name]
        missing = [p for p in expected if p not in self.params]
        if missing:
            raise ValueError(f"family {self.name!r} needs parameters {missing}")
        for p in expected:
            value = self.params[p]
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"parameter {p} must be a positive integer, got {value!r}")

    def describe(self) -> str:
        args = " ".join(f"{p}={self.params[p]}" for p in FAMILIES[self.name])
        return f"{self.name} {args}"


def _star(n: int):
    roles = {"c": 0}
    roles.update({f"l_{i}": i for i in range(1, n + 1)})
    return n + 1, [(0, i) for i in range(1, n + 1)], roles


def _fan(n: int):
    roles = {"apex": 0}
    roles.update({f"p_{i}": i for i in range(1, n + 1)})
    edges = [(0, i) for i in range(1, n + 1)] + [(i, i + 1) for i in range(1, n)]
    return n + 1, edges, roles


def _grid_edges(n: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i < n:
                out.append(((i, j), (i + 1, j)))
            if j < n:
                out.append(((i, j), (i, j + 1)))
    return out


def _grid_id(n: int, cell: tuple[int, int]) -> int:
    return (cell[0] - 1) * n + (cell[1] - 1)


def _grid_roles(n: int) -> dict[str, int]:
    return {f"g_{i}_{j}": _grid_id(n, (i, j)) for i in range(1, n + 1) for j in range(1, n + 1)}


def _grid(n: int):
    edges = [(_grid_id(n, a), _grid_id(n, b)) for a, b in _grid_edges(n)]
    return n * n, edges, _grid_roles(n)


def wall_deleted_edges(n: int) -> set[frozenset[tuple[int, int]]]:
    """Grid edges removed to form the n-wall, with index ranges taken literally."""
    gone = set()
    # {(2i, 2j-1), (2i, 2j)} for 2 <= 2i <= n and 1 <= 2j <= n
    for i in range(1, n // 2 + 1):
        for j in range(1, n // 2 + 1):
            gone.add(frozenset({(2 * i, 2 * j - 1), (2 * i, 2 * j)}))
    # {(2i-1, 2j), (2i-1, 2j+1)} for 1 <= 2i-1 <= n and 2 <= 2j+1 <= n
    for i in range(1, (n + 1) // 2 + 1):
        for j in range(1, (n - 1) // 2 + 1):
            gone.add(frozenset({(2 * i - 1, 2 * j), (2 * i - 1, 2 * j + 1)}))
    return gone


def _wall(n: int):
    gone = wall_deleted_edges(n)
    edges = [(_grid_id(n, a), _grid_id(n, b)) for a, b in _grid_edges(n) if frozenset({a, b}) not in gone]
    return n * n, edges, _grid_roles(n)


def _thick_star_paths(k: int, n: int):
    # u_0 = 0, u_i = i, v_{i,j} = n + (i-1)k + j
    roles = {f"u_{i}": i for i in range(n + 1)}
    edges = []
    for i in range(1, n + 1):
        for j in range(1, k + 1):
            v = n + (i - 1) * k + j
            roles[f"v_{i}_{j}"] = v
            edges.append((0, v))
            edges.append((i, v))
    return 1 + n + k * n, edges, roles


def _gnk(n: int, k: int):
    roles = {f"a_{i}": i - 1 for i in range(1, n + 1)}
    edges = []
    nxt = n
    for pair in combinations(range(1, n + 1), 2):
        for ell in range(1, k + 1):
            roles[f"b_{pair[0]}_{pair[1]}_{ell}"] = nxt
            edges.extend((a - 1, nxt) for a in pair)
            nxt += 1
    return nxt, edges, roles


def _thick_path(n: int):
    roles = {f"u_{i}": i - 1 for i in range(1, n + 1)}
    edges = []
    nxt = n
    for i in range(1, n):
        for j in range(1, n + 1):
            roles[f"v_{i}_{j}"] = nxt
            edges.append((i - 1, nxt))
            edges.append((i, nxt))
            nxt += 1
    return nxt, edges, roles


def gen_family(spec: FamilySpec) -> tuple[Graph, dict[str, int]]:
    """Build the family member and a ``role name -> vertex id`` map."""
    p = spec.params
    if spec.name == "star":
        n, edges, roles = _star(p["n"])
    elif spec.name == "fan":
        n, edges, roles = _fan(p["n"])
    elif spec.name == "grid":
        n, edges, roles = _grid(p["n"])
    elif spec.name == "wall":
        n, edges, roles = _wall(p["n"])
    elif spec.name == "S":
        n, edges, roles = _thick_star_paths(p["k"], p["n"])
    elif spec.name == "thick_star":
        n, edges, roles = _thick_star_paths(p["n"], p["n"])
    elif spec.name == "Gnk":
        n, edges, roles = _gnk(p["n"], p["k"])
    else:
        n, edges, roles = _thick_path(p["n"])
    return Graph.from_edges(n, edges), roles


def family(name: str, **params: int) -> tuple[Graph, dict[str, int]]:
    return gen_family(FamilySpec(name, params))


def subdivide(G: Graph, times: Union[int, Mapping[Edge, int]]) -> Graph:
    """Replace each edge ``uv`` (u < v) by a u-v path with ``times[uv]`` fresh inner vertices.

    Fresh ids are appended in edge order; missing edges in a mapping count as 0.
    """
    edges = []
    nxt = G.n
    for e in G.edges:
        t = times if isinstance(times, int) else times.get(e, 0)
        if t < 0:
            raise ValueError(f"negative subdivision count for edge {e}")
        chain = [e[0]] + list(range(nxt, nxt + t)) + [e[1]]
        nxt += t
        edges.extend(zip(chain, chain[1:]))
    return Graph.from_edges(nxt, edges)


def s3n_decomposition(n: int):
    """Thickness-1 tree-cut decomposition of S(3, n) along subdivided star arms.

    Node ``c`` holds u_0; arm i is the path c - t_i_1 - t_i_2 - t_i_3 - t_i_4
    with bags v_i_1, v_i_2, v_i_3 and finally u_i.
    """
    from .decomp import TreeCutDecomposition

    G, roles = family("S", k=3, n=n)
    nodes, edges, bags = ["c"], [], {"c": [roles["u_0"]]}
    for i in range(1, n + 1):
        prev = "c"
        for j in range(1, 5):
            t = f"t_{i}_{j}"
            nodes.append(t)
            edges.append((prev, t))
            bags[t] = [roles[f"v_{i}_{j}"]] if j <= 3 else [roles[f"u_{i}"]]
            prev = t
    return G, TreeCutDecomposition(nodes, edges, bags, "c")
