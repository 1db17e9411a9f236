"""Constrained star-cut decompositions.

A solution splits ``V(G)`` into a small center bag and leaf bags such that few
edges run between distinct leaves and every leaf is light (in weight and in
edges to the center).  ``solve_star_cut`` decides the problem by dynamic
programming over a nice tree-decomposition and rebuilds a solution from
back-pointers; ``brute_star_cut`` is the exhaustive reference.

DP state per bag (a *record*): the class of each bag vertex (0 = center,
1..2k = leaves allowed to touch other leaves, 2k+1 = isolated leaves), the
bag trace of the isolated-leaf partition, per-class weight and center-edge
counters, the center size and the leaf-to-leaf edge count.  Each record also
carries a ``mono`` tag naming the single leaf class that holds every vertex
seen so far (or -1), which lets the root reject layouts whose only leaf is the
whole graph without losing alternatives that share the same counters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional, Sequence

from .decomp import ValidityReport
from .graph import Graph, from_mask, to_mask
from .treedec import NiceTreeDecomposition, check_nice

MIXED = -1


@dataclass(frozen=True)
class StarCutInstance:
    G: Graph
    alpha: int
    k: int
    gamma: tuple

    def __post_init__(self):
        if self.alpha < 1 or self.k < 1:
            raise ValueError("alpha and k must be positive")
        gamma = tuple(int(x) for x in self.gamma)
        if len(gamma) != self.G.n or any(x < 0 for x in gamma):
            raise ValueError("gamma must give a non-negative weight to every vertex")
        object.__setattr__(self, "gamma", gamma)

    @property
    def weight_cap(self) -> int:
        return self.alpha ** 2 + 2 * self.k

    @property
    def center_edge_cap(self) -> int:
        return self.alpha ** 2 + self.k

    def weight(self, vs) -> int:
        return sum(self.gamma[v] for v in vs)


@dataclass
class StarCutSolution:
    center: tuple
    leaves: list

    def __post_init__(self):
        self.center = tuple(sorted(self.center))
        self.leaves = sorted(tuple(sorted(x)) for x in self.leaves)

    def to_json(self) -> dict:
        return {"center": list(self.center), "leaves": sorted(list(x) for x in self.leaves)}

    @classmethod
    def from_json(cls, data: dict) -> "StarCutSolution":
        return cls(tuple(data["center"]), [tuple(x) for x in data["leaves"]])


def _popcount(x: int) -> int:
    return x.bit_count()


def _cross(G: Graph, a: int, b: int) -> int:
    return sum(_popcount(G.nbr_mask[u] & b) for u in from_mask(a))


def check_solution(inst: StarCutInstance, sol: StarCutSolution) -> ValidityReport:
    G = inst.G
    report = ValidityReport()
    bags = [sol.center] + list(sol.leaves)
    seen: dict[int, int] = {}
    for idx, bag in enumerate(bags):
        for v in bag:
            if not 0 <= v < G.n:
                report.add("unknown_vertex", vertex=v)
            elif v in seen:
                report.add("overlap", vertex=v)
            else:
                seen[v] = idx
    missing = [v for v in range(G.n) if v not in seen]
    if missing:
        report.add("uncovered", vertices=missing)
    if not sol.leaves:
        report.add("no_leaf")
    if len(sol.center) > inst.alpha:
        report.add("center_too_large", size=len(sol.center), cap=inst.alpha)
    if not report.ok:
        return report
    center = to_mask(sol.center)
    masks = [to_mask(x) for x in sol.leaves]
    crossing = sum(_cross(G, masks[i], masks[j]) for i, j in combinations(range(len(masks)), 2))
    if crossing > inst.k:
        report.add("center_crossing", crossing=crossing, cap=inst.k)
    for leaf, mask in zip(sol.leaves, masks):
        w = inst.weight(leaf)
        if w > inst.weight_cap:
            report.add("leaf_weight", leaf=list(leaf), weight=w, cap=inst.weight_cap)
        d = _cross(G, mask, center)
        if d > inst.center_edge_cap:
            report.add("leaf_center_edges", leaf=list(leaf), edges=d, cap=inst.center_edge_cap)
        if len(leaf) == G.n:
            report.add("leaf_is_everything", leaf=list(leaf))
    return report


BRUTE_LIMIT = 10


def brute_star_cut(inst: StarCutInstance) -> Optional[StarCutSolution]:
    """Exhaustive search over center sets and set partitions of the remainder.

    Partial layouts are abandoned as soon as a monotone bound (leaf weight,
    leaf-center edges, leaf-leaf edges) is already exceeded.
    """
    G = inst.G
    if G.n > BRUTE_LIMIT:
        raise ValueError(f"brute_star_cut is limited to {BRUTE_LIMIT} vertices")
    wcap, dcap, k = inst.weight_cap, inst.center_edge_cap, inst.k
    gamma = inst.gamma
    for size in range(min(inst.alpha, G.n) + 1):
        for center in combinations(range(G.n), size):
            cmask = to_mask(center)
            rest = [v for v in range(G.n) if not cmask >> v & 1]
            if not rest:
                sol = StarCutSolution(center, [()])
                if check_solution(inst, sol).ok:
                    return sol
                continue
            cedges = [_popcount(G.nbr_mask[v] & cmask) for v in rest]
            blocks: list[int] = []
            weights: list[int] = []
            dcount: list[int] = []

            def place(i: int, crossing: int) -> Optional[list[int]]:
                if i == len(rest):
                    if size == 0 and len(blocks) == 1:
                        return None
                    return list(blocks)
                v = rest[i]
                nb = G.nbr_mask[v]
                for b in range(len(blocks) + 1):
                    if b == len(blocks):
                        extra = sum(_popcount(nb & m) for m in blocks)
                        if crossing + extra > k or gamma[v] > wcap or cedges[i] > dcap:
                            continue
                        blocks.append(1 << v)
                        weights.append(gamma[v])
                        dcount.append(cedges[i])
                        found = place(i + 1, crossing + extra)
                        blocks.pop()
                        weights.pop()
                        dcount.pop()
                    else:
                        extra = sum(_popcount(nb & m) for j, m in enumerate(blocks) if j != b)
                        if (crossing + extra > k or weights[b] + gamma[v] > wcap
                                or dcount[b] + cedges[i] > dcap):
                            continue
                        blocks[b] |= 1 << v
                        weights[b] += gamma[v]
                        dcount[b] += cedges[i]
                        found = place(i + 1, crossing + extra)
                        blocks[b] ^= 1 << v
                        weights[b] -= gamma[v]
                        dcount[b] -= cedges[i]
                    if found is not None:
                        return found
                return None

            layout = place(0, 0)
            if layout is not None:
                sol = StarCutSolution(center, [from_mask(m) for m in layout])
                assert check_solution(inst, sol).ok
                return sol
    return None


# -- legitimate pairs -------------------------------------------------------


def check_legitimate(inst: StarCutInstance, Z: Sequence[int], X: Sequence[Sequence[int]],
                     Y: Sequence[int], P: Sequence[Sequence[int]]) -> ValidityReport:
    """Check ``((X_0..X_2k, Y), P)`` against the legitimacy conditions for ``Z``."""
    G, k = inst.G, inst.k
    report = ValidityReport()
    if len(X) != 2 * k + 1:
        report.add("wrong_class_count", got=len(X), expected=2 * k + 1)
        return report
    sets = [set(x) for x in X] + [set(Y)]
    union: set = set()
    for s in sets:
        if union & s:
            report.add("not_disjoint")
        union |= s
    if union != set(Z):
        report.add("not_cover")
    if {v for p in P for v in p} != set(Y) or sum(len(p) for p in P) != len(set(Y)):
        report.add("bad_partition")
    if len(X[0]) > inst.alpha:
        report.add("center_too_large")
    m0 = to_mask(X[0])
    xm = [to_mask(x) for x in X]
    pm = [to_mask(p) for p in P]
    for i in range(1, 2 * k + 1):
        if _cross(G, xm[i], m0) > inst.center_edge_cap:
            report.add("class_center_edges", cls=i)
        if inst.weight(X[i]) > inst.weight_cap:
            report.add("class_weight", cls=i)
        for j, p in enumerate(pm):
            if _cross(G, xm[i], p):
                report.add("class_touches_part", cls=i, part=j)
    if sum(_cross(G, xm[i], xm[j]) for i, j in combinations(range(1, 2 * k + 1), 2)) > k:
        report.add("class_crossing")
    for j, p in enumerate(pm):
        if _cross(G, m0, p) > inst.center_edge_cap:
            report.add("part_center_edges", part=j)
    for i, j in combinations(range(len(pm)), 2):
        if _cross(G, pm[i], pm[j]):
            report.add("parts_adjacent", parts=[i, j])
    return report


def restrict_pair(X, Y, P, Zp):
    """The restriction of a legitimate pair to ``Zp``."""
    Zp = set(Zp)
    return ([sorted(set(x) & Zp) for x in X], sorted(set(Y) & Zp),
            [sorted(set(p) & Zp) for p in P if set(p) & Zp])


# -- dynamic program --------------------------------------------------------


def count_valid_tuples(inst: StarCutInstance, bag_size: int) -> int:
    """Exact number of valid tuples on a bag of the given size (class map, partition, counters)."""
    k, ncls = inst.k, 2 * inst.k + 2
    cw, cd = inst.weight_cap + 1, inst.center_edge_cap + 1

    def stirling2(n, p):
        row = [1] + [0] * p
        for i in range(1, n + 1):
            new = [0] * (p + 1)
            for j in range(1, min(i, p) + 1):
                new[j] = j * row[j] + row[j - 1]
            row = new
        return row[p] if n > 0 else (1 if p == 0 else 0)

    total = 0
    for y in range(bag_size + 1):
        rest = (ncls - 1) ** (bag_size - y)
        parts = sum(stirling2(y, p) * (cw * cd) ** p for p in range(y + 1))
        total += comb(bag_size, y) * rest * parts
    return total * (cw ** (2 * k)) * (cd ** (2 * k)) * (inst.alpha + 1) * (k + 1)


@dataclass
class StarCutDP:
    """Bottom-up record computation; ``records[t]`` maps record -> back-pointer.

    With ``canonical`` set, records are stored up to renaming of the leaf
    classes ``1..2k`` (first appearance in the bag fixes the names of present
    classes, absent ones are ordered by their counters).  Back-pointers then
    carry the renaming applied to the predecessor's labels.
    """

    inst: StarCutInstance
    ntd: NiceTreeDecomposition
    canonical: bool = True
    records: dict = field(default_factory=dict)

    def _canon(self, I, parts, C1, D1, a, b, mono):
        K = 2 * self.inst.k
        key = (I, parts, C1, D1, a, b, mono)
        if not self.canonical:
            return key, None
        perm = [0] * (K + 1)
        nxt = 1
        for c in I:
            if 1 <= c <= K and not perm[c]:
                perm[c] = nxt
                nxt += 1
        if nxt <= K:
            absent = [c for c in range(1, K + 1) if not perm[c]]
            absent.sort(key=lambda c: (-C1[c - 1], -D1[c - 1], mono != c))
            for c in absent:
                perm[c] = nxt
                nxt += 1
        if all(perm[c] == c for c in range(1, K + 1)):
            return key, None
        C1n = [0] * K
        D1n = [0] * K
        for c in range(1, K + 1):
            C1n[perm[c] - 1] = C1[c - 1]
            D1n[perm[c] - 1] = D1[c - 1]
        newI = tuple(perm[c] if 1 <= c <= K else c for c in I)
        newmono = perm[mono] if 1 <= mono <= K else mono
        return (newI, parts, tuple(C1n), tuple(D1n), a, b, newmono), tuple(perm)

    def run(self) -> None:
        inst, ntd = self.inst, self.ntd
        G = inst.G
        k = inst.k
        K = 2 * k
        ycls = K + 1
        wcap, dcap, acap = inst.weight_cap, inst.center_edge_cap, inst.alpha
        gamma = inst.gamma
        canon = self._canon

        def store(out, raw, back):
            key, perm = canon(*raw)
            if key not in out:
                out[key] = (back, perm)

        for t in ntd.postorder():
            bag = ntd.bags[t]
            kind = ntd.kind[t]
            kids = ntd.children[t]
            out: dict = {}
            if kind == "leaf":
                if not bag:
                    store(out, ((), (), (0,) * K, (0,) * K, 0, 0, MIXED), None)
                else:
                    (v,) = bag
                    for c in range(ycls + 1):
                        C1 = [0] * K
                        parts = ()
                        if c >= 1 and gamma[v] > wcap:
                            continue
                        if c == ycls:
                            parts = (((v,), gamma[v], 0),)
                        elif c >= 1:
                            C1[c - 1] = gamma[v]
                        mono = c if c >= 1 else MIXED
                        store(out, ((c,), parts, tuple(C1), (0,) * K, int(c == 0), 0, mono), None)
            elif kind == "forget":
                v = ntd.vertex[t]
                p = ntd.bags[kids[0]].index(v)
                for rec in self.records[kids[0]]:
                    I, parts, C1, D1, a, b, mono = rec
                    if I[p] == ycls:
                        newparts = []
                        for members, c2, d2 in parts:
                            if v in members:
                                members = tuple(x for x in members if x != v)
                                if not members:
                                    continue
                            newparts.append((members, c2, d2))
                        parts = tuple(sorted(newparts))
                    store(out, (I[:p] + I[p + 1:], parts, C1, D1, a, b, mono), rec)
            elif kind == "introduce":
                child = ntd.bags[kids[0]]
                v = ntd.vertex[t]
                p = bag.index(v)
                nv = G.nbr_mask[v]
                nbr_pos = [i for i, u in enumerate(child) if nv >> u & 1]
                gv = gamma[v]
                for rec in self.records[kids[0]]:
                    I, parts, C1, D1, a, b, mono = rec
                    ncls = [I[i] for i in nbr_pos]
                    to_center = ncls.count(0)
                    to_iso = ncls.count(ycls)
                    to_x = [cc for cc in ncls if 1 <= cc <= K]
                    # center
                    if a < acap:
                        D1n = list(D1)
                        for cc in to_x:
                            D1n[cc - 1] += 1
                        if max(D1n, default=0) <= dcap:
                            newparts = []
                            for members, c2, d2 in parts:
                                d2 += sum(1 for u in members if nv >> u & 1)
                                if d2 > dcap:
                                    break
                                newparts.append((members, c2, d2))
                            else:
                                store(out, (I[:p] + (0,) + I[p:], tuple(newparts), C1,
                                            tuple(D1n), a + 1, b, MIXED), rec)
                    # leaf classes that may touch each other
                    if not to_iso:
                        present = set(c for c in I if 1 <= c <= K)
                        tried = set()
                        for c in range(1, K + 1):
                            if self.canonical and c not in present:
                                sig = (C1[c - 1], D1[c - 1], mono == c)
                                if sig in tried:
                                    continue
                                tried.add(sig)
                            c1 = C1[c - 1] + gv
                            d1 = D1[c - 1] + to_center
                            nb = b + sum(1 for cc in to_x if cc != c)
                            if c1 > wcap or d1 > dcap or nb > k:
                                continue
                            store(out, (I[:p] + (c,) + I[p:], parts, C1[:c - 1] + (c1,) + C1[c:],
                                        D1[:c - 1] + (d1,) + D1[c:], a, nb,
                                        c if mono == c else MIXED), rec)
                    # isolated leaves
                    if not to_x:
                        for idx in range(len(parts) + 1):
                            if idx < len(parts):
                                members, c2, d2 = parts[idx]
                            else:
                                members, c2, d2 = (), 0, 0
                            if sum(1 for u in members if nv >> u & 1) != to_iso:
                                continue
                            c2 += gv
                            d2 += to_center
                            if c2 > wcap or d2 > dcap:
                                continue
                            newpart = (tuple(sorted(members + (v,))), c2, d2)
                            rest = [x for j, x in enumerate(parts) if j != idx]
                            nm = ycls if (mono == ycls and members) else MIXED
                            store(out, (I[:p] + (ycls,) + I[p:], tuple(sorted(rest + [newpart])),
                                        C1, D1, a, b, nm), rec)
            else:
                self._join(t, out, store)
            self.records[t] = out

    def _join(self, t, out, store) -> None:
        inst, ntd = self.inst, self.ntd
        G, k, gamma = inst.G, inst.k, inst.gamma
        K = 2 * k
        ycls = K + 1
        wcap, dcap, acap = inst.weight_cap, inst.center_edge_cap, inst.alpha
        bag = ntd.bags[t]
        left, right = ntd.children[t]
        groups: dict = {}
        for rec in self.records[right]:
            groups.setdefault((rec[0], tuple(m for m, _, _ in rec[1])), []).append(rec)
        shape_cache: dict = {}
        arrangements: dict = {}
        for rec1 in self.records[left]:
            I, parts1, C1a, D1a, a1, b1, m1 = rec1
            sig = (I, tuple(m for m, _, _ in parts1))
            partners = groups.get(sig)
            if not partners:
                continue
            shape = shape_cache.get(sig)
            if shape is None:
                masks = [0] * (ycls + 1)
                for u, c in zip(bag, I):
                    masks[c] |= 1 << u
                shape = (
                    [sum(gamma[u] for u in from_mask(m)) for m in masks],
                    [_cross(G, masks[i], masks[0]) for i in range(ycls + 1)],
                    sum(_cross(G, masks[i], masks[j]) for i, j in combinations(range(1, K + 1), 2)),
                    I.count(0),
                    bool(masks[ycls]),
                    [sum(gamma[u] for u in m) for m in sig[1]],
                    [_cross(G, to_mask(m), masks[0]) for m in sig[1]],
                    sorted(set(c for c in I if 1 <= c <= K)),
                )
                shape_cache[sig] = shape
            w_cls, d_cls, b_in, a_in, has_y, pw, pd, present = shape
            absent = [c for c in range(1, K + 1) if c not in present]
            for rec2 in partners:
                _, parts2, C1b, D1b, a2, b2, m2 = rec2
                a = a1 + a2 - a_in
                b = b1 + b2 - b_in
                if a > acap or b > k:
                    continue
                newparts = []
                for j, ((members, c2a, d2a), (_, c2b, d2b)) in enumerate(zip(parts1, parts2)):
                    c2 = c2a + c2b - pw[j]
                    d2 = d2a + d2b - pd[j]
                    if c2 > wcap or d2 > dcap:
                        break
                    newparts.append((members, c2, d2))
                else:
                    newparts = tuple(newparts)
                    left = tuple((C1a[c - 1], D1a[c - 1], m1 == c) for c in absent)
                    right = tuple((C1b[c - 1], D1b[c - 1], m2 == c) for c in absent)
                    for sigma in self._arrangements(absent, left, right, arrangements):
                        C1 = [0] * K
                        D1 = [0] * K
                        ok = True
                        for c in range(1, K + 1):
                            src = sigma[c]
                            x = C1a[c - 1] + C1b[src - 1] - w_cls[c]
                            y = D1a[c - 1] + D1b[src - 1] - d_cls[c]
                            if x > wcap or y > dcap:
                                ok = False
                                break
                            C1[c - 1] = x
                            D1[c - 1] = y
                        if not ok:
                            continue
                        mm2 = m2
                        if 1 <= m2 <= K:
                            mm2 = sigma.index(m2)
                        if m1 == mm2 and m1 != MIXED and (m1 != ycls or has_y):
                            mono = m1
                        else:
                            mono = MIXED
                        store(out, (I, newparts, tuple(C1), tuple(D1), a, b, mono),
                              (rec1, rec2, sigma))

    def _arrangements(self, absent, left, right, cache):
        """Ways to merge the right child's absent classes into the left child's.

        ``left`` and ``right`` give per-class data for the labels in ``absent``.
        Each result ``sigma`` maps a left label to the right label merged into
        it.  Classes with equal data on the same side are interchangeable, so
        only distinct pairings of data values are produced.
        """
        K = 2 * self.inst.k
        ident = tuple(range(K + 1))
        if not self.canonical or len(absent) <= 1:
            return [ident]
        key = (tuple(absent), left, right)
        if key in cache:
            return cache[key]
        groups: dict = {}
        for c, d in zip(absent, left):
            groups.setdefault(d, []).append(c)
        group_list = list(groups.values())
        pool: dict = {}
        for c, d in zip(absent, right):
            pool.setdefault(d, []).append(c)
        kinds = list(pool)
        result = []

        def choose(i, remaining, size, picked):
            # sub-multisets of ``size`` items drawn from kinds[i:]
            if size == 0:
                yield picked
                return
            if i == len(kinds):
                return
            for take in range(min(size, remaining[i]), -1, -1):
                yield from choose(i + 1, remaining, size - take, picked + [(i, take)])

        def assign(g, remaining, acc):
            if g == len(group_list):
                sigma = list(ident)
                used = [0] * len(kinds)
                for slots, picked in acc:
                    labels = []
                    for i, take in picked:
                        labels.extend(pool[kinds[i]][used[i]:used[i] + take])
                        used[i] += take
                    for slot, lab in zip(slots, labels):
                        sigma[slot] = lab
                result.append(tuple(sigma))
                return
            slots = group_list[g]
            for picked in choose(0, remaining, len(slots), []):
                rem = list(remaining)
                for i, take in picked:
                    rem[i] -= take
                assign(g + 1, rem, acc + [(slots, picked)])

        assign(0, [len(pool[d]) for d in kinds], [])
        cache[key] = result
        return result

    def root_records(self) -> list:
        return [r for r in self.records[self.ntd.root] if r[6] == MIXED]

    def reconstruct(self, root_record) -> tuple[list[int], list[list[int]]]:
        """Class of every vertex and the isolated-leaf partition for one root record."""
        ntd, G = self.ntd, self.inst.G
        K = 2 * self.inst.k
        cls = [None] * G.n
        parent = list(range(G.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def pull(g, perm):
            # labels of the predecessor, expressed through this node's labels
            if perm is None:
                return g
            return [g[perm[c]] if 1 <= c <= K else g[c] for c in range(len(g))]

        ident = list(range(K + 2))
        stack = [(ntd.root, root_record, ident)]
        while stack:
            t, rec, g = stack.pop()
            for u, c in zip(ntd.bags[t], rec[0]):
                if cls[u] is None:
                    cls[u] = g[c]
            for members, _, _ in rec[1]:
                for u in members[1:]:
                    parent[find(u)] = find(members[0])
            back, perm = self.records[t][rec]
            kids = ntd.children[t]
            raw = pull(g, perm)
            if ntd.kind[t] == "join":
                rec1, rec2, sigma = back
                stack.append((kids[0], rec1, raw))
                inv = [0] * (K + 2)
                for c in range(len(sigma)):
                    inv[sigma[c]] = c
                inv[K + 1] = K + 1
                stack.append((kids[1], rec2, [raw[inv[c]] for c in range(K + 2)]))
            elif kids:
                stack.append((kids[0], back, raw))
        ycls = K + 1
        groups: dict[int, list[int]] = {}
        for v in range(G.n):
            if cls[v] == ycls:
                groups.setdefault(find(v), []).append(v)
        return cls, sorted(groups.values())


def solve_star_cut(inst: StarCutInstance, ntd: NiceTreeDecomposition,
                   dp_out: Optional[list] = None, canonical: bool = True) -> Optional[StarCutSolution]:
    """Solution of the instance, or None when it is a No-instance.

    ``dp_out``, if given, receives the finished :class:`StarCutDP` for inspection.
    """
    G = inst.G
    report = check_nice(G, ntd)
    if not report.ok:
        raise ValueError(f"invalid nice tree-decomposition: {report.as_dict()['violations']}")
    if G.n == 0:
        return None
    dp = StarCutDP(inst, ntd, canonical)
    dp.run()
    if dp_out is not None:
        dp_out.append(dp)
    roots = dp.root_records()
    if not roots:
        return None
    cls, parts = dp.reconstruct(roots[0])
    k = inst.k
    center = [v for v in range(G.n) if cls[v] == 0]
    leaves = [[v for v in range(G.n) if cls[v] == i] for i in range(1, 2 * k + 1)]
    leaves = [x for x in leaves if x] + parts
    sol = StarCutSolution(center, leaves or [()])
    report = check_solution(inst, sol)
    if not report.ok:
        raise AssertionError(f"reconstructed star-cut solution fails the checker: {report.as_dict()}")
    return sol
