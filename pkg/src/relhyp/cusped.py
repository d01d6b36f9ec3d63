"""Combinatorial horoballs and truncated cusped graphs."""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .graphs import (
    UNREACHABLE,
    SimpGraph,
    distance_matrix,
    distance_rows,
    induced_subgraph,
)
from .groups import GroupPair, check_compatible


class CuspedVertex(NamedTuple):
    """(g, i, n); base vertices use i = None since (g, i, 0) is the same for all i."""

    g: object
    i: int | None
    n: int


def build_horoball(G: SimpGraph, H_max: int) -> SimpGraph:
    """Horoball over a finite graph G, truncated at height H_max.

    Vertex (v, n) for v in G and 0 <= n <= H_max; vertical edges (v,n)-(v,n+1);
    horizontal edge (v,n)-(w,n) iff d_G(v,w) <= 2**n."""
    n = G.n
    D = distance_matrix(G, range(n))
    labels = [(G.labels[v], h) for h in range(H_max + 1) for v in range(n)]
    vid = lambda v, h: h * n + v
    edges = []
    for h in range(H_max + 1):
        span = 2 ** h
        for v in range(n):
            if h < H_max:
                edges.append((vid(v, h), vid(v, h + 1)))
            for w in range(v + 1, n):
                if D[v, w] != UNREACHABLE and D[v, w] <= span:
                    edges.append((vid(v, h), vid(w, h)))
    top = [vid(v, H_max) for v in range(n)]
    H = SimpGraph(labels, edges, boundary=top)
    H.heights = [h for h in range(H_max + 1) for _ in range(n)]
    return H


def default_hmax(R_base: int) -> int:
    return math.ceil(math.log2(2 * R_base)) + 2


def _subgroup_ball(gamma, T, radius, budget=200000):
    """Word lengths w.r.t. T ∪ T^-1 of subgroup elements up to `radius`."""
    steps = list(T) + [gamma.inverse(t) for t in T if gamma.inverse(t) not in T]
    length = {gamma.identity: 0}
    frontier = [gamma.identity]
    for r in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for s in steps:
                y = gamma.multiply(x, s)
                if y not in length:
                    length[y] = r
                    nxt.append(y)
        frontier = nxt
        if len(length) > budget:
            raise ValueError("peripheral ball exceeds budget; lower the height cap")
        if not frontier:
            break
    return length


class _Neighbors:
    """Neighbour relation of the (infinite) cusped graph of a pair."""

    def __init__(self, pair):
        self.pair = pair
        self._reach = {}

    def reach(self, i, n):
        """Non-identity u in Γ_i with |u| <= 2**n in the word metric of S ∩ Γ_i."""
        key = (i, n)
        if key not in self._reach:
            pair = self.pair
            tlen = _subgroup_ball(pair.gamma, pair.peripheral_generators(i), 2 ** n)
            self._reach[key] = [u for u, r in tlen.items() if r > 0]
        return self._reach[key]

    def __call__(self, v):
        g, i, n = v
        grp = self.pair.gamma
        if n == 0:
            for s in self.pair.S:
                yield CuspedVertex(grp.multiply(g, s), None, 0)
            for j in self.pair.I:
                yield CuspedVertex(g, j, 1)
            return
        yield CuspedVertex(g, i, n + 1)
        yield CuspedVertex(g, None, 0) if n == 1 else CuspedVertex(g, i, n - 1)
        for u in self.reach(i, n):
            yield CuspedVertex(grp.multiply(g, u), i, n)


class CuspedGraph:
    """Finite truncation of the cusped graph of a group pair.

    Attributes: graph (SimpGraph whose labels are CuspedVertex), heights,
    horoball_of (horoball key per vertex, None on the base), horoballs
    (key -> list of vertex-id lists by level, level 0 being the coset's base
    vertices), H_max, and the truncation boundary on ``graph.boundary``.
    Horoball keys are (i, rep) with rep the least element of the coset in the
    truncation under the group's ShortLex order."""

    def __init__(self, pair: GroupPair, vertices, H_max: int, R_base=None):
        report = check_compatible(pair)
        if not report.ok:
            raise ValueError(f"incompatible generating set (index {report.failing})")
        self.pair, self.H_max, self.R_base = pair, H_max, R_base
        self.delta_estimate = None
        self.C = None
        grp = pair.gamma
        nbrs = _Neighbors(pair)
        vertices = set(vertices)
        # group base vertices of each coset to name horoballs
        coset_key = {}
        for g, i, n in vertices:
            if n > 0:
                coset_key.setdefault((i, pair.peripherals[i].left_coset_key(g)), []).append(g)
        rep_of = {k: min(gs, key=grp.order_key) for k, gs in coset_key.items()}

        def hkey(v):
            return (v.i, rep_of[(v.i, pair.peripherals[v.i].left_coset_key(v.g))])

        def order(v):
            if v.n == 0:
                return (0, self._base_key(v.g))
            i, rep = hkey(v)
            return (1, i, grp.order_key(rep), v.n, grp.order_key(v.g))

        labels = sorted(vertices, key=order)
        index = {v: k for k, v in enumerate(labels)}
        edges, boundary = [], []
        for k, v in enumerate(labels):
            out = False
            for w in nbrs(v):
                j = index.get(w)
                if j is None:
                    out = True
                elif j > k:
                    edges.append((k, j))
            if out:
                boundary.append(k)
        self.graph = SimpGraph(labels, edges, boundary)
        self.heights = [v.n for v in labels]
        self.horoball_of = [None if v.n == 0 else hkey(v) for v in labels]
        self.base_ids = [k for k, v in enumerate(labels) if v.n == 0]
        self.horoballs = {}
        for k, v in enumerate(labels):
            if v.n > 0:
                self.horoballs.setdefault(hkey(v), [[] for _ in range(H_max + 1)])[v.n].append(k)
        for i, H in enumerate(pair.peripherals):
            for k in self.base_ids:
                ck = (i, H.left_coset_key(labels[k].g))
                if ck in rep_of:
                    self.horoballs[(i, rep_of[ck])][0].append(k)

    def _base_key(self, g):
        try:
            return self.pair.shortlex_key(g)
        except ValueError:
            return (10 ** 9, self.pair.gamma.order_key(g))

    def __repr__(self):
        return (
            f"CuspedGraph(R_base={self.R_base}, H_max={self.H_max}, "
            f"n={self.graph.n}, horoballs={len(self.horoballs)})"
        )

    def vertex(self, g, i=None, n=0) -> int:
        if n == 0:
            i = None
        return self.graph.index[CuspedVertex(g, i, n)]

    def horoball_key(self, g, i):
        target = self.pair.peripherals[i].left_coset_key(g)
        for key in self.horoballs:
            if key[0] == i and self.pair.peripherals[i].left_coset_key(key[1]) == target:
                return key
        raise KeyError("no horoball over this coset in the truncation")

    def horoball_vertices(self, key, n=0):
        """Vertex ids of the horoball `key` with height >= n."""
        if key not in self.horoballs:
            raise KeyError(f"unknown horoball {key!r}")
        if not 0 <= n <= self.H_max:
            raise ValueError("height outside truncation")
        return [v for lev in self.horoballs[key][n:] for v in lev]

    def in_c_horoball(self, v, C):
        """Horoball key if v lies in some C-horoball (C >= 1), else None."""
        if self.heights[v] >= C and self.horoball_of[v] is not None:
            return self.horoball_of[v]
        return None

    def with_constants(self, delta, C=None):
        self.delta_estimate = delta
        self.C = math.ceil(delta) + 1 if C is None else C
        if not self.C > delta:
            raise ValueError("C must exceed delta")
        return self


def build_cusped_graph(pair: GroupPair, R_base: int, H_max: int | None = None) -> CuspedGraph:
    """Base ball of radius R_base with one horoball, cut at height H_max, over
    each coset of each Γ_i meeting the ball."""
    if R_base < 1:
        raise ValueError("R_base must be >= 1")
    H_max = default_hmax(R_base) if H_max is None else H_max
    if H_max < 1:
        raise ValueError("H_max must be >= 1")
    elems = pair.explore(R_base)
    verts = [CuspedVertex(g, None, 0) for g in elems]
    for i in pair.I:
        verts.extend(CuspedVertex(g, i, n) for g in elems for n in range(1, H_max + 1))
    return CuspedGraph(pair, verts, H_max, R_base)


def build_cusped_ball(pair: GroupPair, radius: int, H_max: int | None = None) -> CuspedGraph:
    """Truncation to the metric ball of the given radius about the identity in
    the cusped graph itself (optionally also cut at height H_max).

    Geodesics between vertices of the r-ball stay inside the truncation once
    radius >= 2r, so scans near the centre are certified."""
    cap = radius if H_max is None else H_max
    nbrs = _Neighbors(pair)
    start = CuspedVertex(pair.gamma.identity, None, 0)
    seen = {start}
    frontier = [start]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for w in nbrs(v):
                if w.n <= cap and w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    pair.explore(max(1, radius))
    return CuspedGraph(pair, seen, cap, None)


def n_horoball(X: CuspedGraph, key, n: int) -> SimpGraph:
    return induced_subgraph(X.graph, X.horoball_vertices(key, n))


class ConvexityReport(NamedTuple):
    C: int
    pairs_checked: int
    unsafe_skipped: int
    violations: list  # (u, w, offending vertex)

    @property
    def ok(self):
        return not self.violations


def check_horoball_convexity(X: CuspedGraph, C: int, keys=None, max_violations=50) -> ConvexityReport:
    """Every geodesic between two vertices of a C-horoball stays in it.

    Pairs whose geodesics are not certified to stay inside the truncation are
    skipped and counted."""
    G = X.graph
    db = np.array(G.boundary_distances(), dtype=np.int64)
    heights = np.array(X.heights)
    checked = skipped = 0
    violations = []
    for key in keys if keys is not None else sorted(X.horoballs, key=repr):
        if C > X.H_max:
            continue
        V = X.horoball_vertices(key, C)
        inside = np.zeros(G.n, dtype=bool)
        inside[V] = True
        rows = distance_rows(G, V)
        for a in range(len(V)):
            du = rows[a]
            for b in range(a + 1, len(V)):
                w = V[b]
                d = du[w]
                if d == UNREACHABLE or not d < db[V[a]] + db[w] + 2:
                    skipped += 1
                    continue
                checked += 1
                dw = rows[b]
                on_geo = (du >= 0) & (dw >= 0) & (du + dw == d)
                bad = np.nonzero(on_geo & ~inside)[0]
                if len(bad) and len(violations) < max_violations:
                    violations.append((V[a], w, int(bad[0])))
    return ConvexityReport(C, checked, skipped, violations)


def height_profile(X_or_heights, items):
    """(minh, maxh) over a vertex collection or a Chain's vertex support."""
    heights = X_or_heights.heights if hasattr(X_or_heights, "heights") else X_or_heights
    if hasattr(items, "supp0"):
        verts = items.supp0()
    else:
        verts = set()
        for x in items:
            verts.update(x if isinstance(x, tuple) else (x,))
    if not verts:
        raise ValueError("height profile of an empty input")
    hs = [heights[v] for v in verts]
    return min(hs), max(hs)
