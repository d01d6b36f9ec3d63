"""Simplicial graphs with BFS metrics, canonical geodesics and Cayley graphs."""
from __future__ import annotations

from collections import deque
from typing import NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

UNREACHABLE = -1


class Unreachable(ValueError):
    pass


class SimpGraph:
    """Finite simplicial graph on vertex ids 0..n-1 with opaque labels.

    ``boundary`` lists the vertices that have neighbours outside the graph when
    it is a truncation of a larger graph; it is empty for complete graphs.
    """

    def __init__(self, labels, edges, boundary=()):
        self.labels = list(labels)
        self.index = {lab: k for k, lab in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise ValueError("vertex labels must be distinct")
        n = len(self.labels)
        adj = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.adj = [sorted(a) for a in adj]
        self.boundary = frozenset(boundary)
        self._csr = None
        self._dboundary = None

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"SimpGraph(n={len(self)}, m={self.num_edges()})"

    @property
    def n(self):
        return len(self.labels)

    def vertex(self, label) -> int:
        return self.index[label]

    def neighbors(self, v):
        return self.adj[v]

    def has_edge(self, u, v) -> bool:
        a, b = (u, v) if len(self.adj[u]) <= len(self.adj[v]) else (v, u)
        return b in self.adj[a]

    def edges(self):
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def num_edges(self):
        return sum(len(a) for a in self.adj) // 2

    def csr(self):
        if self._csr is None:
            rows, cols = [], []
            for u, nbrs in enumerate(self.adj):
                rows.extend([u] * len(nbrs))
                cols.extend(nbrs)
            data = np.ones(len(rows), dtype=np.int8)
            self._csr = csr_matrix((data, (rows, cols)), shape=(self.n, self.n))
        return self._csr

    def boundary_distances(self):
        """Distance from every vertex to the truncation boundary (large if none)."""
        if self._dboundary is None:
            if self.boundary:
                d = bfs_from_set(self, self.boundary)
                big = 10 ** 9
                self._dboundary = [big if x == UNREACHABLE else x for x in d]
            else:
                self._dboundary = [10 ** 9] * self.n
        return self._dboundary


def bfs(G: SimpGraph, source: int, limit=None):
    """Distances from source as a list, UNREACHABLE (-1) where not reached."""
    return bfs_from_set(G, [source], limit)


def bfs_from_set(G: SimpGraph, sources, limit=None):
    dist = [UNREACHABLE] * G.n
    queue = deque()
    for s in sources:
        if dist[s] == UNREACHABLE:
            dist[s] = 0
            queue.append(s)
    adj = G.adj
    while queue:
        x = queue.popleft()
        dx = dist[x]
        if limit is not None and dx >= limit:
            continue
        for y in adj[x]:
            if dist[y] == UNREACHABLE:
                dist[y] = dx + 1
                queue.append(y)
    return dist


def distance_rows(G: SimpGraph, sources) -> np.ndarray:
    """Integer matrix of distances from each source to every vertex (-1 if unreachable)."""
    sources = list(sources)
    if not sources:
        return np.zeros((0, G.n), dtype=np.int64)
    D = shortest_path(G.csr(), unweighted=True, directed=False, indices=sources)
    out = np.full(D.shape, UNREACHABLE, dtype=np.int64)
    finite = np.isfinite(D)
    out[finite] = D[finite].astype(np.int64)
    return out


def distance_matrix(G: SimpGraph, vertices) -> np.ndarray:
    vertices = list(vertices)
    return distance_rows(G, vertices)[:, vertices]


def bfs_distance(G: SimpGraph, u: int, v: int):
    """Shortest-path length, or None when v is not reachable from u."""
    d = bfs(G, u)[v]
    return None if d == UNREACHABLE else d


def ball_vertices(G: SimpGraph, v0: int, R: int):
    d = bfs(G, v0, limit=R)
    return [v for v, x in enumerate(d) if x != UNREACHABLE and x <= R]


def neighborhood_vertices(G: SimpGraph, A, r: int):
    A = list(A)
    if not A:
        raise ValueError("neighborhood of an empty set")
    d = bfs_from_set(G, A, limit=r)
    return [v for v, x in enumerate(d) if x != UNREACHABLE and x <= r]


def induced_subgraph(G: SimpGraph, vertices) -> SimpGraph:
    """Full subgraph; labels are kept and ``parent_ids`` maps back to G."""
    vertices = sorted(set(vertices))
    pos = {v: k for k, v in enumerate(vertices)}
    edges = [(pos[u], pos[v]) for u in vertices for v in G.adj[u] if v in pos and u < v]
    boundary = [pos[v] for v in vertices if v in G.boundary or any(w not in pos for w in G.adj[v])]
    H = SimpGraph([G.labels[v] for v in vertices], edges, boundary)
    H.parent_ids = vertices
    return H


def ball(G: SimpGraph, v0: int, R: int) -> SimpGraph:
    if R < 0:
        raise ValueError("radius must be non-negative")
    return induced_subgraph(G, ball_vertices(G, v0, R))


def neighborhood(G: SimpGraph, A, r: int) -> SimpGraph:
    return induced_subgraph(G, neighborhood_vertices(G, A, r))


def canonical_geodesic(G: SimpGraph, u: int, v: int, dist_to_v=None):
    """ShortLex-least geodesic from u to v under the vertex-id order."""
    dv = dist_to_v if dist_to_v is not None else bfs(G, v)
    if dv[u] == UNREACHABLE:
        raise Unreachable(f"{v} not reachable from {u}")
    path = [u]
    x = u
    while x != v:
        want = dv[x] - 1
        x = next(y for y in G.adj[x] if dv[y] == want)
        path.append(x)
    return path


class GeodesicDAG(NamedTuple):
    source: int
    target: int
    length: int
    successors: dict

    def vertices(self):
        return set(self.successors) | {self.target}

    def count(self) -> int:
        """Number of geodesics (maximal source-to-target paths)."""
        memo = {}

        def paths(x):
            if x == self.target:
                return 1
            if x not in memo:
                memo[x] = sum(paths(y) for y in self.successors[x])
            return memo[x]

        return paths(self.source)

    def paths(self):
        def walk(x):
            if x == self.target:
                yield [x]
                return
            for y in self.successors[x]:
                for rest in walk(y):
                    yield [x] + rest

        yield from walk(self.source)


def all_geodesics_dag(G: SimpGraph, u: int, v: int) -> GeodesicDAG:
    du = bfs(G, u)
    dv = bfs(G, v)
    if du[v] == UNREACHABLE:
        raise Unreachable(f"{v} not reachable from {u}")
    length = du[v]
    succ = {}
    for x in range(G.n):
        if du[x] != UNREACHABLE and dv[x] != UNREACHABLE and du[x] + dv[x] == length and x != v:
            succ[x] = [y for y in G.adj[x] if du[y] == du[x] + 1 and dv[y] == dv[x] - 1]
    return GeodesicDAG(u, v, length, succ)


# ---------------------------------------------------------------------------
# truncation safety


def exact_pair(G: SimpGraph, du: int, dv: int, d: int, dbu: int, dbv: int, strict=False) -> bool:
    """Certificate that the truncated distance d between u and v is the true one.

    A path leaving the truncation costs at least dbu + dbv + 2 where dbu, dbv
    are the distances to the boundary; with strict=True every geodesic is
    certified to stay inside."""
    bound = dbu + dbv + 2
    return d < bound if strict else d <= bound


def safe_pairs_mask(G: SimpGraph, vertices, D=None, strict=False) -> np.ndarray:
    vertices = list(vertices)
    if D is None:
        D = distance_matrix(G, vertices)
    db = np.array(G.boundary_distances(), dtype=np.int64)[vertices]
    bound = db[:, None] + db[None, :] + 2
    ok = (D < bound) if strict else (D <= bound)
    return ok & (D != UNREACHABLE)


def truncation_safe(G: SimpGraph, vertices, strict=False) -> bool:
    return bool(safe_pairs_mask(G, vertices, strict=strict).all())


# ---------------------------------------------------------------------------
# Cayley graphs


def simplicial_cayley_ball(pair, R: int) -> SimpGraph:
    """Induced subgraph of the simplicial Cayley graph on the R-ball about 1.

    g and h are adjacent iff g^-1 h lies in S, so left translations act by
    graph automorphisms."""
    grp = pair.gamma
    elems = pair.explore(R)
    index = {g: k for k, g in enumerate(elems)}
    edges, boundary = set(), []
    for g in elems:
        out = False
        for s in pair.S:
            h = grp.multiply(g, s)
            k = index.get(h)
            if k is None:
                out = True
            elif k != index[g]:
                edges.add((min(index[g], k), max(index[g], k)))
        if out:
            boundary.append(index[g])
    G = SimpGraph(elems, sorted(edges), boundary)
    G.group = grp
    return G


class LabeledGraph(NamedTuple):
    """Labelled Cayley graph: edge (x, k) joins x to x*S[k]."""

    vertices: list
    gens: list
    edges: list  # (x, k, y)

    def num_vertices(self):
        return len(self.vertices)

    def num_edges(self):
        return len(self.edges)


def labeled_cayley_graph(gamma, S, R: int) -> LabeledGraph:
    S = [gamma.normal_form(s) if isinstance(s, str) else s for s in S]
    steps = list(S) + [gamma.inverse(s) for s in S]
    dist = {gamma.identity: 0}
    frontier = [gamma.identity]
    for r in range(1, R + 1):
        nxt = []
        for x in frontier:
            for s in steps:
                y = gamma.multiply(x, s)
                if y not in dist:
                    dist[y] = r
                    nxt.append(y)
        frontier = nxt
    verts = sorted(dist, key=lambda g: (dist[g], gamma.order_key(g)))
    edges = []
    for x in verts:
        for k, s in enumerate(S):
            y = gamma.multiply(x, s)
            if y in dist:
                edges.append((x, k, y))
    return LabeledGraph(verts, S, edges)
