"""Exact rational chains, Rips complexes and rational homology ranks."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple

from .graphs import SimpGraph, bfs


def _sort_sign(vertices):
    """Sorted tuple and the sign of the sorting permutation (0 on repeats)."""
    v = list(vertices)
    sign = 1
    for a in range(1, len(v)):  # insertion sort counting transpositions
        b = a
        while b > 0 and v[b - 1] > v[b]:
            v[b - 1], v[b] = v[b], v[b - 1]
            sign = -sign
            b -= 1
    if any(v[k] == v[k + 1] for k in range(len(v) - 1)):
        return tuple(v), 0
    return tuple(v), sign


class Chain:
    """Sparse chain of degree k with exact rational coefficients.

    Keys are cells: sorted vertex tuples for simplicial chains (the sorted
    order is the positive orientation), or opaque cell ids for cell complexes.
    Zero coefficients are never stored."""

    __slots__ = ("k", "_c")

    def __init__(self, k: int, coeffs=None):
        self.k = k
        self._c = {}
        if coeffs:
            items = coeffs.items() if hasattr(coeffs, "items") else coeffs
            for key, val in items:
                self._add(key, Fraction(val))

    @classmethod
    def simplex(cls, vertices, coef=1):
        """The oriented simplex [v0, ..., vk]; odd orderings negate."""
        key, sign = _sort_sign(vertices)
        out = cls(len(key) - 1)
        if sign:
            out._add(key, Fraction(coef) * sign)
        return out

    @classmethod
    def from_simplices(cls, k, items):
        """Sum of coef * [vertices] over (vertices, coef) pairs."""
        out = cls(k)
        for verts, coef in items:
            key, sign = _sort_sign(verts)
            if len(key) != k + 1:
                raise ValueError(f"simplex {verts!r} is not of degree {k}")
            if sign:
                out._add(key, Fraction(coef) * sign)
        return out

    def _add(self, key, val):
        if not val:
            return
        new = self._c.get(key, 0) + val
        if new:
            self._c[key] = new
        else:
            self._c.pop(key, None)

    def copy(self):
        out = Chain(self.k)
        out._c = dict(self._c)
        return out

    def items(self):
        return self._c.items()

    def keys(self):
        return self._c.keys()

    def __getitem__(self, key):
        return self._c.get(key, Fraction(0))

    def __contains__(self, key):
        return key in self._c

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def __iter__(self):
        return iter(self._c)

    def _check(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        if other.k != self.k and self and other:
            raise ValueError(f"degree mismatch: {self.k} vs {other.k}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = self.copy()
        if not self:
            out.k = other.k
        for key, val in other._c.items():
            out._add(key, val)
        return out

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        out = Chain(self.k)
        out._c = {key: -val for key, val in self._c.items()}
        return out

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        out = Chain(self.k)
        if scalar:
            out._c = {key: val * scalar for key, val in self._c.items()}
        return out

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / Fraction(scalar))

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._c
        if not isinstance(other, Chain):
            return NotImplemented
        return self._c == other._c and (self.k == other.k or not self._c)

    def __hash__(self):
        return hash((self.k, frozenset(self._c.items())))

    def __repr__(self):
        if not self._c:
            return f"Chain({self.k}, 0)"
        terms = " + ".join(f"{v}*{k!r}" for k, v in sorted(self._c.items(), key=lambda kv: repr(kv[0])))
        return f"Chain({self.k}, {terms})"

    def norm(self) -> Fraction:
        """ℓ¹ norm."""
        return sum((abs(v) for v in self._c.values()), Fraction(0))

    def support(self):
        return set(self._c)

    def supp0(self, vertices_of=None):
        """Vertices of the cells in the support."""
        out = set()
        for key in self._c:
            out.update(vertices_of(key) if vertices_of else key)
        return out

    def restrict(self, A, vertices_of=None):
        """Keep only the cells all of whose vertices lie in A."""
        A = set(A)
        out = Chain(self.k)
        for key, val in self._c.items():
            if all(v in A for v in (vertices_of(key) if vertices_of else key)):
                out._c[key] = val
        return out

    def augmentation(self) -> Fraction:
        return sum(self._c.values(), Fraction(0))


def boundary(c: Chain, K=None) -> Chain:
    """Alternating face sum; cell complexes supply their own cell boundaries."""
    if c.k < 1:
        raise ValueError("boundary needs degree >= 1")
    if K is not None and not isinstance(K, SComplex):
        out = Chain(c.k - 1)
        for key, val in c.items():
            for face, coef in K.cell_boundary(key).items():
                out._add(face, val * coef)
        return out
    out = Chain(c.k - 1)
    for key, val in c.items():
        for j in range(len(key)):
            out._add(key[:j] + key[j + 1:], val if j % 2 == 0 else -val)
    return out


def restrict(c: Chain, A, vertices_of=None) -> Chain:
    return c.restrict(A, vertices_of)


class ChainStats(NamedTuple):
    norm: Fraction
    support: set
    supp0: set
    maxh: int | None  # None when the chain is zero
    minh: int | None


def chain_stats(c: Chain, heights=None, vertices_of=None) -> ChainStats:
    s0 = c.supp0(vertices_of)
    if heights is None or not s0:
        return ChainStats(c.norm(), c.support(), s0, None, None)
    hs = [heights[v] for v in s0]
    return ChainStats(c.norm(), c.support(), s0, max(hs), min(hs))


# ---------------------------------------------------------------------------
# simplicial complexes


class SComplex:
    """Finite simplicial complex stored by dimension up to a cap d_max.

    ``graph`` is the underlying graph (vertex ids are shared), ``heights`` an
    optional per-vertex height list."""

    def __init__(self, simplices, graph=None, heights=None, kappa=None, d_max=None):
        by_dim = [sorted(set(tuple(sorted(s)) for s in layer)) for layer in simplices]
        while by_dim and not by_dim[-1]:
            by_dim.pop()
        self._simplices = by_dim
        self._index = [None] * len(by_dim)
        self.graph = graph
        self.heights = heights
        self.kappa = kappa
        self.d_max = len(by_dim) - 1 if d_max is None else d_max

    def __repr__(self):
        counts = ", ".join(str(len(s)) for s in self._simplices)
        return f"SComplex(kappa={self.kappa}, d_max={self.d_max}, f=[{counts}])"

    @property
    def dim(self):
        return len(self._simplices) - 1

    def simplices(self, k):
        return self._simplices[k] if 0 <= k < len(self._simplices) else []

    cells = simplices

    def count(self, k):
        return len(self.simplices(k))

    def f_vector(self):
        return [len(s) for s in self._simplices]

    def index(self, k):
        if k >= len(self._simplices):
            return {}
        if self._index[k] is None:
            self._index[k] = {s: n for n, s in enumerate(self._simplices[k])}
        return self._index[k]

    def __contains__(self, simplex):
        key = tuple(sorted(simplex))
        return key in self.index(len(key) - 1)

    def vertices(self):
        return [s[0] for s in self.simplices(0)]

    @staticmethod
    def vertices_of(simplex):
        return simplex

    def cell_boundary(self, simplex) -> Chain:
        return boundary(Chain(len(simplex) - 1, {simplex: 1}))

    def is_face_closed(self) -> bool:
        for k in range(1, self.dim + 1):
            lower = self.index(k - 1)
            for s in self._simplices[k]:
                if any(s[:j] + s[j + 1:] not in lower for j in range(len(s))):
                    return False
        return True

    def full_subcomplex(self, vertices) -> "SComplex":
        A = set(vertices)
        layers = [[s for s in layer if all(v in A for v in s)] for layer in self._simplices]
        return SComplex(layers, self.graph, self.heights, self.kappa, self.d_max)


def _as_graph(G):
    """Accept a SimpGraph or anything carrying one on ``.graph`` (with heights)."""
    if isinstance(G, SimpGraph):
        return G, getattr(G, "heights", None)
    return G.graph, getattr(G, "heights", None)


def kappa_neighbors(G: SimpGraph, kappa: int, vertices=None):
    """v -> set of vertices w != v in `vertices` with d_G(v, w) <= kappa."""
    V = range(G.n) if vertices is None else sorted(set(vertices))
    keep = None if vertices is None else set(V)
    out = {}
    for v in V:
        d = bfs(G, v, limit=kappa)
        out[v] = {w for w, x in enumerate(d) if 0 < x <= kappa and (keep is None or w in keep)}
    return out


def flag_cliques(nbrs, max_size):
    """All cliques with at most max_size vertices of the graph given by a
    neighbour map, as sorted tuples grouped by size - 1."""
    layers = [[] for _ in range(max_size)]

    def extend(clique, cand):
        layers[len(clique) - 1].append(clique)
        if len(clique) == max_size:
            return
        for w in sorted(cand):
            extend(clique + (w,), {x for x in cand if x > w} & nbrs[w])

    for v in sorted(nbrs):
        extend((v,), {w for w in nbrs[v] if w > v})
    return layers


def build_rips(G, kappa: int, d_max: int = 3, vertices=None) -> SComplex:
    """Rips complex: a simplex for every vertex set of G-diameter <= kappa,
    up to dimension d_max. Accepts a SimpGraph or a CuspedGraph."""
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    graph, heights = _as_graph(G)
    nbrs = kappa_neighbors(graph, kappa, vertices)
    layers = flag_cliques(nbrs, d_max + 1)
    return SComplex(layers, graph, heights, kappa, d_max)


# ---------------------------------------------------------------------------
# exact rank


def _reduce_rank(columns, target=None):
    """Rank over Q of integer sparse columns (dicts row -> int) by fraction-free
    column reduction; stops early once `target` is reached."""
    pivots = {}
    rank = 0
    for col in columns:
        col = {r: v for r, v in col.items() if v}
        while col:
            p = max(col)
            other = pivots.get(p)
            if other is None:
                break
            a, b = col[p], other[p]
            g = gcd(a, b)
            ma, mb = b // g, a // g  # col * ma - other * mb kills row p
            new = {r: v * ma for r, v in col.items()}
            for r, v in other.items():
                x = new.get(r, 0) - v * mb
                if x:
                    new[r] = x
                else:
                    new.pop(r, None)
            if new:
                g = 0
                for v in new.values():
                    g = gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    new = {r: v // g for r, v in new.items()}
            col = new
        if col:
            pivots[max(col)] = col
            rank += 1
            if target is not None and rank >= target:
                break
    return rank


def rank_exact(columns, target=None) -> int:
    """Rank over Q of sparse columns with rational entries."""
    cols = []
    for col in columns:
        col = {r: Fraction(v) for r, v in col.items() if v}
        if not col:
            continue
        den = 1
        for v in col.values():
            den = den * v.denominator // gcd(den, v.denominator)
        cols.append({r: int(v * den) for r, v in col.items()})
    return _reduce_rank(cols, target)


def boundary_columns(K: SComplex, k: int):
    """Columns of the k-th boundary matrix, rows indexed by (k-1)-simplex ids."""
    rows = K.index(k - 1)
    for s in K.simplices(k):
        yield {rows[s[:j] + s[j + 1:]]: (1 if j % 2 == 0 else -1) for j in range(len(s))}


def boundary_rank(K: SComplex, k: int, target=None) -> int:
    if k <= 0 or k > K.dim:
        return 0
    return _reduce_rank(boundary_columns(K, k), target)


class DimensionCapExceeded(ValueError):
    pass


def homology_rank(K: SComplex, k: int, reduced=True) -> int:
    """Rank of (reduced) H_k(K; Q)."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    if k + 1 > K.d_max:
        raise DimensionCapExceeded(f"H_{k} needs simplices of dimension {k + 1} > d_max = {K.d_max}")
    n_k = K.count(k)
    if n_k == 0:
        return 0
    r_k = boundary_rank(K, k) if k > 0 else (1 if reduced else 0)
    cycles = n_k - r_k
    if cycles == 0:
        return 0
    return cycles - boundary_rank(K, k + 1, target=cycles)


# ---------------------------------------------------------------------------
# flag complexes: strong collapses


def dominated_core(nbrs):
    """Core of a flag complex under strong collapses.

    A vertex v is dominated by a neighbour w when the closed neighbourhood of v
    lies in that of w; deleting v does not change the homotopy type of the flag
    complex. Returns the neighbour map of what remains."""
    nb = {v: set(ws) for v, ws in nbrs.items()}
    changed = True
    while changed:
        changed = False
        for v in sorted(nb, key=lambda x: (len(nb[x]), x)):
            if v not in nb:
                continue
            closed = nb[v] | {v}
            for w in nb[v]:
                if len(nb[w]) >= len(nb[v]) and closed <= (nb[w] | {w}):
                    for x in nb[v]:
                        nb[x].discard(v)
                    del nb[v]
                    changed = True
                    break
    return nb


def flag_homology_ranks(nbrs, degrees=(0, 1), reduced=True, collapse=True):
    """Ranks of H_k over Q of the flag complex of a graph, k in `degrees`.

    Returns (ranks dict, number of vertices left after collapsing)."""
    if collapse:
        nbrs = dominated_core(nbrs)
    top = max(degrees) + 1
    K = SComplex(flag_cliques(nbrs, top + 1), d_max=top)
    return {k: homology_rank(K, k, reduced) for k in degrees}, len(nbrs)


def rips_ball_homology(G, kappa, center, radius, degrees=(0, 1), reduced=True, collapse=True):
    """Homology ranks of the G-ball B^G_radius(center) of the Rips complex."""
    graph, _ = _as_graph(G)
    d = bfs(graph, center, limit=radius)
    verts = [v for v, x in enumerate(d) if 0 <= x <= radius]
    return flag_homology_ranks(kappa_neighbors(graph, kappa, verts), degrees, reduced, collapse)


def rips_metric_ball(G, kappa, center, l, nbrs=None):
    """Vertices within l steps of center in the 1-skeleton of the Rips complex.

    Pass `nbrs` (from kappa_neighbors) to reuse it across many centres."""
    if nbrs is None:
        graph, _ = _as_graph(G)
        nbrs = kappa_neighbors(graph, kappa)
    seen = {center}
    frontier = [center]
    for _ in range(l):
        frontier = [w for v in frontier for w in nbrs[v] if w not in seen and not seen.add(w)]
    return seen


def g_ball(G, center, R):
    graph, _ = _as_graph(G)
    d = bfs(graph, center, limit=R)
    return {v for v, x in enumerate(d) if 0 <= x <= R}


# ---------------------------------------------------------------------------
# height profile


def min_height_dimension_profile(K: SComplex) -> dict:
    """m -> min over m-simplices of their lowest vertex height (entries only
    for dimensions that occur)."""
    if K.heights is None:
        raise ValueError("complex carries no heights")
    h = K.heights
    out = {}
    for m in range(K.dim + 1):
        layer = K.simplices(m)
        if layer:
            out[m] = min(min(h[v] for v in s) for s in layer)
    return out


class LowSimplexBounds(NamedTuple):
    lower: int  # dimension of an explicit simplex with minh <= C
    upper: int  # no simplex with minh <= C has larger dimension (in the truncation)
    witness: tuple


def low_simplex_dimension_bounds(G, kappa: int, C: int) -> LowSimplexBounds:
    """Bounds on the largest dimension of a Rips simplex with minh <= C.

    The upper bound is max |closed kappa-neighbourhood| - 1 over low vertices;
    the lower bound comes from a greedy clique grown from each low vertex."""
    graph, heights = _as_graph(G)
    low = [v for v in range(graph.n) if heights[v] <= C]
    if not low:
        return LowSimplexBounds(-1, -1, ())
    nbrs = kappa_neighbors(graph, kappa)
    upper = max(len(nbrs[v]) for v in low)
    best = ()
    for v in low:
        clique = [v]
        cand = set(nbrs[v])
        while cand:
            w = max(cand, key=lambda x: (len(cand & nbrs[x]), -x))
            clique.append(w)
            cand &= nbrs[w]
        if len(clique) > len(best):
            best = tuple(sorted(clique))
    return LowSimplexBounds(len(best) - 1, upper, best)
