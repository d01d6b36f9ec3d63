"""ℓ¹ filling norms, circuit decompositions and homological Dehn function samples.

Complexes are duck-typed: anything with ``cells(k)``, ``cell_boundary(key)``
(a Chain of degree k-1) and ``vertices_of(key)`` works; 1-cells additionally
need ``edge_endpoints(key) -> (tail, head)`` for circuit work. SComplex
simplices and CombComplex2 cells both qualify.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from . import lp
from .complexes import Chain, SComplex, boundary


class FillingResult(NamedTuple):
    value: Fraction | None  # None when infeasible
    witness: Chain | None
    cells: int  # cells considered
    region: frozenset | None
    method: str

    @property
    def feasible(self):
        return self.value is not None


class NotACycle(ValueError):
    pass


def _vertices_of(K):
    return getattr(K, "vertices_of", lambda key: key)


def edge_endpoints(K, key):
    if hasattr(K, "edge_endpoints"):
        return K.edge_endpoints(key)
    return key[0], key[1]


def _bdry(K, c):
    if c.k == 0:
        return None
    return boundary(c, K)


def is_cycle(K, c: Chain) -> bool:
    if c.k == 0:
        return c.augmentation() == 0
    return not _bdry(K, c)


def _cells_by_first_vertex(K, k):
    """Cells of dimension k grouped by their least vertex (cached on K)."""
    cache = K.__dict__.setdefault("_cells_by_vertex", {})
    if k not in cache:
        vo = _vertices_of(K)
        index = {}
        for s in K.cells(k):
            index.setdefault(min(vo(s), key=_key_order), []).append(s)
        cache[k] = index
    return cache[k]


def _filling_lp(K, gamma: Chain, region=None):
    """LP data: columns 2j, 2j+1 hold mu+ and mu- of cell j."""
    vo = _vertices_of(K)
    if region is not None:
        region = frozenset(region)
        index = _cells_by_first_vertex(K, gamma.k + 1)
        cells = []
        for v in sorted(region, key=_key_order):
            cells.extend(s for s in index.get(v, ()) if all(w in region for w in vo(s)))
    else:
        cells = list(K.cells(gamma.k + 1))
    row_of = {}
    cols = []
    simplicial = isinstance(K, SComplex)
    for s in cells:
        col = {}
        if simplicial:
            faces = ((s[:j] + s[j + 1:], -1 if j % 2 else 1) for j in range(len(s)))
        else:
            faces = K.cell_boundary(s).items()
        for face, coef in faces:
            r = row_of.setdefault(face, len(row_of))
            col[r] = coef
        cols.append(col)
    missing = [key for key in gamma.keys() if key not in row_of]
    A = [dict() for _ in row_of]
    for j, col in enumerate(cols):
        for r, v in col.items():
            A[r][2 * j] = v
            A[r][2 * j + 1] = -v
    b = [Fraction(0)] * len(row_of)
    for key, val in gamma.items():
        if key in row_of:
            b[row_of[key]] = val
    c = [1] * (2 * len(cells))
    return cells, A, b, c, missing, region


def filling_norm_lp(K, gamma: Chain, region=None, check_cycle=True, exact_only=False) -> FillingResult:
    """Exact min ‖μ‖ over rational chains μ with ∂μ = γ (cells inside region)."""
    if check_cycle and not is_cycle(K, gamma):
        raise NotACycle("input chain is not a cycle")
    if not gamma:
        return FillingResult(Fraction(0), Chain(gamma.k + 1), 0, frozenset(region) if region else None, "trivial")
    cells, A, b, c, missing, region = _filling_lp(K, gamma, region)
    if missing or not cells:
        return FillingResult(None, None, len(cells), region, "no-cells")
    res = lp.solve(c, A, b, exact_only=exact_only)
    if res.status != lp.OPTIMAL:
        return FillingResult(None, None, len(cells), region, res.method)
    mu = Chain(gamma.k + 1)
    for j, s in enumerate(cells):
        val = res.x[2 * j] - res.x[2 * j + 1]
        if val:
            mu._add(s, val)
    return FillingResult(res.value, mu, len(cells), region, res.method)


def filling_float(K, gamma: Chain, region=None):
    """Double-precision LP value (None when not optimal)."""
    if not gamma:
        return 0.0
    cells, A, b, c, missing, _ = _filling_lp(K, gamma, region)
    if missing or not cells:
        return None
    return lp.float_value(c, A, b)


def filling_dual_bound(K, gamma: Chain, region=None) -> Fraction | None:
    """max <f, γ> subject to |<f, ∂σ>| <= 1 for every cell σ, solved exactly.

    By LP duality this equals the filling norm; every feasible f is a lower
    bound on it."""
    cells, A, b, c, missing, _ = _filling_lp(K, gamma, region)
    if missing:
        return None
    nrow = len(b)
    ncell = len(cells)
    # f = f+ - f-  (2*nrow columns), then slacks s+_j, s-_j for each cell
    cost = [-bi for bi in b] + [bi for bi in b] + [0] * (2 * ncell)
    rows, rhs = [], []
    for j in range(ncell):
        fwd = {}
        for r, row in enumerate(A):
            v = row.get(2 * j)
            if v:
                fwd[r] = v
        plus = {r: v for r, v in fwd.items()}
        plus.update({nrow + r: -v for r, v in fwd.items()})
        minus = {r: -v for r, v in fwd.items()}
        minus.update({nrow + r: v for r, v in fwd.items()})
        plus[2 * nrow + 2 * j] = 1
        minus[2 * nrow + 2 * j + 1] = 1
        rows += [plus, minus]
        rhs += [1, 1]
    res = lp.solve_exact(cost, rows, rhs)
    if res.status != lp.OPTIMAL:
        return None
    return -res.value


class FVComparison(NamedTuple):
    exact: Fraction | None
    floating: float | None
    gap: float | None
    ok: bool


def rational_vs_float_fv(K, gamma: Chain, region=None, tol=1e-6) -> FVComparison:
    ex = filling_norm_lp(K, gamma, region)
    fl = filling_float(K, gamma, region)
    if ex.value is None or fl is None:
        return FVComparison(ex.value, fl, None, ex.value is None and fl is None)
    gap = abs(float(ex.value) - fl)
    return FVComparison(ex.value, fl, gap, gap <= tol * (1 + float(ex.value)))


# ---------------------------------------------------------------------------
# circuits


class Circuit(NamedTuple):
    chain: Chain  # coefficients ±1 following the direction of travel
    vertices: tuple  # closed vertex sequence without the repeated endpoint

    def __len__(self):
        return len(self.chain)


class CircuitDecomposition(NamedTuple):
    terms: list  # (a_c, Circuit) with a_c > 0

    def total(self) -> Chain:
        out = Chain(1)
        for a, circ in self.terms:
            out = out + a * circ.chain
        return out

    def weighted_norm(self) -> Fraction:
        return sum((a * circ.chain.norm() for a, circ in self.terms), Fraction(0))


def _key_order(key):
    return (type(key).__name__, key)


def circuit_decomposition(z: Chain, K=None) -> CircuitDecomposition:
    """Conformal decomposition of a 1-cycle into circuits.

    Each edge is oriented by the sign of its coefficient; since ∂z = 0 this is
    a circulation, and simple directed cycles are peeled off greedily with the
    smallest remaining weight along them. The circuits follow the sign pattern
    of z, so their weighted norms add up to ‖z‖."""
    if z.k != 1 and z:
        raise ValueError("circuit decomposition needs a 1-chain")
    if z and boundary(z, K):
        raise NotACycle("input chain has nonzero boundary")
    weight = {}
    out_edges = {}
    for key in sorted(z.keys(), key=_key_order):
        val = z[key]
        t, h = edge_endpoints(K, key) if K is not None else (key[0], key[1])
        if val < 0:
            t, h = h, t
        weight[key] = abs(val)
        out_edges.setdefault(t, []).append((key, h, 1 if val > 0 else -1))
    terms = []
    while weight:
        start = min(out_edges, key=_key_order)
        path, pos, steps = [start], {start: 0}, []
        x = start
        while True:
            key, y, sgn = out_edges[x][0]
            steps.append((key, sgn))
            if y in pos:
                k0 = pos[y]
                loop_steps = steps[k0:]
                loop_verts = tuple(path[k0:])
                break
            pos[y] = len(path)
            path.append(y)
            x = y
        a = min(weight[key] for key, _ in loop_steps)
        chain = Chain(1, {key: sgn for key, sgn in loop_steps})
        terms.append((a, Circuit(chain, loop_verts)))
        for key, _ in loop_steps:
            weight[key] -= a
            if not weight[key]:
                del weight[key]
                for v in list(out_edges):
                    out_edges[v] = [e for e in out_edges[v] if e[0] != key]
                    if not out_edges[v]:
                        del out_edges[v]
    return CircuitDecomposition(terms)


def one_skeleton(K):
    """vertex -> list of (edge key, other endpoint, +1 if leaving along the edge)."""
    adj = {}
    for key in K.cells(1):
        t, h = edge_endpoints(K, key)
        if t == h:
            continue
        adj.setdefault(t, []).append((key, h, 1))
        adj.setdefault(h, []).append((key, t, -1))
    for v in adj:
        adj[v].sort(key=lambda e: _key_order(e[0]))
    return adj


class BudgetExceeded(RuntimeError):
    pass


def enumerate_circuits(K, max_len, starts=None, through_edge=None, budget=None, canonical=None):
    """Simple closed edge paths of length <= max_len in the 1-skeleton of K.

    With ``starts=None`` every circuit is reported once (it is found from its
    least vertex). With explicit start vertices the circuits through them are
    reported, deduplicated by ``canonical`` (a map circuit chain -> hashable)
    when given. ``through_edge`` restricts to circuits containing that edge.
    Raises BudgetExceeded after `budget` circuits."""
    adj = one_skeleton(K)
    from .graphs import SimpGraph, bfs

    verts = sorted(adj, key=_key_order)
    vid = {v: n for n, v in enumerate(verts)}
    simple = SimpGraph(range(len(verts)), {(min(vid[a], vid[b]), max(vid[a], vid[b])) for a in adj for _, b, _ in adj[a]})
    seen = set()
    found = []
    if through_edge is not None:
        t, h = edge_endpoints(K, through_edge)
        starts = [t]
    elif starts is None:
        starts = verts
    restrict_min = starts is verts
    for s in starts:
        if s not in adj:
            continue
        dist = bfs(simple, vid[s], limit=max_len)
        on_path = {s}
        stack_edges = []

        def dfs(x, length):
            for key, y, sgn in adj[x]:
                if restrict_min and vid[y] < vid[s]:
                    continue
                if y == s:
                    if length + 1 >= 2 and all(k != key for k, _ in stack_edges):
                        _record(stack_edges + [(key, sgn)])
                    continue
                if y in on_path:
                    continue
                d = dist[vid[y]]
                if d < 0 or length + 1 + d > max_len:
                    continue
                on_path.add(y)
                stack_edges.append((key, sgn))
                dfs(y, length + 1)
                stack_edges.pop()
                on_path.discard(y)

        def _record(steps):
            if through_edge is not None and all(k != through_edge for k, _ in steps):
                return
            ident = frozenset(k for k, _ in steps)
            chain = Chain(1, {k: sgn for k, sgn in steps})
            tag = canonical(chain) if canonical is not None else ident
            if tag in seen:
                return
            seen.add(tag)
            found.append(chain)
            if budget is not None and len(found) > budget:
                raise BudgetExceeded(f"more than {budget} circuits")

        dfs(s, 0)
    return found


class DehnSample(NamedTuple):
    table: dict  # k -> max filling value over probed circuits of norm <= k
    circuits: int
    unfillable: int  # circuits with no filling inside the truncation
    partial: bool  # enumeration budget hit
    slope: Fraction | None  # least-squares line through the origin
    residual: Fraction | None  # sample minus fitted line at the largest k
    max_ratio: Fraction | None  # smallest C with samples <= C k
    argmax: dict  # k -> circuit chain attaining table[k]


def dehn_sample(K, k_max: int, budget=None, starts=None, canonical=None, region=None) -> DehnSample:
    """Lower-bound samples of the homological Dehn function from circuits.

    Every circuit of length <= k_max is filled with a floating LP; the winners
    per length are then re-solved exactly, and only exact values enter the
    table."""
    partial = False
    try:
        circuits = enumerate_circuits(K, k_max, starts=starts, budget=budget, canonical=canonical)
    except BudgetExceeded:
        partial = True
        circuits = enumerate_circuits(K, k_max, starts=starts, budget=None, canonical=canonical)[:budget]
    by_len = {}
    unfillable = 0
    for z in circuits:
        val = filling_float(K, z, region)
        if val is None:
            unfillable += 1
            continue
        n = len(z)
        if n not in by_len or val > by_len[n][0] + 1e-9:
            by_len[n] = (val, z)
    exact = {}
    for n, (val, z) in by_len.items():
        res = filling_norm_lp(K, z, region, check_cycle=False)
        if res.value is not None:
            exact[n] = (res.value, z)
    table, argmax = {}, {}
    best, best_z = Fraction(0), None
    for k in range(1, k_max + 1):
        if k in exact and exact[k][0] > best:
            best, best_z = exact[k]
        table[k] = best
        argmax[k] = best_z
    ks = [k for k in table]
    num = sum(k * table[k] for k in ks)
    den = sum(k * k for k in ks)
    slope = Fraction(num, den) if den else None
    residual = table[k_max] - slope * k_max if slope is not None else None
    max_ratio = max((table[k] / k for k in ks), default=None)
    return DehnSample(table, len(circuits), unfillable, partial, slope, residual, max_ratio, argmax)
