"""Standard resolutions of a group pair, cones, and small relative cohomology.

Basis tuples of St_k are (k+1)-tuples of points x = (g, i) of IΓ = Γ × I. St
chains reuse :class:`~relhyp.complexes.Chain` with such tuples as keys (never
sorted), so ∂ is the usual alternating face sum. A relative class in
St^rel = St / St' is stored by its canonical representative: the chain with
every St' tuple removed.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import NamedTuple

from .complexes import Chain, boundary
from .graphs import UNREACHABLE, bfs, canonical_geodesic, exact_pair, induced_subgraph
from .hyperbolicity import TruncationUnsafe


class WindowExceeded(ValueError):
    """A chain left the finite window of IΓ it is allowed to live in."""


class Window:
    """Finite subset of Γ × I inside which St chains are manipulated."""

    def __init__(self, pair, elements):
        self.pair = pair
        self.elements = frozenset(elements)
        self.points = frozenset((g, i) for g in self.elements for i in pair.I)

    def __contains__(self, x):
        return x in self.points

    def check(self, c: Chain):
        for key in c.keys():
            for x in key:
                if x not in self.points:
                    raise WindowExceeded(f"{x!r} lies outside the window")
        return c


def _check(window, *chains):
    if window is not None:
        for c in chains:
            window.check(c)


def st_boundary(c: Chain, window=None) -> Chain:
    """∂(x_0,…,x_k) = Σ_j (-1)^j (x_0,…,x̂_j,…,x_k)."""
    _check(window, c)
    return boundary(c)


def in_st_prime(pair, tup) -> bool:
    """All entries carry one index i and x_j ∈ x_0Γ_i for j >= 1."""
    i = tup[0][1]
    if any(x[1] != i for x in tup):
        return False
    g0 = tup[0][0]
    return all(pair.same_coset(g0, x[0], i) for x in tup[1:])


def st_project(pair, c: Chain, window=None) -> Chain:
    """pr: drop the St' tuples (canonical representative of the class)."""
    _check(window, c)
    out = Chain(c.k)
    for key, val in c.items():
        if not in_st_prime(pair, key):
            out._add(key, val)
    return out


def st_lift(pair, b: Chain, window=None) -> Chain:
    """j: the representative itself; rejects inputs that are not representatives."""
    _check(window, b)
    if any(in_st_prime(pair, key) for key in b.keys()):
        raise ValueError("not a canonical relative representative (contains St' tuples)")
    return b.copy()


def rel_boundary(pair, b: Chain, window=None) -> Chain:
    """∂^rel = pr ∘ ∂ ∘ j."""
    return st_project(pair, st_boundary(st_lift(pair, b, window)))


# Δ and the augmentation ------------------------------------------------------

class DeltaElement(dict):
    """Finitely supported function on Γ/Γ' (keys (i, coset key))."""

    def augmentation(self) -> Fraction:
        return sum(self.values(), Fraction(0))

    def clean(self):
        return DeltaElement({k: v for k, v in self.items() if v})


def coset_of(pair, x):
    g, i = x
    return (i, pair.peripherals[i].left_coset_key(g))


def rel_augmentation(pair, b: Chain) -> DeltaElement:
    """St_1^rel → ℝ(Γ/Γ'): pr(x, y) ↦ [y] - [x]."""
    if b.k != 1:
        raise ValueError("augmentation is defined on degree-1 classes")
    out = DeltaElement()
    for (x, y), val in b.items():
        for s, sgn in ((coset_of(pair, y), 1), (coset_of(pair, x), -1)):
            out[s] = out.get(s, Fraction(0)) + sgn * val
    return out.clean()


def is_augmentation_cycle(pair, b: Chain) -> bool:
    return not rel_augmentation(pair, b)


# Φ and cones ------------------------------------------------------------------

def phi_map(c: Chain) -> Chain:
    """Φ(c) = (1/Σα⁺) Σ_{x,y} α⁻_x α⁺_y (x, y) for a 0-chain c = Σα⁺x − Σα⁻x."""
    if c.k != 0:
        raise ValueError("Φ is defined on 0-chains")
    pos = [(key[0], v) for key, v in c.items() if v > 0]
    neg = [(key[0], -v) for key, v in c.items() if v < 0]
    total = sum((v for _, v in pos), Fraction(0))
    if not pos:
        if neg:
            raise ZeroDivisionError("Φ undefined: zero positive part with nonzero negative part")
        return Chain(1)
    out = Chain(1)
    for x, a in neg:
        for y, bb in pos:
            out._add((x, y), a * bb / total)
    return out


def absolute_cone(y, c: Chain, window=None) -> Chain:
    """[y, (γ_0,…,γ_k)] = (y, γ_0,…,γ_k), extended linearly."""
    _check(window, c)
    if window is not None and y not in window:
        raise WindowExceeded(f"cone point {y!r} lies outside the window")
    return Chain(c.k + 1, {(y,) + key: val for key, val in c.items()})


def split_by_coset(pair, c: Chain) -> dict:
    """0-chain -> {coset: restriction of c to that coset}."""
    out = {}
    for key, val in c.items():
        out.setdefault(coset_of(pair, key[0]), Chain(0))._add(key, val)
    return out


def relative_cone(pair, y, b: Chain, window=None) -> Chain:
    """[y, b]_rel = pr₂[y, j(b) − Σ_s Φ(∂^s j(b))].

    ∂^s is the restriction of ∂j(b) to the coset s. A piece with zero positive
    part (possible only when b is not an augmentation cycle) contributes 0."""
    jb = st_lift(pair, b, window)
    if jb.k != 1:
        raise ValueError("the relative cone is defined on degree-1 classes")
    inner = jb.copy()
    for piece in split_by_coset(pair, boundary(jb)).values():
        if any(v > 0 for _, v in piece.items()):
            inner = inner - phi_map(piece)
    return st_project(pair, absolute_cone(y, inner, window))


# Random windowed instances ---------------------------------------------------

def random_st_chain(rng, pair, window: Window, k: int, terms: int, coeff=5) -> Chain:
    pts = sorted(window.points, key=repr)
    out = Chain(k)
    for _ in range(terms):
        key = tuple(rng.choice(pts) for _ in range(k + 1))
        val = rng.randint(-coeff, coeff)
        if val:
            out._add(key, Fraction(val))
    return out


def random_rel_chain(rng, pair, window: Window, k: int, terms: int, coeff=5) -> Chain:
    """Random canonical relative representative of degree k."""
    return st_project(pair, random_st_chain(rng, pair, window, k, terms, coeff))


def random_augmentation_cycle(rng, pair, window: Window, terms: int, coeff=5) -> Chain:
    """Random relative degree-1 class with zero augmentation.

    A random class is corrected by pairs (x_base, y_s) running from one fixed
    coset to every other coset that carries augmentation."""
    b = random_rel_chain(rng, pair, window, 1, terms, coeff)
    aug = rel_augmentation(pair, b)
    if not aug:
        return b
    rep = {}
    for x in sorted(window.points, key=repr):
        rep.setdefault(coset_of(pair, x), x)
    cosets = sorted(aug, key=repr)
    base = rep[cosets[0]]
    fix = Chain(1)
    for s in cosets[1:]:
        fix._add((base, rep[s]), aug[s])
    return b - fix


# Bicombing and triangle defects -----------------------------------------------

def _edge_chain(path) -> Chain:
    out = Chain(1)
    for u, v in zip(path, path[1:]):
        out += Chain.simplex((u, v))
    return out


def naive_bicombing(X, a: int, b: int, check_safe=True) -> Chain:
    """q(a, b): canonical geodesic chain from min(a,b) to max(a,b), oriented a → b."""
    if a == b:
        return Chain(1)
    G = X.graph if hasattr(X, "graph") else X
    da = bfs(G, a)
    if da[b] == UNREACHABLE:
        raise ValueError("vertices are in different components")
    if check_safe:
        db = G.boundary_distances()
        if not exact_pair(G, a, b, da[b], db[a], db[b], strict=True):
            raise TruncationUnsafe(f"geodesics between {a} and {b} may leave the truncation")
    u, v = min(a, b), max(a, b)
    q = _edge_chain(canonical_geodesic(G, u, v))
    return q if (u, v) == (a, b) else -q


class DefectStats(NamedTuple):
    norm_w: Fraction
    norm_low: Fraction
    maxh_low: int | None
    norm_high: Fraction
    minh_high: int | None
    correction: Fraction  # ‖e‖, the part moved across height C


class SplitFailure(RuntimeError):
    pass


def triangle_defect(X, a: int, b: int, c: int, C: int, check_safe=True):
    """Split w = q(a,b)+q(b,c)+q(c,a) into a low cycle and a cycle of minh >= C.

    w restricted to the C-horoballs has boundary points at height C; inside
    each C-horoball they are joined to one base point along geodesics of the
    horoball, and that correction e moves to the low part, so both pieces are
    cycles."""
    G = X.graph
    w = naive_bicombing(X, a, b, check_safe) + naive_bicombing(X, b, c, check_safe) + naive_bicombing(X, c, a, check_safe)
    heights = X.heights
    high = [v for v in range(G.n) if X.in_c_horoball(v, C) is not None]
    w_high = w.restrict(high)
    e = Chain(1)
    if w_high:
        d = boundary(w_high)
        groups = {}
        for (v,), val in d.items():
            groups.setdefault(X.in_c_horoball(v, C), []).append((v, val))
        for key, pts in groups.items():
            if sum(val for _, val in pts) != 0:
                raise SplitFailure(f"boundary in horoball {key!r} has nonzero augmentation")
            H = induced_subgraph(G, X.horoball_vertices(key, C))
            pos = {v: k for k, v in enumerate(H.parent_ids)}
            p = min(v for v, _ in pts)
            dp = bfs(H, pos[p])
            for v, val in pts:
                if v == p:
                    continue
                if dp[pos[v]] == UNREACHABLE:
                    raise SplitFailure("C-horoball is disconnected in the truncation")
                path = [H.parent_ids[t] for t in canonical_geodesic(H, pos[v], pos[p], dp)]
                e = e + _edge_chain(path) * val  # ∂ = val·(p − v)
        w_high = w_high + e
    z_low = w - w_high
    if boundary(z_low) or boundary(w_high):
        raise SplitFailure("split pieces are not cycles")

    def hs(chain):
        return [heights[v] for v in chain.supp0()]

    stats = DefectStats(w.norm(), z_low.norm(), max(hs(z_low), default=None), w_high.norm(),
                        min(hs(w_high), default=None), e.norm())
    return z_low, w_high, stats


# The symmetrized map from Rips simplices to St ---------------------------------

def phi0(X, v) -> Chain:
    """φ₀(g, i, n) = (g, i) for n >= 1 and φ₀(g, 0) = (1/|I|) Σ_i (g, i)."""
    lab = X.graph.labels[v]
    if lab.n >= 1:
        return Chain(0, {((lab.g, lab.i),): Fraction(1)})
    I = X.pair.I
    return Chain(0, {((lab.g, i),): Fraction(1, len(I)) for i in I})


def _perm_sign(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def symmetrized_chain_map(X, sigma) -> Chain:
    """φ_k([x_0,…,x_k]) = (1/(k+1)!) Σ_π ε(π) (φ₀(x_π(0)),…,φ₀(x_π(k))).

    `sigma` is a vertex tuple in the given order (not re-sorted)."""
    k = len(sigma) - 1
    parts = [list(phi0(X, v).items()) for v in sigma]
    out = Chain(k)
    scale = Fraction(1, math.factorial(k + 1))
    for perm in itertools.permutations(range(k + 1)):
        sgn = _perm_sign(perm) * scale
        for combo in itertools.product(*(parts[p] for p in perm)):
            key = tuple(t[0][0] for t in combo)
            val = sgn
            for t in combo:
                val *= t[1]
            out._add(key, val)
    return out


def symmetrized_on_chain(X, c: Chain) -> Chain:
    """Linear extension of φ to a simplicial chain."""
    out = Chain(c.k)
    for key, val in c.items():
        out = out + symmetrized_chain_map(X, key) * val
    return out


# Bar resolution isomorphism for finite pairs -----------------------------------

def _require_finite(pair):
    if not pair.gamma.is_finite():
        raise ValueError("cochain computations need a finite group")
    return list(range(pair.gamma.order))


def st_basis(pair, k):
    """All tuples of (Γ × I)^{k+1}."""
    pts = [(g, i) for g in _require_finite(pair) for i in pair.I]
    return list(itertools.product(pts, repeat=k + 1))


def bar_basis(pair, k):
    """Groupoid tuples (t0, (g_0,s_0),…,(g_k,s_k)); g_j is a morphism s_j → s_{j-1}
    with s_{-1} = t0."""
    pts = [(g, i) for g in _require_finite(pair) for i in pair.I]
    return [(t0,) + rest for t0 in pair.I for rest in itertools.product(pts, repeat=k + 1)]


def in_peripheral_groupoid(pair, tup) -> bool:
    """All morphisms lie in one Γ_i ⊂ hom(i, i)."""
    t0, rest = tup[0], tup[1:]
    i = t0
    for g, s in rest:
        if s != i or not pair.peripherals[i].contains(g):
            return False
    return True


def st_coboundary(pair, h: dict, k: int) -> dict:
    """(δh)(x_0..x_{k+1}) = Σ_j (-1)^j h(x_0..x̂_j..x_{k+1})."""
    return {t: sum(((-1) ** j * h[t[:j] + t[j + 1:]] for j in range(k + 2)), Fraction(0))
            for t in st_basis(pair, k + 1)}


def bar_coboundary(pair, f: dict, k: int) -> dict:
    """(δf)(g_0..g_{k+1}) = Σ_{j<=k} (-1)^j f(…, g_j g_{j+1}, …) + (-1)^{k+1} f(g_0..g_k)."""
    mul = pair.gamma.multiply
    out = {}
    for t in bar_basis(pair, k + 1):
        t0, gs = t[0], t[1:]
        val = Fraction(0)
        for j in range(k + 1):
            (g, _), (h, s) = gs[j], gs[j + 1]
            merged = gs[:j] + ((mul(g, h), s),) + gs[j + 2:]
            val += (-1) ** j * f[(t0,) + merged]
        val += (-1) ** (k + 1) * f[(t0,) + gs[:-1]]
        out[t] = val
    return out


def bar_phi(pair, f: dict, k: int, ibar=None) -> dict:
    """φ^k(f)(g_0^{i_0},…) = f(g_0^{i_0→ī}, (g_0⁻¹g_1)^{i_1→i_0}, …)."""
    grp = pair.gamma
    ibar = pair.I[0] if ibar is None else ibar
    out = {}
    for t in st_basis(pair, k):
        args = [t[0]]
        for (g, _), (h, i) in zip(t, t[1:]):
            args.append((grp.multiply(grp.inverse(g), h), i))
        out[t] = f[(ibar,) + tuple(args)]
    return out


def bar_psi(pair, h: dict, k: int) -> dict:
    """ψ^k(h)(g_0^{i_0→t},g_1^{i_1→i_0},…) = h(g_0^{i_0}, (g_0g_1)^{i_1}, …)."""
    grp = pair.gamma
    out = {}
    for t in bar_basis(pair, k):
        acc = grp.identity
        args = []
        for g, i in t[1:]:
            acc = grp.multiply(acc, g)
            args.append((acc, i))
        out[t] = h[tuple(args)]
    return out


def bar_iso(pair, cochain: dict, k: int, direction: str, ibar=None) -> dict:
    if k > 2:
        raise ValueError("bar isomorphism checks are limited to k <= 2")
    if direction == "phi":
        return bar_phi(pair, cochain, k, ibar)
    if direction == "psi":
        return bar_psi(pair, cochain, k)
    raise ValueError("direction must be 'phi' or 'psi'")


def random_st_cochain(rng, pair, k, relative=True, coeff=9) -> dict:
    """Γ-invariant cochain on St_k (null on St'_k when relative)."""
    grp = pair.gamma
    values = {}
    out = {}
    for t in st_basis(pair, k):
        g0inv = grp.inverse(t[0][0])
        rep = tuple((grp.multiply(g0inv, g), i) for g, i in t)
        if rep not in values:
            values[rep] = Fraction(0) if relative and in_st_prime(pair, rep) else Fraction(rng.randint(-coeff, coeff))
        out[t] = values[rep]
    return out


def random_bar_cochain(rng, pair, k, relative=True, coeff=9) -> dict:
    """Equivariant groupoid cochain: depends only on s_0 and g_1,…,g_k
    (null on the peripheral groupoid's translates when relative)."""
    values = {}
    out = {}
    for t in bar_basis(pair, k):
        rep = (t[1][1],) + t[2:]
        if rep not in values:
            probe = (t[1][1], (pair.gamma.identity, t[1][1])) + t[2:]
            values[rep] = Fraction(0) if relative and in_peripheral_groupoid(pair, probe) else Fraction(rng.randint(-coeff, coeff))
        out[t] = values[rep]
    return out


def sup_norm(cochain: dict) -> Fraction:
    return max((abs(v) for v in cochain.values()), default=Fraction(0))


# Relative cohomology of finite pairs -------------------------------------------

def _orbit_reps(pair, k):
    """Non-St' tuples with x_0 = (1, i_0): one per Γ-orbit."""
    e = pair.gamma.identity
    pts = [(g, i) for g in _require_finite(pair) for i in pair.I]
    reps = []
    for i0 in pair.I:
        for rest in itertools.product(pts, repeat=k):
            t = ((e, i0),) + rest
            if not in_st_prime(pair, t):
                reps.append(t)
    return reps


def _normalize(pair, t):
    grp = pair.gamma
    g0inv = grp.inverse(t[0][0])
    return tuple((grp.multiply(g0inv, g), i) for g, i in t)


def _coboundary_columns(pair, k):
    """δ_k : C^k → C^{k+1} on invariant relative cochains, as sparse columns
    indexed by degree-(k+1) orbit representatives."""
    src = {t: n for n, t in enumerate(_orbit_reps(pair, k))}
    cols = []
    for t in _orbit_reps(pair, k + 1):
        col = {}
        for j in range(k + 2):
            face = t[:j] + t[j + 1:]
            if in_st_prime(pair, face):
                continue
            r = src[_normalize(pair, face)]
            col[r] = col.get(r, 0) + (-1) ** j
        cols.append({r: v for r, v in col.items() if v})
    return cols, len(src)


def relative_cohomology_rank(pair, k: int) -> int:
    """dim H^k of Hom_Γ(St^rel_*, ℝ) for a finite pair (degrees 0..2).

    St^rel_0 = 0, so H^0 = 0 and H^k agrees with Ext^{k-1}_Γ(Δ, ℝ)."""
    from .complexes import rank_exact

    if not 0 <= k <= 2:
        raise ValueError("degree must be in 0..2")
    _require_finite(pair)
    if k == 0:
        return 0  # no relative 0-cochains
    cols_k, dim_k = _coboundary_columns(pair, k)
    rank_out = rank_exact(cols_k)
    rank_in = rank_exact(_coboundary_columns(pair, k - 1)[0]) if k >= 1 else 0
    return dim_k - rank_out - rank_in


def bar_cohomology_rank(pair, k: int) -> int:
    """Independent oracle on the groupoid bar side, with floating-point ranks.

    Equivariant relative cochains are functions of (s_0, g_1..g_k) vanishing on
    the peripheral groupoid; δ is assembled from the bar boundary."""
    import numpy as np

    _require_finite(pair)
    if not 0 <= k <= 2:
        raise ValueError("degree must be in 0..2")

    def basis(n):
        pts = [(g, i) for g in range(pair.gamma.order) for i in pair.I]
        out = []
        for s0 in pair.I:
            for rest in itertools.product(pts, repeat=n):
                probe = (s0, (pair.gamma.identity, s0)) + rest
                if not in_peripheral_groupoid(pair, probe):
                    out.append((s0,) + rest)
        return out

    def matrix(n):
        rows = basis(n + 1)
        cols = {b: c for c, b in enumerate(basis(n))}
        A = np.zeros((len(rows), len(cols)))
        mul = pair.gamma.multiply
        for r, t in enumerate(rows):
            s0, gs = t[0], t[1:]
            # full tuple with g_0 = 1 : s_0 -> s_0
            full = ((pair.gamma.identity, s0),) + gs
            for j in range(n + 1):
                (g, _), (h, s) = full[j], full[j + 1]
                merged = full[:j] + ((mul(g, h), s),) + full[j + 2:]
                key = (merged[0][1],) + merged[1:]
                if key in cols:
                    A[r, cols[key]] += (-1) ** j
            key = (full[0][1],) + full[1:-1]
            if key in cols:
                A[r, cols[key]] += (-1) ** (n + 1)
        return A, len(cols)

    if k == 0:
        return 0 if not basis(0) else len(basis(0)) - np.linalg.matrix_rank(matrix(0)[0])
    A, dim = matrix(k)
    B, _ = matrix(k - 1)
    rk = lambda M: int(np.linalg.matrix_rank(M)) if M.size else 0
    return dim - rk(A) - rk(B)


# Check suites ------------------------------------------------------------------

def st_cochain_basis(pair, k, relative=True):
    """Indicator cochains of the Γ-orbits of St_k (orbits in St'_k skipped when relative)."""
    reps = {}
    for t in st_basis(pair, k):
        rep = _normalize(pair, t)
        if relative and in_st_prime(pair, rep):
            continue
        reps.setdefault(rep, []).append(t)
    zero = dict.fromkeys(st_basis(pair, k), Fraction(0))
    for rep in sorted(reps, key=repr):
        h = dict(zero)
        for t in reps[rep]:
            h[t] = Fraction(1)
        yield h


def bar_cochain_basis(pair, k, relative=True):
    """Indicator cochains of the equivariant classes (s_0, g_1,…,g_k) on the bar side."""
    reps = {}
    for t in bar_basis(pair, k):
        rep = (t[1][1],) + t[2:]
        if relative and in_peripheral_groupoid(pair, (t[1][1], (pair.gamma.identity, t[1][1])) + t[2:]):
            continue
        reps.setdefault(rep, []).append(t)
    zero = dict.fromkeys(bar_basis(pair, k), Fraction(0))
    for rep in sorted(reps, key=repr):
        f = dict(zero)
        for t in reps[rep]:
            f[t] = Fraction(1)
        yield f


def bar_iso_suite(pair, k_max=2) -> dict:
    """Exhaustive checks of φψ = id, ψφ = id, sup-norm and δ-commutation on cochain
    bases up to degree k_max. Returns name -> [passed, total]."""
    out = {name: [0, 0] for name in ("phi_psi", "psi_phi", "sup_norm", "delta_commutes", "vanishing")}

    def tally(name, ok):
        out[name][0] += bool(ok)
        out[name][1] += 1

    for k in range(k_max + 1):
        for f in bar_cochain_basis(pair, k):
            h = bar_phi(pair, f, k)
            tally("psi_phi", bar_psi(pair, h, k) == f)
            tally("sup_norm", sup_norm(h) == sup_norm(f))
            tally("vanishing", all(not v for t, v in h.items() if in_st_prime(pair, t)))
            if k < k_max:
                tally("delta_commutes", bar_phi(pair, bar_coboundary(pair, f, k), k + 1)
                      == st_coboundary(pair, h, k))
        for h in st_cochain_basis(pair, k):
            f = bar_psi(pair, h, k)
            tally("phi_psi", bar_phi(pair, f, k) == h)
            tally("sup_norm", sup_norm(h) == sup_norm(f))
            tally("vanishing", all(not v for t, v in f.items() if in_peripheral_groupoid(pair, t)))
    return out


def cone_suite(pair, window: Window, rng, samples: int, y=None, terms=5) -> dict:
    """Randomised identities of the absolute and relative cones on a window.

    Returns name -> [passed, total]; every comparison is exact."""
    y = min(window.points, key=repr) if y is None else y
    out = {name: [0, 0] for name in
           ("dd_zero", "cone_boundary", "rel_cone_norm", "rel_cone_boundary", "rel_cone_norm_any", "rel_remainder_cycle")}

    def tally(name, ok):
        out[name][0] += bool(ok)
        out[name][1] += 1

    for _ in range(samples):
        c = random_st_chain(rng, pair, window, 2, terms)
        tally("dd_zero", not boundary(boundary(c)))
        z = boundary(random_st_chain(rng, pair, window, 1, terms))
        tally("cone_boundary", boundary(absolute_cone(y, z, window)) == z)
        b = random_augmentation_cycle(rng, pair, window, terms)
        cb = relative_cone(pair, y, b, window)
        tally("rel_cone_norm", cb.norm() <= 3 * b.norm())
        tally("rel_cone_boundary", rel_boundary(pair, cb) == b)
        b2 = random_rel_chain(rng, pair, window, 1, terms)
        tally("rel_cone_norm_any", relative_cone(pair, y, b2, window).norm() <= 3 * b2.norm())
        beta = random_rel_chain(rng, pair, window, 2, terms)
        r = beta - relative_cone(pair, y, rel_boundary(pair, beta), window)
        tally("rel_remainder_cycle", not rel_boundary(pair, r))
    return out


def phi_suite(pair, window: Window, rng, samples: int, terms=5) -> dict:
    """Randomised checks of ‖Φ(c)‖ <= ‖c‖ and ∂Φ(c) = c on augmentation-zero 0-chains."""
    out = {"phi_norm": [0, 0], "phi_boundary": [0, 0]}
    pts = sorted(window.points, key=repr)
    done = 0
    while done < samples:
        c = random_st_chain(rng, pair, window, 0, terms)
        if c.augmentation():
            # push the augmentation onto one point so c becomes a cycle
            c = c - Chain(0, {(rng.choice(pts),): c.augmentation()})
        if not any(v > 0 for _, v in c.items()):
            continue
        f = phi_map(c)
        out["phi_norm"][0] += f.norm() <= c.norm()
        out["phi_norm"][1] += 1
        out["phi_boundary"][0] += boundary(f) == c
        out["phi_boundary"][1] += 1
        done += 1
    return out
