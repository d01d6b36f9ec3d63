"""Constructive fillings of cycles near geodesics.

All distances are measured in the 1-skeleton of the complex (for a Rips
complex that is the κ-graph). Every sub-filling is an exact LP restricted to a
ball, so every certificate satisfies ∂a = z in rational arithmetic; the
constants (radii, norm ratios) are discovered and reported rather than fixed
in advance.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from .complexes import Chain, SComplex, boundary
from .filling import _key_order, _vertices_of, filling_float, filling_norm_lp, is_cycle
from .graphs import UNREACHABLE, SimpGraph, bfs_from_set, canonical_geodesic


class FillingInfeasible(RuntimeError):
    """No filling exists inside the allowed region of the truncation."""


class CoverFailure(RuntimeError):
    """The pieces of a decomposition do not fit the declared cover."""


class FillingCertificate(NamedTuple):
    z: Chain
    a: Chain
    ratio: Fraction  # ‖a‖ / ‖z‖ (0 for z = 0)
    radius: int  # support radius: about `center`, or about the geodesics
    maxh: int | None
    horoball: bool | None  # None when no horoball constraint applies
    center: object
    details: dict

    def check(self, K) -> bool:
        """∂a = z, exactly."""
        if self.a.k == 0:
            return not self.z
        return boundary(self.a, K) == self.z


def metric_graph(K) -> SimpGraph:
    """1-skeleton of K as a SimpGraph sharing K's vertex ids (cached)."""
    cached = K.__dict__.get("_metric_graph")
    if cached is not None:
        return cached
    if isinstance(K, SComplex):
        n = max((s[0] for s in K.simplices(0)), default=-1) + 1
        G = SimpGraph(range(n), [s for s in K.simplices(1)])
    else:
        G = K.graph()
    K.__dict__["_metric_graph"] = G
    return G


def _dist(M, sources, limit=None):
    return bfs_from_set(M, list(sources), limit)


def _within(d, r):
    return [v for v, x in enumerate(d) if x != UNREACHABLE and x <= r]


def _support(K, c: Chain):
    return c.supp0(_vertices_of(K))


def _maxh(K, c: Chain):
    heights = getattr(K, "heights", None)
    if heights is None or not c:
        return None
    return max(heights[v] for v in _support(K, c))


def _ratio(a: Chain, z: Chain) -> Fraction:
    n = z.norm()
    return a.norm() / n if n else Fraction(0)


def _radius_about(M, sources, verts):
    """max distance from a source set to a vertex set (0 if empty)."""
    if not verts:
        return 0
    d = _dist(M, sources)
    out = 0
    for v in verts:
        if d[v] == UNREACHABLE:
            raise CoverFailure(f"vertex {v} is unreachable from the reference set")
        out = max(out, d[v])
    return out


def _common_horoball(X, verts, C):
    keys = {X.in_c_horoball(v, C) for v in verts}
    if len(keys) != 1 or None in keys:
        return None
    return keys.pop()


def _horoball_context(K, z, X, C):
    """(allowed vertex set, key) when z lies in one C-horoball of X, else (None, None)."""
    if X is None or C is None or not z:
        return None, None
    key = _common_horoball(X, _support(K, z), C)
    if key is None:
        return None, None
    return frozenset(X.horoball_vertices(key, C)), key


def local_fill(K, z: Chain, center=None, mode="plain", X=None, C=None, R_max=None) -> FillingCertificate:
    """Optimal filling of z inside the smallest feasible ball B_R(center).

    mode="horoball" additionally confines the filling to the C-horoball of X
    that contains supp(z)."""
    M = metric_graph(K)
    if z.k > 0 and not is_cycle(K, z):
        raise ValueError("local_fill needs a cycle")
    if z.k == 0 and z.augmentation() != 0:
        raise ValueError("0-chain with nonzero augmentation cannot be filled")
    if not z:
        return FillingCertificate(z, Chain(z.k + 1), Fraction(0), 0, None, None, center, {"D": 0})
    supp = sorted(_support(K, z), key=_key_order)
    if center is None:
        center = min(supp, key=lambda v: (_radius_about(M, [v], supp), _key_order(v)))
    d = _dist(M, [center])
    if any(d[v] == UNREACHABLE for v in supp):
        raise FillingInfeasible("cycle not in the component of the center")
    D = max(d[v] for v in supp)
    allowed = None
    if mode == "horoball":
        if X is None or C is None:
            raise ValueError("horoball mode needs the cusped graph X and C")
        key = _common_horoball(X, supp, C)
        if key is None:
            raise ValueError("support of z is not inside one C-horoball")
        allowed = frozenset(X.horoball_vertices(key, C))
    elif mode != "plain":
        raise ValueError(f"unknown mode {mode!r}")
    top = max(x for x in d if x != UNREACHABLE)
    R_max = top if R_max is None else min(R_max, top)

    def region(R):
        ball = _within(d, R)
        return [v for v in ball if v in allowed] if allowed is not None else ball

    def feasible(R):
        return filling_float(K, z, region(R)) is not None

    if D > R_max:
        raise FillingInfeasible(f"no filling within radius {R_max} of {center}")
    # gallop outwards from D, then bisect down to the least feasible radius
    lo, step, hi = D, 1, D
    while not feasible(hi):
        if hi >= R_max:
            raise FillingInfeasible(f"no filling within radius {R_max} of {center}")
        lo = hi + 1
        hi = min(hi + step, R_max)
        step *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid + 1
    R = lo
    while True:
        res = filling_norm_lp(K, z, region(R), check_cycle=False)
        if res.feasible or R >= R_max:
            break
        R += 1  # float/exact disagreement on feasibility; move outwards
    if not res.feasible:
        raise FillingInfeasible(f"no filling within radius {R_max} of {center}")
    a = res.witness
    inside = None
    if X is not None and C is not None:
        hb = _common_horoball(X, supp, C)
        if hb is not None:
            inside = all(X.in_c_horoball(v, C) == hb for v in _support(K, a))
    return FillingCertificate(z, a, _ratio(a, z), R, _maxh(K, z), inside, center,
                              {"D": D, "R": R, "mode": mode, "value": res.value})


def _check_path(M, path):
    for u, v in zip(path, path[1:]):
        if not M.has_edge(u, v):
            raise ValueError("path is not an edge path of the 1-skeleton")
    d = _dist(M, [path[0]])
    if d[path[-1]] != len(path) - 1:
        raise ValueError("path is not a geodesic")


class SliceResult(NamedTuple):
    pieces: list  # (x_k, z_k, R_k) with supp z_k inside B_{R_k}(x_k)
    fills: list  # boundary fillings a_k of c_{k+1}
    D: int
    R: int
    ratio: Fraction  # Σ‖z_k‖ / ‖z‖

    @property
    def cycles(self):
        return [p[1] for p in self.pieces]


def slice_cycle_along_geodesic(K, z: Chain, path, S: int, D=None, X=None, C=None) -> SliceResult:
    """Cut a cycle near a geodesic into ball-supported cycles summing to z.

    Annuli about y0 = path[0] of width D give z̄_k; the cut boundaries
    c_k = ∂(z|B_{kD}(y0)) are filled near the geodesic by a_k and the pieces
    z_k = z̄_k + a_{k-1} - a_k are cycles."""
    if z.k < 1:
        raise ValueError("slicing needs a cycle of degree >= 1")
    if not z:
        return SliceResult([], [], D or 2 * S + 3, 0, Fraction(0))
    M = metric_graph(K)
    _check_path(M, path)
    D = 2 * S + 3 if D is None else D
    if D < 2 * S + 3:
        raise ValueError("slice width D must be at least 2S + 3")
    supp = _support(K, z)
    if _radius_about(M, path, supp) > S:
        raise ValueError(f"support of z is not within {S} of the geodesic")
    allowed, _ = _horoball_context(K, z, X, C)
    mode = "horoball" if allowed is not None else "plain"
    vo = _vertices_of(K)
    dy = _dist(M, [path[0]])
    top = max(dy[v] for v in supp) // D + 1

    def ball_part(k):
        return z.restrict(_within(dy, k * D), vo)

    def at(t):
        return path[min(t, len(path) - 1)]

    parts = [ball_part(k) for k in range(top + 1)]
    fills = []
    for k in range(top):
        c = boundary(parts[k + 1], K)
        fills.append(local_fill(K, c, center=at((k + 1) * D), mode=mode, X=X, C=C).a if c else Chain(z.k))
    pieces = []
    for k in range(top):
        zk = parts[k + 1] - parts[k]
        if k > 0:
            zk = zk + fills[k - 1]
        zk = zk - fills[k]
        if zk:
            x = at(k * D + D // 2)
            pieces.append((x, zk, _radius_about(M, [x], _support(K, zk))))
    total = sum((p[1].norm() for p in pieces), Fraction(0))
    R = max((p[2] for p in pieces), default=0)
    return SliceResult(pieces, fills, D, R, total / z.norm())


def thin_fill(K, z: Chain, path, S=None, X=None, C=None) -> FillingCertificate:
    """Fill a cycle lying near a geodesic: slice it, then fill each slice locally."""
    M = metric_graph(K)
    if not z:
        return FillingCertificate(z, Chain(z.k + 1), Fraction(0), 0, None, None, None, {"slices": 0})
    if S is None:
        S = _radius_about(M, path, _support(K, z))
    sl = slice_cycle_along_geodesic(K, z, path, S, X=X, C=C)
    allowed, _ = _horoball_context(K, z, X, C)
    mode = "horoball" if allowed is not None else "plain"
    a = Chain(z.k + 1)
    radii = []
    for x, zk, _ in sl.pieces:
        cert = local_fill(K, zk, center=x, mode=mode, X=X, C=C)
        a = a + cert.a
        radii.append(cert.radius)
    inside = None
    if allowed is not None:
        inside = all(v in allowed for v in _support(K, a))
    radius = _radius_about(M, path, _support(K, a))
    return FillingCertificate(z, a, _ratio(a, z), radius, _maxh(K, z), inside, None,
                              {"S": S, "D": sl.D, "slices": len(sl.pieces), "slice_ratio": sl.ratio,
                               "local_radii": radii})


class SpiderCover(NamedTuple):
    balls: list  # (center, radius)
    segments: list  # vertex lists, sub-paths of the input geodesics
    S: int
    delta: Fraction
    fallback: int  # balls added for vertices the construction left uncovered

    def uncovered(self, M, geodesics):
        """Input-geodesic vertices outside every ball and every 2δ-neighbourhood."""
        covered = set()
        for c, r in self.balls:
            covered.update(_within(_dist(M, [c]), r))
        reach = 2 * self.delta
        for seg in self.segments:
            d = _dist(M, seg)
            covered.update(v for v, x in enumerate(d) if x != UNREACHABLE and x <= reach)
        return sorted({v for g in geodesics for v in g} - covered)

    def separation(self, M):
        """Least distance between two distinct segments (None if fewer than two)."""
        best = None
        for i, seg in enumerate(self.segments[:-1]):
            d = _dist(M, seg)
            for other in self.segments[i + 1:]:
                x = min(d[v] for v in other)
                x = math.inf if x == UNREACHABLE else x
                best = x if best is None else min(best, x)
        return best


def spider_cover(K_or_M, geodesics, S: int, delta) -> SpiderCover:
    """Cover a finite family of geodesics by balls and pairwise S-far segments.

    Induction on the number of geodesics: cover the first n-1 with the larger
    separation S' = 2S + 6δ + 1, then cut the last geodesic at the first and
    last points that come S-close to each earlier segment."""
    M = K_or_M if isinstance(K_or_M, SimpGraph) else metric_graph(K_or_M)
    delta = Fraction(delta)
    if S < 10 * delta:
        raise ValueError("spider cover needs S >= 10 delta")
    geodesics = [list(g) for g in geodesics]
    if not geodesics:
        return SpiderCover([], [], S, delta, 0)
    for g in geodesics:
        _check_path(M, g)
    dl = math.ceil(delta)
    balls, segments, fallback = _spider(M, geodesics, S, delta, dl)
    return SpiderCover(balls, segments, S, delta, fallback)


def _spider(M, geodesics, S, delta, dl):
    if len(geodesics) == 1:
        return [], [geodesics[0]], 0
    balls, old, fallback = _spider(M, geodesics[:-1], 2 * S + 6 * dl + 1, delta, dl)
    alpha = geodesics[-1]
    trim = S + dl
    intervals = []
    for seg in old:
        d = _dist(M, seg)
        close = [t for t, v in enumerate(alpha) if d[v] != UNREACHABLE and d[v] <= S]
        if close:
            intervals.append((close[0], close[-1]))
    intervals.sort()
    for x, y in intervals:
        balls.append((alpha[x], trim))
        balls.append((alpha[y], trim))
    # merge overlapping intervals, then keep what lies between them
    merged = []
    for x, y in intervals:
        if merged and x <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], y)
        else:
            merged.append([x, y])
    new = []
    lo = 0  # the extremes of alpha are not trimmed
    for x, y in merged:
        if lo <= x - trim:
            new.append(alpha[lo:x - trim + 1])
        lo = y + trim
    if lo < len(alpha):
        new.append(alpha[lo:])
    segments = old + new
    # every vertex of alpha must be covered; add balls where the estimate fails
    missing = SpiderCover(balls, segments, S, delta, 0).uncovered(M, [alpha])
    while missing:
        v = missing[0]
        balls.append((v, trim))
        fallback += 1
        near = set(_within(_dist(M, [v]), trim))
        missing = [w for w in missing if w not in near]
    return balls, segments, fallback


def _check_near(M, K, z, paths, L):
    verts = {v for p in paths for v in p}
    if _radius_about(M, verts, _support(K, z)) > L:
        raise ValueError(f"support of z is not within {L} of the geodesics")


def _disjoint_balls(M, centers, r):
    """Drop centers and triple the common radius until the balls are disjoint."""
    centers = list(dict.fromkeys(centers))
    while True:
        clash = None
        for i, c in enumerate(centers):
            d = _dist(M, [c], 2 * r)
            for j in range(i + 1, len(centers)):
                if d[centers[j]] != UNREACHABLE:
                    clash = j
                    break
            if clash is not None:
                break
        if clash is None:
            return centers, r
        del centers[clash]
        r *= 3


def fill_graphlike_cycle(K, z: Chain, geodesics, L: int, delta, X=None, C=None) -> FillingCertificate:
    """Fill a cycle of degree >= 2 lying near a finite union of geodesics.

    The union is covered by disjoint balls and S-far segments (S = 2L + δ + 1,
    raised to 10δ if needed); z splits into tube pieces along the segments and
    ball pieces. Since k >= 2 the boundary of each tube piece splits into
    cycles, one per ball; these are filled locally and moved across, after
    which tube pieces are filled thinly and ball pieces locally."""
    if z.k < 2:
        raise ValueError("graph-like filling needs degree >= 2")
    M = metric_graph(K)
    geodesics = [list(g) for g in geodesics]
    if not z:
        return FillingCertificate(z, Chain(z.k + 1), Fraction(0), 0, None, None, None, {})
    if not is_cycle(K, z):
        raise ValueError("input chain is not a cycle")
    _check_near(M, K, z, geodesics, L)
    delta = Fraction(delta)
    dl = math.ceil(delta)
    S = max(2 * L + dl + 1, math.ceil(10 * delta))
    cover = spider_cover(M, geodesics, S, delta)
    centers, R1 = [], 0
    if cover.balls:
        centers, R1 = _disjoint_balls(M, [c for c, _ in cover.balls],
                                      max(r for _, r in cover.balls) + L + 1)
    vo = _vertices_of(K)
    tubes = [set(_within(_dist(M, seg), 2 * dl + L)) for seg in cover.segments]
    balls = [set(_within(_dist(M, [c]), R1)) for c in centers]

    def home(verts, regions):
        return next((j for j, reg in enumerate(regions) if all(v in reg for v in verts)), None)

    z_tube = [Chain(z.k) for _ in tubes]
    z_ball = [Chain(z.k) for _ in balls]
    for key, val in z.items():
        verts = vo(key)
        j = home(verts, tubes)
        if j is not None:
            z_tube[j]._add(key, val)
            continue
        i = home(verts, balls)
        if i is None:
            raise CoverFailure(f"cell {key!r} lies in no tube and no ball")
        z_ball[i]._add(key, val)
    a = Chain(z.k + 1)
    moved = Chain(z.k + 1)
    local_radii = []
    for j, zt in enumerate(z_tube):
        if not zt:
            continue
        parts = [Chain(z.k - 1) for _ in balls]
        for key, val in boundary(zt, K).items():
            i = home(vo(key), balls)
            if i is None:
                raise CoverFailure("boundary of a tube piece leaves the balls")
            parts[i]._add(key, val)
        for i, b in enumerate(parts):
            if b:
                aji = local_fill(K, b, center=centers[i], X=X, C=C).a
                z_tube[j] = z_tube[j] - aji
                z_ball[i] = z_ball[i] + aji
                moved = moved + aji
    for i, zb in enumerate(z_ball):
        if zb:
            cert = local_fill(K, zb, center=centers[i], X=X, C=C)
            a = a + cert.a
            local_radii.append(cert.radius)
    thin_ratios = []
    for j, zt in enumerate(z_tube):
        if zt:
            cert = thin_fill(K, zt, cover.segments[j], X=X, C=C)
            a = a + cert.a
            thin_ratios.append(cert.ratio)
    if boundary(a, K) != z:
        raise CoverFailure("assembled chain does not fill z")
    Lp = _radius_about(M, {v for g in geodesics for v in g}, _support(K, a))
    return FillingCertificate(z, a, _ratio(a, z), Lp, _maxh(K, z), _stayed(K, z, a, X, C), None,
                              {"S": S, "R'": R1, "balls": [(c, R1) for c in centers],
                               "segments": len(cover.segments), "fallback_balls": cover.fallback,
                               "local_radii": local_radii, "thin_ratios": thin_ratios,
                               "transfer_norm": moved.norm()})


def _stayed(K, z, a, X, C):
    allowed, _ = _horoball_context(K, z, X, C)
    if allowed is None:
        return None
    return all(v in allowed for v in _support(K, a))


def fill_triangle_cycle(K, z: Chain, triangle, L: int, delta, X=None, C=None) -> FillingCertificate:
    """Fill a 1-cycle lying near a geodesic triangle.

    A centre x on [v1, v2] close to the other two sides is chosen; the parts of
    z near the prongs from distance R = 10(δ + L) out to the corners are cut
    off, closed up by local fillings, and filled thinly along the prongs; what
    remains lives near x and is filled locally."""
    if z.k != 1:
        raise ValueError("triangle filling needs a 1-cycle")
    M = metric_graph(K)
    v1, v2, v3 = triangle
    if v1 == v2 == v3:
        cert = local_fill(K, z, center=v1, X=X, C=C)
        return cert._replace(details={**cert.details, "degenerate": True})
    s12 = canonical_geodesic(M, v1, v2)
    s23 = canonical_geodesic(M, v2, v3)
    s13 = canonical_geodesic(M, v1, v3)
    sides = [s12, s23, s13]
    if not z:
        return FillingCertificate(z, Chain(2), Fraction(0), 0, None, None, None, {})
    if not is_cycle(K, z):
        raise ValueError("input chain is not a cycle")
    _check_near(M, K, z, sides, L)
    delta = Fraction(delta)
    dl = math.ceil(delta)
    d13, d23 = _dist(M, s13), _dist(M, s23)
    t = min(range(len(s12)), key=lambda t: (max(d13[s12[t]], d23[s12[t]]), t))
    x = s12[t]
    R = math.ceil(10 * (delta + L))
    prongs = [s12[t::-1], s12[t:], canonical_geodesic(M, x, v3)]
    vo = _vertices_of(K)
    a = Chain(2)
    rest = z
    cut = []
    for p in prongs:
        if len(p) - 1 < R:
            continue
        gamma = p[R:]  # from v_i' = [x, v_i](R) out to the corner
        zbar = z.restrict(_within(_dist(M, gamma), L + dl), vo)
        if not zbar:
            continue
        b = boundary(zbar, K)
        close = local_fill(K, b, center=gamma[0], X=X, C=C).a if b else Chain(1)
        zi = zbar - close
        thin = thin_fill(K, zi, gamma, X=X, C=C)
        a = a + thin.a
        rest = rest - zi
        cut.append({"prong_length": len(gamma) - 1, "thin_ratio": thin.ratio})
    core = local_fill(K, rest, center=x, X=X, C=C)
    a = a + core.a
    if boundary(a, K) != z:
        raise CoverFailure("assembled chain does not fill z")
    Lp = _radius_about(M, {v for s in sides for v in s}, _support(K, a))
    return FillingCertificate(z, a, _ratio(a, z), Lp, _maxh(K, z), _stayed(K, z, a, X, C), x,
                              {"R": R, "center_offset": max(d13[x], d23[x]), "prongs": cut,
                               "core_radius": core.radius})
