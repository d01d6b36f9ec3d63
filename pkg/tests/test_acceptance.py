"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``. Every test checks its
runtime budget as well as its identities; frozen reference values come from
independent oracles noted next to them.
"""
import math
import random
import time
from fractions import Fraction
from functools import lru_cache

from relhyp.complexes import (Chain, boundary, build_rips, g_ball, kappa_neighbors, low_simplex_dimension_bounds,
                              rips_ball_homology, rips_metric_ball)
from relhyp.cusped import build_cusped_ball, build_cusped_graph, check_horoball_convexity
from relhyp.filling import circuit_decomposition, dehn_sample, filling_float, filling_norm_lp, rational_vs_float_fv
from relhyp.geomfill import (fill_graphlike_cycle, fill_triangle_cycle, metric_graph,
                             slice_cycle_along_geodesic, spider_cover, thin_fill)
from relhyp.graphs import ball_vertices, canonical_geodesic
from relhyp.groups import FreeAbelianGroup, FreeGroup, GroupPair, Subgroup, cyclic_group, symmetric_group
from relhyp.hyperbolicity import four_point_delta
from relhyp.paircomplex import build_quotient_complex, build_relative_cayley_complex, parse_relative_presentation
from relhyp.resolutions import Window, bar_iso_suite, cone_suite, phi_suite

from conftest import grid_graph, regular_tree
from instances import HALF, hairy_tripod, loop, shell, strip, tri_grid, zigzag_triangle

Z = FreeAbelianGroup(1)
Z2 = FreeAbelianGroup(2)
F2 = FreeGroup(2)
PZ = GroupPair(Z, [Subgroup(Z, ["x"])])
PF = GroupPair(F2, [Subgroup(F2, ["a"])])

# δ of the cusped truncations below, as established by criterion 3's scans
DELTA = {"Z": Fraction(3, 2), "F2": Fraction(3, 2)}


def ceil(q):
    return math.ceil(Fraction(q))


@lru_cache(maxsize=None)
def cusped(name, radius):
    return build_cusped_ball(PZ if name == "Z" else PF, radius)


def verdict(capsys, n, budget, t0, checks, note=""):
    elapsed = time.perf_counter() - t0
    failed = [name for name, ok in checks.items() if not ok]
    if elapsed >= budget:
        failed.append(f"runtime {elapsed:.0f}s over {budget}s")
    line = f"criterion {n:2d}: {'FAIL' if failed else 'PASS'} ({elapsed:.1f}s) {note}".rstrip()
    if failed:
        line += " | failed: " + "; ".join(failed)
    with capsys.disabled():
        print("\n" + line)
    assert not failed, line


# 1. resolutions


def test_criterion_01_resolution_identities(capsys):
    t0 = time.perf_counter()
    pair = GroupPair(F2, [Subgroup(F2, ["a"]), Subgroup(F2, ["b"])])
    window = Window(pair, pair.explore(2))
    rng = random.Random(2024)
    cones = cone_suite(pair, window, rng, 1000)
    phis = phi_suite(pair, window, rng, 1000)
    checks = {f"{k} {p}/{t}": p == t and t >= 1000 for k, (p, t) in {**cones, **phis}.items()}
    verdict(capsys, 1, 120, t0, checks, f"{len(checks)} identities x 1000 samples on F(a,b), {{<a>, <b>}}")


# 2. bar isomorphism


def test_criterion_02_bar_isometry(capsys):
    t0 = time.perf_counter()
    S3, C2 = symmetric_group(3), cyclic_group(2)
    suites = {
        "S3": bar_iso_suite(GroupPair(S3, [Subgroup(S3, ["(12)"])]), 2),
        "C2": bar_iso_suite(GroupPair(C2, [Subgroup(C2, [])]), 2),
    }
    checks = {f"{g} {k} {p}/{t}": p == t and t > 0 for g, s in suites.items() for k, (p, t) in s.items()}
    total = sum(t for s in suites.values() for _, t in s.values())
    verdict(capsys, 2, 60, t0, checks, f"{total} basis checks")


# 3. hyperbolicity


# nested F2 scans (element, radius); each union is truncation-safe in the radius-8 cusped ball
F2_SCAN = (("", 4), ("b^2", 3), ("b", 4))


def increments_stabilize(deltas):
    inc = [b - a for a, b in zip(deltas, deltas[1:])]
    return all(0 <= x < HALF for x in inc) and all(b <= a for a, b in zip(inc, inc[1:]))


def test_criterion_03_hyperbolicity(capsys):
    t0 = time.perf_counter()
    checks = {f"tree r={r} delta 0": four_point_delta(regular_tree(4, r)).delta == 0 for r in range(1, 5)}

    X = cusped("Z", 8)
    e = X.vertex(Z.identity)
    dz = [four_point_delta(X.graph, ball_vertices(X.graph, e, r)).delta for r in (4, 5, 6)]

    X = cusped("F2", 8)
    scans, S = [], set()
    for w, r in F2_SCAN:
        S |= set(ball_vertices(X.graph, X.vertex(F2.normal_form(w)), r))
        scans.append(set(S))
    df = [four_point_delta(X.graph, V).delta for V in scans]

    checks["Z stabilizes"] = increments_stabilize(dz) and dz[-1] == DELTA["Z"]
    checks["F2 stabilizes"] = increments_stabilize(df) and df[-1] == DELTA["F2"]
    note = f"Z {[str(d) for d in dz]}, F2 {[str(d) for d in df]} on scans of {[len(V) for V in scans]} points"
    verdict(capsys, 3, 300, t0, checks, note)


# 4. horoball convexity


def test_criterion_04_horoball_convexity(capsys):
    t0 = time.perf_counter()
    checks, notes = {}, []
    for name in ("Z", "F2"):
        C = ceil(DELTA[name]) + 1
        rep = check_horoball_convexity(cusped(name, 8), C, max_violations=10)
        checks[f"{name} no violations"] = rep.ok
        checks[f"{name} pairs checked"] = rep.pairs_checked > 0
        notes.append(f"{name} C={C}: {rep.pairs_checked} pairs, {len(rep.violations)} violations")
    verdict(capsys, 4, 300, t0, checks, "; ".join(notes))


# 5. Rips balls


def safe_radii(G, v, r_max):
    """Radii R whose G-ball about v is certified by its distance to the truncation boundary."""
    db = G.boundary_distances()[v]
    return [R for R in range(1, r_max + 1) if db >= 2 * R - 1]


def test_criterion_05_rips_balls(capsys):
    t0 = time.perf_counter()
    checks, notes = {}, []
    instances = {"tree": (regular_tree(4, 5), 0), "Z": (cusped("Z", 8).graph, DELTA["Z"])}
    for name, (G, delta) in instances.items():
        kappa = 4 * ceil(delta) + 6
        balls = cyclic = 0
        for v in range(G.n):
            for R in safe_radii(G, v, kappa):
                ranks, _ = rips_ball_homology(G, kappa, v, R)
                balls += 1
                cyclic += any(ranks.values())
        nbrs = kappa_neighbors(G, kappa)
        equal = sum(g_ball(G, v, l * kappa) == rips_metric_ball(G, kappa, v, l, nbrs=nbrs)
                    for v in range(G.n) for l in (1, 2))
        checks[f"{name} acyclic balls"] = balls > 0 and cyclic == 0
        checks[f"{name} ball identity"] = equal == 2 * G.n
        notes.append(f"{name} kappa={kappa}: {balls} balls, {cyclic} with homology, ball identity {equal}/{2 * G.n}")
    verdict(capsys, 5, 600, t0, checks, "; ".join(notes))


# 6. filling LP


def z2_complex(radius):
    pres = parse_relative_presentation("⟨x,y; - | [x,y]⟩", Z2)
    return build_relative_cayley_complex(pres, GroupPair(Z2, [Subgroup(Z2, [])]), radius)


def square_loop(K, k):
    g0 = Z2.normal_form(f"x^-{k // 2} y^-{k // 2}")
    word = [(0, 1)] * k + [(1, 1)] * k + [(0, -1)] * k + [(1, -1)] * k
    return K.path_chain((g0, 0), word)


def winding_lower_bound(K, z):
    """Σ over unit squares of |winding number of z| (rays to the left)."""
    winding = {}
    for key, val in z.items():
        (x, y), letter = K.label(key)[1], K.label(key)[2]
        if letter == 1:
            for a in range(-50, x):
                winding[(a, y)] = winding.get((a, y), 0) + val
    return sum(abs(v) for v in winding.values())


def random_2chain(rng, tris, terms):
    return sum((Chain.simplex(rng.choice(tris), Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
                for _ in range(terms)), Chain(2))


def test_criterion_06_filling_lp(capsys):
    t0 = time.perf_counter()
    G, _ = grid_graph(6, 6, diagonals=True)
    K = build_rips(G, 1, d_max=2)
    tris = K.simplices(2)
    rng = random.Random(6)
    bounded = gap_ok = 0
    worst_gap = 0.0
    for _ in range(500):
        mu = random_2chain(rng, tris, rng.randint(1, 6))
        z = boundary(mu)
        res = filling_norm_lp(K, z)
        bounded += res.value <= mu.norm() and boundary(res.witness) == z
        gap = abs(filling_float(K, z) - float(res.value))
        worst_gap = max(worst_gap, gap)
        gap_ok += gap < 1e-6
    KZ = z2_complex(6)
    squares = {}
    for k in range(1, 5):
        z = square_loop(KZ, k)
        cmp = rational_vs_float_fv(KZ, z)
        squares[k] = (filling_norm_lp(KZ, z).value, winding_lower_bound(KZ, z), cmp.ok and cmp.gap < 1e-6)
    checks = {
        f"fill <= |mu| {bounded}/500": bounded == 500,
        f"float gap {gap_ok}/500": gap_ok == 500,
    }
    for k, (value, wind, ok) in squares.items():
        checks[f"square {k}: {value} vs {k * k}, winding {wind}"] = value == wind == k * k and ok
    verdict(capsys, 6, 300, t0, checks, f"worst float gap {worst_gap:.2e}; squares {[str(s[0]) for s in squares.values()]}")


# 7. circuit decomposition


def random_cycle(rng, M, walks):
    """Sum of closed walks (random walk, then a geodesic home) with rational weights."""
    z = Chain(1)
    for _ in range(walks):
        v0 = v = rng.randrange(M.n)
        path = [v]
        for _ in range(rng.randint(2, 8)):
            v = rng.choice(M.adj[v])
            path.append(v)
        path += canonical_geodesic(M, v, v0)[1:]
        z += loop(path) * Fraction(rng.randint(1, 4), rng.randint(1, 3)) * rng.choice((1, -1))
    return z


def test_criterion_07_circuits(capsys):
    t0 = time.perf_counter()
    G, _ = grid_graph(8, 8)
    X = build_cusped_graph(PZ, 12, 5)
    complexes = {"grid": build_rips(G, 1, d_max=2), "cusped": build_rips(X, 2, d_max=2)}
    rng = random.Random(7)
    checks = {}
    for name, K in complexes.items():
        M = metric_graph(K)
        ok = done = 0
        while done < 250:
            z = random_cycle(rng, M, rng.randint(1, 3))
            if not z:
                continue
            dec = circuit_decomposition(z, K)
            ok += dec.total() == z and dec.weighted_norm() == z.norm() and all(a > 0 for a, _ in dec.terms)
            done += 1
        checks[f"{name} {ok}/250"] = ok == 250
    verdict(capsys, 7, 120, t0, checks, "500 cycles")


# 8. geometric filling pipelines


def within(M, verts, targets, R):
    return all(min(len(canonical_geodesic(M, v, w)) - 1 for w in targets) <= R for v in verts)


def varies_under(ratios, tol=Fraction(1, 10)):
    return (max(ratios) - min(ratios)) < tol * max(ratios)


def tripod_case(n):
    T, ends = hairy_tripod(n)
    K = build_rips(T, 2, d_max=3)
    return T, ends, K, metric_graph(K)


def test_criterion_08_geometric_pipelines(capsys):
    t0 = time.perf_counter()
    checks, certs = {}, 0

    # slicing along the middle row of a thin strip
    G, idx = tri_grid(24, 5)
    K = build_rips(G, 1, d_max=3)
    M = metric_graph(K)
    path = [idx[(x, 2)] for x in range(24)]
    slice_ok = 0
    slices = ((1, 3, 2, 3, 1), (1, 22, 2, 3, 1), (0, 23, 1, 3, 1), (4, 18, 1, 2, 1),
              (2, 12, 1, 4, 2), (0, 23, 0, 4, 2))
    for x0, x1, y0, y1, S in slices:
        z = boundary(strip(idx, x0, y0, x1, y1))
        res = slice_cycle_along_geodesic(K, z, path, S)
        slice_ok += (sum((p[1] for p in res.pieces), Chain(1)) == z
                     and all(not boundary(zk) and R <= res.R and within(M, zk.supp0(), [x], R)
                             for x, zk, R in res.pieces))
    checks[f"slices {slice_ok}/{len(slices)}"] = slice_ok == len(slices)

    # spider covers, checked vertex by vertex
    cases = []
    G1, idx1 = tri_grid(20, 6)
    cases.append((G1, [canonical_geodesic(G1, idx1[(0, 3)], idx1[(19, 3)]), [idx1[(10, y)] for y in range(6)]]))
    G2, idx2 = tri_grid(30, 14)
    cases.append((G2, [[idx2[(x, 0)] for x in range(30)], [idx2[(x, 13)] for x in range(30)]]))
    cases.append((G2, [canonical_geodesic(G2, idx2[(0, 0)], idx2[(29, 13)]),
                       canonical_geodesic(G2, idx2[(0, 13)], idx2[(29, 0)])]))
    for n in (12, 20):
        T, ends = hairy_tripod(n)
        cases.append((T, [canonical_geodesic(T, ends[0], ends[1]), canonical_geodesic(T, ends[1], ends[2]),
                          canonical_geodesic(T, ends[2], ends[0])]))
    spider_ok = 0
    for Gs, geos in cases:
        cov = spider_cover(Gs, geos, 10, 1)
        sep = cov.separation(Gs)
        spider_ok += cov.uncovered(Gs, geos) == [] and (sep is None or sep > 10)
    checks[f"spider covers {spider_ok}/{len(cases)}"] = spider_ok == len(cases)

    # certificates: thin strips, graph-like shells, triangles
    cert_ok = 0
    for x0, L, y0 in ((0, 6, 1), (3, 12, 2), (1, 20, 0), (5, 15, 3)):
        cert = thin_fill(K, boundary(strip(idx, x0, y0, x0 + L, y0 + 1)), [idx[(x, y0)] for x in range(24)])
        cert_ok += cert.check(K)
        certs += 1
    for n in (6, 8, 10, 12):
        T, ends, KT, MT = tripod_case(n)
        geos = [canonical_geodesic(MT, ends[0], ends[1]), canonical_geodesic(MT, 0, ends[2])]
        cert = fill_graphlike_cycle(KT, shell(T), geos, 1, HALF)
        cert_ok += cert.check(KT) and within(MT, cert.a.supp0(), [w for g in geos for w in g], cert.radius)
        sides = [canonical_geodesic(MT, a, b) for a, b in ((ends[0], ends[1]), (ends[1], ends[2]), (ends[0], ends[2]))]
        cert = fill_triangle_cycle(KT, zigzag_triangle(T, MT, ends), tuple(ends), 1, HALF)
        cert_ok += cert.check(KT) and within(MT, cert.a.supp0(), [w for s in sides for w in s], cert.radius)
        certs += 2
    X = build_cusped_graph(PZ, 12, 5)
    KX = build_rips(X, 2, d_max=2)
    MX = metric_graph(KX)
    for a, b, (c, h) in ((-10, 10, (0, 4)), (-8, 8, (0, 3)), (-6, 10, (2, 4)), (-10, 4, (-3, 3)),
                         (-4, 4, (0, 2)), (0, 10, (5, 3)), (-10, 0, (-5, 4)), (-7, 9, (1, 5))):
        v1, v2, v3 = X.vertex((a,)), X.vertex((b,)), X.vertex((c,), 0, h)
        sides = [canonical_geodesic(MX, p, q) for p, q in ((v1, v2), (v2, v3), (v1, v3))]
        z = loop(sides[0]) + loop(sides[1]) - loop(sides[2])
        cert = fill_triangle_cycle(KX, z, (v1, v2, v3), 0, DELTA["Z"], X=X, C=3)
        cert_ok += cert.check(KX) and within(MX, cert.a.supp0(), [w for s in sides for w in s], cert.radius)
        certs += 1
    checks[f"certificates {cert_ok}/{certs}"] = cert_ok == certs and certs >= 20

    # norm ratios as |z| doubles
    families = {"triangle": [], "graphlike": [], "strip": []}
    for n in (10, 20, 40):
        T, ends, KT, MT = tripod_case(n)
        families["triangle"].append(fill_triangle_cycle(KT, zigzag_triangle(T, MT, ends), tuple(ends), 1, HALF).ratio)
        geos = [canonical_geodesic(MT, ends[0], ends[1]), canonical_geodesic(MT, 0, ends[2])]
        families["graphlike"].append(fill_graphlike_cycle(KT, shell(T), geos, 1, HALF).ratio)
    Gs, idxs = tri_grid(40, 4)
    Ks = build_rips(Gs, 1, d_max=3)
    for L in (8, 16, 32):
        z = boundary(strip(idxs, 1, 1, 1 + L, 2))
        families["strip"].append(thin_fill(Ks, z, [idxs[(x, 1)] for x in range(40)]).ratio)
    for name, ratios in families.items():
        checks[f"{name} ratios {[f'{float(r):.3f}' for r in ratios]}"] = varies_under(ratios)
    note = f"{certs} certificates; ratios " + ", ".join(
        f"{k} {'/'.join(f'{float(r):.3f}' for r in v)}" for k, v in families.items())
    verdict(capsys, 8, 900, t0, checks, note)


# 9. Dehn growth contrast


def test_criterion_09_dehn_contrast(capsys):
    t0 = time.perf_counter()
    K = z2_complex(9)
    d = dehn_sample(K, 16, starts=K.identity_vertices(), canonical=K.canonical_circuit)
    # ℤ²: a circuit of length 4m encloses at most m² squares (isoperimetric oracle)
    quadratic = all(d.table[4 * m] == m * m for m in range(1, 5))
    pres = parse_relative_presentation("⟨b; ⟨a⟩ | ⟩", F2)
    KF = build_quotient_complex(build_relative_cayley_complex(pres, PF, 4))
    df = dehn_sample(KF, 16)
    checks = {
        f"Z2 residual {d.residual}": d.residual is not None and d.residual > 0,
        "Z2 samples m^2 at k = 4m": quadratic,
        "Z2 not truncated by budget": not d.partial,
        "F2 quotient identically 0": set(df.table.values()) == {0} and len(df.table) == 16,
    }
    note = f"Z2 FV(16) >= {d.table[16]}, slope {d.slope}; F2 quotient zeros through k=16"
    verdict(capsys, 9, 600, t0, checks, note)


# 10. height profile


D_MAX_CAP = 3  # the default Rips dimension cap


def test_criterion_10_height_profile(capsys):
    t0 = time.perf_counter()
    C = ceil(DELTA["Z"]) + 1
    found = {}
    for R_base, H_max in ((8, 5), (12, 6)):
        X = build_cusped_graph(PZ, R_base, H_max)
        b = low_simplex_dimension_bounds(X, 10, C)
        # every simplex of dimension >= n has min height > C once n exceeds the largest low simplex
        found[(R_base, H_max)] = (b.lower + 1, b.upper + 1)
    ns = [hi for _, hi in found.values()]
    checks = {
        "n exact on both truncations": all(lo == hi for lo, hi in found.values()),
        f"n <= d_max cap {D_MAX_CAP}": max(ns) <= D_MAX_CAP,
        "n stable across truncations": len(set(ns)) == 1,
    }
    note = f"C={C}; (lower, upper) n by truncation {found}"
    verdict(capsys, 10, 300, t0, checks, note)
