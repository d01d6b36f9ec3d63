"""Gromov hyperbolicity of finite graphs: exact four-point delta, thin-triangle probe."""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .graphs import (
    UNREACHABLE,
    SimpGraph,
    Unreachable,
    bfs,
    bfs_from_set,
    canonical_geodesic,
    distance_matrix,
    safe_pairs_mask,
)


class TruncationUnsafe(ValueError):
    pass


class DeltaReport(NamedTuple):
    delta: Fraction
    witness: tuple  # (w, x, y, z) vertex ids
    scanned: int
    truncation_safe: bool


def four_point_delta_matrix(D: np.ndarray):
    """Exact four-point delta of a finite metric given by an integer matrix.

    Returns (delta, (w, x, y, z)) maximizing
    min((x.y)_w, (y.z)_w) - (x.z)_w, clamped at 0."""
    D = np.asarray(D, dtype=np.int64)
    n = D.shape[0]
    best2, wit = 0, (0, 0, 0, 0) if n else ()
    if n == 0:
        return Fraction(0), ()
    chunk = max(1, min(n, 2_000_000 // max(1, n * n)))
    for w in range(n):
        # doubled Gromov products based at w
        P = D[:, w][:, None] + D[w, :][None, :] - D
        for x0 in range(0, n, chunk):
            Px = P[x0 : x0 + chunk]
            M = np.minimum(Px[:, :, None], P[None, :, :])  # [x, y, z]
            best_y = M.max(axis=1)
            gap = best_y - Px
            k = int(gap.argmax())
            val = int(gap.flat[k])
            if val > best2:
                xi, z = divmod(k, n)
                x = x0 + xi
                y = int(M[xi, :, z].argmax())
                best2, wit = val, (w, x, y, z)
    return Fraction(best2, 2), wit


def far_apart_pairs(D: np.ndarray, nbr_lists) -> np.ndarray:
    """Pairs (x, y), x < y, such that no neighbour of x is farther from y and
    no neighbour of y is farther from x. `nbr_lists[k]` holds the positions of
    the neighbours of point k inside the scanned set."""
    n = D.shape[0]
    far = np.full((n, n), -1, dtype=np.int64)
    for k, nb in enumerate(nbr_lists):
        if len(nb):
            far[k] = D[list(nb)].max(axis=0)
    ok = (far <= D) & (far.T <= D)
    xs, ys = np.nonzero(np.triu(ok, 1))
    return np.stack([xs, ys], axis=1)


def four_point_delta_pairs(D: np.ndarray, pairs=None):
    """Four-point delta by enumerating pairs of pairs.

    For every 4-set the largest of the three pair sums minus the middle one is
    twice its delta; the pairing with the largest sum is met as ((x, y), (z, w))
    with d(x, y) >= d(z, w). Pairs are visited by decreasing distance and the
    scan stops once 2 d(x, y) cannot beat the best value. Restricting `pairs` to
    far-apart pairs is exact: moving x to a neighbour farther from y raises the
    largest sum by one and the others by at most one."""
    D = np.asarray(D, dtype=np.int64)
    n = D.shape[0]
    if n < 4:
        return four_point_delta_matrix(D)
    if pairs is None:
        xs, ys = np.triu_indices(n, 1)
        pairs = np.stack([xs, ys], axis=1)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    d = D[pairs[:, 0], pairs[:, 1]]
    order = np.argsort(-d, kind="stable")
    pairs, d = pairs[order], d[order]
    zs, ws = pairs[:, 0], pairs[:, 1]
    best2, quad = 0, None
    for i in range(len(pairs)):
        if 2 * d[i] <= best2:
            break
        x, y = pairs[i]
        z, w = zs[i:], ws[i:]
        other = np.maximum(D[x, z] + D[y, w], D[x, w] + D[y, z])
        vals = d[i] + d[i:] - other
        k = int(vals.argmax())
        if vals[k] > best2:
            best2, quad = int(vals[k]), (int(x), int(y), int(z[k]), int(w[k]))
    if quad is None:
        return Fraction(0), (0, 0, 0, 0)
    return Fraction(best2, 2), _gromov_witness(D, quad, best2)


def _gromov_witness(D, quad, best2):
    """Order a 4-set as (w, x, y, z) with 2[min((x.y)_w, (y.z)_w) - (x.z)_w] = best2."""
    from itertools import permutations

    for w, x, y, z in permutations(quad):
        def g2(a, b):
            return D[a, w] + D[b, w] - D[a, b]
        if min(g2(x, y), g2(y, z)) - g2(x, z) == best2:
            return (w, x, y, z)
    return quad


def four_point_delta(G: SimpGraph, V=None, require_safe=True) -> DeltaReport:
    """Four-point delta of the vertex set V with distances taken in G."""
    V = list(range(G.n)) if V is None else sorted(set(V))
    D = distance_matrix(G, V)
    if (D == UNREACHABLE).any():
        raise Unreachable("scanned set is not connected in G")
    safe = bool(safe_pairs_mask(G, V, D).all())
    if require_safe and not safe:
        raise TruncationUnsafe("scanned set has distances not certified inside the truncation")
    pos = {v: k for k, v in enumerate(V)}
    nbrs = [[pos[u] for u in G.adj[v] if u in pos] for v in V]
    delta, wit = four_point_delta_pairs(D, far_apart_pairs(np.asarray(D, dtype=np.int64), nbrs))
    wit = tuple(V[k] for k in wit)
    return DeltaReport(delta, wit, len(V), safe)


class ProbeReport(NamedTuple):
    insize: int
    witness: tuple  # triple achieving it
    triangles: int


def thin_triangle_probe(G: SimpGraph, triples) -> ProbeReport:
    """Max distance from a side vertex to the union of the other two sides,
    over triangles built from canonical geodesics. A lower bound estimate."""
    best, wit, count = 0, (), 0
    cache = {}

    def dist_to(v):
        if v not in cache:
            cache[v] = bfs(G, v)
        return cache[v]

    for a, b, c in triples:
        sides = []
        for u, v in ((a, b), (b, c), (c, a)):
            dv = dist_to(v)
            if dv[u] == UNREACHABLE:
                raise Unreachable(f"{u} and {v} are not connected")
            sides.append(canonical_geodesic(G, u, v, dv))
        count += 1
        for k in range(3):
            others = sides[(k + 1) % 3] + sides[(k + 2) % 3]
            d = bfs_from_set(G, others)
            worst = max(d[x] for x in sides[k])
            if worst > best:
                best, wit = worst, (a, b, c)
    return ProbeReport(best, wit, count)
