import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import cycle_graph, grid_graph, regular_tree
from relhyp.cusped import build_cusped_graph
from relhyp.graphs import ball_vertices, distance_matrix, simplicial_cayley_ball
from relhyp.groups import FreeAbelianGroup, GroupPair, Subgroup
from relhyp.hyperbolicity import (TruncationUnsafe, four_point_delta, four_point_delta_matrix,
                                  four_point_delta_pairs, thin_triangle_probe)


def brute_delta(D):
    n = len(D)
    best = Fraction(0)
    for w in range(n):
        g = lambda x, y: Fraction(int(D[x][w]) + int(D[y][w]) - int(D[x][y]), 2)
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    best = max(best, min(g(x, y), g(y, z)) - g(x, z))
    return best


def test_tree_delta_zero(tree4):
    assert four_point_delta(tree4).delta == 0


def test_c4_delta_one():
    rep = four_point_delta(cycle_graph(4))
    assert rep.delta == 1 and rep.truncation_safe


def test_grid_delta_monotone():
    Z2 = FreeAbelianGroup(2)
    G = simplicial_cayley_ball(GroupPair(Z2, [Subgroup(Z2, [])]), 9)
    e = G.vertex(Z2.identity)
    deltas = [four_point_delta(G, ball_vertices(G, e, r)).delta for r in (2, 3, 4)]
    assert deltas == sorted(deltas) and deltas[-1] > deltas[0]


def test_unsafe_scan_rejected():
    Z2 = FreeAbelianGroup(2)
    G = simplicial_cayley_ball(GroupPair(Z2, [Subgroup(Z2, [])]), 3)
    with pytest.raises(TruncationUnsafe):
        four_point_delta(G)
    assert not four_point_delta(G, require_safe=False).truncation_safe


@pytest.mark.parametrize("seed", range(8))
def test_matrix_delta_matches_brute_force(seed):
    rng = random.Random(seed)
    G, _ = grid_graph(3, 3)
    if seed % 2:
        G = cycle_graph(rng.randint(4, 9))
    D = distance_matrix(G, range(G.n))
    delta, wit = four_point_delta_matrix(D)
    assert delta == brute_delta(D)
    assert delta.denominator in (1, 2)


def test_subset_monotone():
    G = cycle_graph(10)
    full = four_point_delta(G).delta
    assert four_point_delta(G, [0, 2, 5, 7]).delta <= full


def test_delta_invariant_under_translation():
    Z2 = FreeAbelianGroup(2)
    pair = GroupPair(Z2, [Subgroup(Z2, [])])
    G = simplicial_cayley_ball(pair, 7)
    base = ball_vertices(G, G.vertex(Z2.identity), 2)
    ref = four_point_delta(G, base).delta
    for t in ("x", "y^-1", "x y"):
        tt = Z2.normal_form(t)
        moved = [G.vertex(Z2.multiply(tt, G.labels[v])) for v in base]
        assert four_point_delta(G, moved).delta == ref


def test_thin_triangle_examples(tree4):
    assert thin_triangle_probe(tree4, [(5, 17, 40), (1, 2, 3)]).insize == 0
    assert thin_triangle_probe(cycle_graph(6), [(0, 2, 4)]).insize == 1


def test_thin_triangle_on_cusped_z():
    Z = FreeAbelianGroup(1)
    X = build_cusped_graph(GroupPair(Z, [Subgroup(Z, ["x"])]), 8, 5)
    rng = random.Random(0)
    base = [v for v in range(X.graph.n) if X.heights[v] <= 2]
    rep = thin_triangle_probe(X.graph, [tuple(rng.sample(base, 3)) for _ in range(50)])
    assert rep.triangles == 50 and rep.insize >= 0


@pytest.mark.parametrize("seed", range(12))
def test_far_apart_pruning_is_exact(seed):
    rng = random.Random(100 + seed)
    G, _ = grid_graph(rng.randint(2, 5), rng.randint(2, 5))
    if seed % 3 == 0:
        G = cycle_graph(rng.randint(4, 11))
    V = sorted(rng.sample(range(G.n), rng.randint(4, G.n)))
    D = distance_matrix(G, V)
    rep = four_point_delta(G, V, require_safe=False)
    assert rep.delta == brute_delta(D)
    w, x, y, z = (V.index(v) for v in rep.witness)
    g = lambda p, q: int(D[p][w]) + int(D[q][w]) - int(D[p][q])
    assert min(g(x, y), g(y, z)) - g(x, z) == 2 * rep.delta


def test_pair_enumeration_matches_matrix():
    G, _ = grid_graph(4, 4)
    D = distance_matrix(G, range(G.n))
    assert four_point_delta_pairs(D)[0] == four_point_delta_matrix(D)[0] == 3  # corners: (12 - 6) / 2
