import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cycle_graph, grid_graph, path_graph, regular_tree
from relhyp.graphs import (Unreachable, all_geodesics_dag, ball, ball_vertices, bfs_distance,
                           canonical_geodesic, labeled_cayley_graph, neighborhood, neighborhood_vertices,
                           simplicial_cayley_ball, SimpGraph)
from relhyp.groups import FreeAbelianGroup, FreeGroup, GroupPair, Subgroup, symmetric_group


def test_bfs_distance_examples(tree4):
    P = path_graph(5)
    assert bfs_distance(P, 2, 2) == 0
    assert bfs_distance(P, 0, 4) == 4
    leaf_a = tree4.vertex((0, 1, 0))
    leaf_b = tree4.vertex((1, 0, 1))
    assert bfs_distance(tree4, leaf_a, leaf_b) == 6


def test_unreachable_is_distinct():
    G = SimpGraph(range(3), [(0, 1)])
    assert bfs_distance(G, 0, 2) is None
    with pytest.raises(Unreachable):
        canonical_geodesic(G, 0, 2)


def test_simplicial_graph_rejects_loops():
    with pytest.raises(ValueError):
        SimpGraph(range(2), [(1, 1)])


def test_ball_examples():
    C6 = cycle_graph(6)
    B0 = ball(C6, 0, 0)
    assert (B0.n, B0.num_edges()) == (1, 0)
    B1 = ball(C6, 0, 1)
    assert (B1.n, B1.num_edges()) == (3, 2)
    Z2 = FreeAbelianGroup(2)
    G = simplicial_cayley_ball(GroupPair(Z2, [Subgroup(Z2, [])]), 4)
    assert ball(G, G.vertex(Z2.identity), 2).n == 13


def test_neighborhood_examples():
    C6 = cycle_graph(6)
    assert sorted(neighborhood_vertices(C6, [0, 2, 4], 0)) == [0, 2, 4]
    assert neighborhood(C6, [0, 1], 1).n == 4
    assert sorted(neighborhood_vertices(C6, [3], 1)) == sorted(ball_vertices(C6, 3, 1))
    with pytest.raises(ValueError):
        neighborhood_vertices(C6, [], 1)


def test_canonical_geodesic_examples(tree4):
    C6 = cycle_graph(6)
    assert canonical_geodesic(C6, 2, 2) == [2]
    assert canonical_geodesic(C6, 0, 3) == [0, 1, 2, 3]  # lexicographically smaller arc
    u, v = tree4.vertex((0, 1, 0)), tree4.vertex((1, 0, 1))
    path = canonical_geodesic(tree4, u, v)
    assert len(path) == 7 and path[3] == tree4.vertex(())


def test_geodesic_dag_examples(tree4):
    assert all_geodesics_dag(cycle_graph(4), 0, 2).count() == 2
    G, idx = grid_graph(3, 3)
    dag = all_geodesics_dag(G, idx[(0, 0)], idx[(2, 2)])
    assert dag.count() == 6
    assert all(len(p) == 5 for p in dag.paths())
    assert all_geodesics_dag(tree4, 0, tree4.vertex((2, 1, 3))).count() == 1


def test_simplicial_cayley_examples():
    F2 = FreeGroup(2)
    G = simplicial_cayley_ball(GroupPair(F2, [Subgroup(F2, ["a"])]), 1)
    assert (G.n, G.num_edges()) == (5, 4)
    Z = FreeAbelianGroup(1)
    P = simplicial_cayley_ball(GroupPair(Z, [Subgroup(Z, [])]), 3)
    assert (P.n, P.num_edges()) == (7, 6)
    Z2 = FreeAbelianGroup(2)
    Q = simplicial_cayley_ball(GroupPair(Z2, [Subgroup(Z2, [])]), 2)
    assert (Q.n, Q.num_edges()) == (13, 16)


def test_labeled_cayley_examples():
    Z = FreeAbelianGroup(1)
    L = labeled_cayley_graph(Z, ["x"], 2)
    assert (L.num_vertices(), L.num_edges()) == (5, 4)
    L2 = labeled_cayley_graph(Z, ["x", "x^-1"], 1)
    pairs = [frozenset((x, y)) for x, _, y in L2.edges]
    assert pairs.count(frozenset((Z.identity, Z.normal_form("x")))) == 2
    S3 = symmetric_group(3)
    L3 = labeled_cayley_graph(S3, ["(12)", "(123)"], 6)
    assert (L3.num_vertices(), L3.num_edges()) == (6, 12)


def _random_graph(seed, n=14, p=0.25):
    rng = random.Random(seed)
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return SimpGraph(range(n), edges)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_metric_properties(seed):
    G = _random_graph(seed)
    D = [[bfs_distance(G, u, v) for v in range(G.n)] for u in range(G.n)]
    for u, v, w in itertools.product(range(G.n), repeat=3):
        if D[u][v] is not None and D[v][w] is not None:
            assert D[u][w] <= D[u][v] + D[v][w]
    for u, v in itertools.combinations(range(G.n), 2):
        if D[u][v] is None:
            continue
        path = canonical_geodesic(G, u, v)
        assert len(path) - 1 == D[u][v]
        assert all(G.has_edge(a, b) for a, b in zip(path, path[1:]))
        dag = all_geodesics_dag(G, u, v)
        paths = list(dag.paths())
        assert path in paths
        assert all(len(p) - 1 == D[u][v] for p in paths)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 4))
def test_ball_monotone_and_neighborhood_union(seed, r):
    G = _random_graph(seed)
    rng = random.Random(seed)
    v0 = rng.randrange(G.n)
    assert set(ball_vertices(G, v0, r)) <= set(ball_vertices(G, v0, r + 1))
    A = rng.sample(range(G.n), 3)
    union = set().union(*(ball_vertices(G, a, r) for a in A))
    assert set(neighborhood_vertices(G, A, r)) == union


def test_cayley_ball_translation_invariance():
    F2 = FreeGroup(2)
    pair = GroupPair(F2, [Subgroup(F2, ["a"])])
    G = simplicial_cayley_ball(pair, 3)
    for t in pair.explore(1):
        for u, v in G.edges():
            tu, tv = F2.multiply(t, G.labels[u]), F2.multiply(t, G.labels[v])
            if tu in G.index and tv in G.index:
                assert G.has_edge(G.vertex(tu), G.vertex(tv))
