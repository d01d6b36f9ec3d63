import pytest

from relhyp.graphs import SimpGraph


def regular_tree(degree, radius):
    labels, edges, frontier = [()], [], [()]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for a in range(degree):
                if v and a == v[-1]:
                    continue
                w = v + (a,)
                labels.append(w)
                edges.append((labels.index(v), len(labels) - 1))
                nxt.append(w)
        frontier = nxt
    return SimpGraph(labels, edges)


def cycle_graph(n):
    return SimpGraph(range(n), [(k, (k + 1) % n) for k in range(n)])


def path_graph(n):
    return SimpGraph(range(n), [(k, k + 1) for k in range(n - 1)])


def grid_graph(w, h, diagonals=False):
    labels = [(x, y) for y in range(h) for x in range(w)]
    idx = {p: k for k, p in enumerate(labels)}
    steps = ((1, 0), (0, 1), (1, 1)) if diagonals else ((1, 0), (0, 1))
    edges = [(k, idx[(x + dx, y + dy)]) for (x, y), k in idx.items() for dx, dy in steps
             if (x + dx, y + dy) in idx]
    return SimpGraph(labels, edges), idx


@pytest.fixture
def tree4():
    return regular_tree(4, 3)
