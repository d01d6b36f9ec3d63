"""Four-point δ on growing cusped truncations of (ℤ, {ℤ}) and (F(a,b), {⟨a⟩}).

Each scan is a word ball about the identity inside a larger cusped ball, so
all distances used are certified to be the distances of the full cusped graph.
"""
import time

from relhyp.cusped import build_cusped_ball, check_horoball_convexity
from relhyp.graphs import ball_vertices
from relhyp.groups import FreeAbelianGroup, FreeGroup, GroupPair, Subgroup
from relhyp.hyperbolicity import four_point_delta


def scan(name, pair, radii, margin):
    X = build_cusped_ball(pair, max(radii) + margin)
    e = X.vertex(pair.gamma.identity)
    for r in radii:
        t = time.time()
        rep = four_point_delta(X.graph, ball_vertices(X.graph, e, r))
        print(f"{name:6s} r={r}  |V|={rep.scanned:4d}  delta={rep.delta}  ({time.time() - t:.1f}s)")
    return X, rep.delta


def main():
    Z = FreeAbelianGroup(1)
    X, delta = scan("Z", GroupPair(Z, [Subgroup(Z, ["x"])]), (4, 5, 6), 2)
    C = -(-delta.numerator // delta.denominator) + 1
    rep = check_horoball_convexity(X, C)
    print(f"Z      C={C}: {rep.pairs_checked} pairs, {len(rep.violations)} violations")

    F2 = FreeGroup(2)
    scan("F2", GroupPair(F2, [Subgroup(F2, ["a"])]), (2, 3), 3)


if __name__ == "__main__":
    main()
