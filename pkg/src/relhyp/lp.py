"""Linear programs in equality form: min c.x subject to A x = b, x >= 0.

`solve_exact` is a two-phase tableau simplex over the rationals with Bland's
rule. `solve` first asks HiGHS (via scipy) for a floating optimum, rounds the
primal and dual vectors to nearby rationals and accepts them only if they pass
an exact optimality certificate (primal feasibility, dual feasibility, equal
objectives); otherwise it falls back to the exact simplex.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


class LPResult(NamedTuple):
    status: str
    value: Fraction | None
    x: list | None  # primal solution (Fractions)
    y: list | None  # equality duals: c - A^T y >= 0 at optimum
    method: str


class LPError(RuntimeError):
    pass


def _frac_rows(A):
    return [{j: Fraction(v) for j, v in row.items() if v} for row in A]


def solve_exact(c, A, b, max_pivots=200000) -> LPResult:
    """Two-phase simplex with Bland's rule in exact rational arithmetic.

    A is a list of sparse rows (dict column -> value); c has one entry per
    column. Returns primal x and an optimal dual y."""
    n = len(c)
    m = len(A)
    c = [Fraction(v) for v in c]
    rows = _frac_rows(A)
    rhs = [Fraction(v) for v in b]
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = {j: -v for j, v in rows[i].items()}
            rhs[i] = -rhs[i]
    # artificial column n + i for row i
    for i in range(m):
        rows[i][n + i] = Fraction(1)
    basis = [n + i for i in range(m)]
    alive = list(range(m))  # original row index per tableau row
    pivots = 0

    def pivot(r, j):
        nonlocal pivots
        pivots += 1
        if pivots > max_pivots:
            raise LPError("pivot budget exceeded")
        prow = rows[r]
        a = prow[j]
        if a != 1:
            inv = 1 / a
            prow = {k: v * inv for k, v in prow.items()}
            rows[r] = prow
            rhs[r] *= inv
        for i in range(len(rows)):
            if i == r:
                continue
            f = rows[i].get(j)
            if f:
                row = rows[i]
                for k, v in prow.items():
                    x = row.get(k, 0) - f * v
                    if x:
                        row[k] = x
                    else:
                        row.pop(k, None)
                rhs[i] -= f * rhs[r]
        basis[r] = j

    def reduced_costs(cost):
        red = dict(cost)
        for i, j in enumerate(basis):
            cj = cost.get(j, 0)
            if cj:
                for k, v in rows[i].items():
                    red[k] = red.get(k, 0) - cj * v
        return red

    def run(cost, allowed):
        while True:
            red = reduced_costs(cost)
            entering = None
            for k in sorted(red):
                if k in allowed and red[k] < 0 and k not in basis:
                    entering = k
                    break
            if entering is None:
                return True
            best, leave = None, None
            for i in range(len(rows)):
                a = rows[i].get(entering)
                if a is not None and a > 0:
                    ratio = rhs[i] / a
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return False
            pivot(leave, entering)

    everything = set(range(n + m))
    run({n + i: Fraction(1) for i in range(m)}, everything)
    if any(rhs[i] != 0 for i in range(len(rows)) if basis[i] >= n):
        return LPResult(INFEASIBLE, None, None, None, "exact")
    # drive artificials out of the basis, dropping redundant rows
    r = 0
    while r < len(rows):
        if basis[r] >= n:
            j = next((k for k in sorted(rows[r]) if k < n), None)
            if j is None:
                del rows[r], rhs[r], basis[r], alive[r]
                continue
            pivot(r, j)
        r += 1
    for row in rows:
        for k in [k for k in row if k >= n]:
            del row[k]
    cost = {j: v for j, v in enumerate(c) if v}
    if not run(cost, set(range(n))):
        return LPResult(UNBOUNDED, None, None, None, "exact")
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = rhs[i]
    value = sum((c[j] * x[j] for j in range(n)), Fraction(0))
    y = _exact_duals(c, A, basis, alive, m)
    return LPResult(OPTIMAL, value, x, y, "exact")


def _exact_duals(c, A, basis, alive, m):
    """Solve y_B^T B = c_B on the surviving rows (dropped rows get dual 0)."""
    k = len(basis)
    # rows of B^T: one equation per basic column over unknowns y_alive
    M = [[Fraction(A[alive[t]].get(j, 0)) for t in range(k)] + [Fraction(c[j])] for j in basis]
    sol = _solve_square(M, k)
    y = [Fraction(0)] * m
    for t in range(k):
        y[alive[t]] = sol[t]
    return y


def _solve_square(M, k):
    for col in range(k):
        piv = next(r for r in range(col, k) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for r in range(k):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * bb for a, bb in zip(M[r], M[col])]
    return [M[r][k] for r in range(k)]


def solve_float(c, A, b, n=None):
    """HiGHS on the same data; returns the scipy result object."""
    n = len(c) if n is None else n
    data, ri, ci = [], [], []
    for i, row in enumerate(A):
        for j, v in row.items():
            ri.append(i)
            ci.append(j)
            data.append(float(v))
    Aeq = csr_matrix((data, (ri, ci)), shape=(len(A), n))
    return linprog(
        np.array([float(v) for v in c]),
        A_eq=Aeq if len(A) else None,
        b_eq=np.array([float(v) for v in b]) if len(A) else None,
        bounds=(0, None),
        method="highs",
    )


def certify(c, A, b, x, y) -> bool:
    """Exact optimality certificate for rational x, y."""
    if any(v < 0 for v in x):
        return False
    for row, bi in zip(A, b):
        if sum((v * x[j] for j, v in row.items() if x[j]), Fraction(0)) != bi:
            return False
    red = [Fraction(v) for v in c]
    for i, row in enumerate(A):
        yi = y[i]
        if yi:
            for j, v in row.items():
                red[j] -= yi * v
    if any(v < 0 for v in red):
        return False
    primal = sum((cj * xj for cj, xj in zip(c, x) if xj), Fraction(0))
    dual = sum((bi * yi for bi, yi in zip(b, y) if yi), Fraction(0))
    return primal == dual


def _rationalize(values, max_den):
    return [Fraction(float(v)).limit_denominator(max_den) for v in values]


def solve(c, A, b, exact_only=False, max_den=10 ** 6) -> LPResult:
    """Exact optimum, certified. Uses the floating solution as a warm guess."""
    b = [Fraction(v) for v in b]
    if not exact_only and len(c):
        res = solve_float(c, A, b)
        if res.status == 0:
            x = _rationalize(res.x, max_den)
            y = _rationalize(res.eqlin.marginals, max_den) if len(A) else []
            if certify(c, A, b, x, y):
                value = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
                return LPResult(OPTIMAL, value, x, y, "certified")
    if not len(c):
        if any(b):
            return LPResult(INFEASIBLE, None, None, None, "exact")
        return LPResult(OPTIMAL, Fraction(0), [], [Fraction(0)] * len(b), "exact")
    return solve_exact(c, A, b)


def float_value(c, A, b):
    """Floating optimum or None when HiGHS reports anything but optimal."""
    res = solve_float(c, A, b)
    return float(res.fun) if res.status == 0 else None
