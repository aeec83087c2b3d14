"""Tiny exact-rational simplex for the dual-norm linear programs.

Solves  max c.x  subject to  A x <= b, x >= 0  with all data rational and
b >= 0 (so the origin is feasible and no phase-one is needed).  Dense
tableau with Bland's rule; sizes here are a handful of variables and at
most a few thousand constraints, where exact pivoting is cheap enough.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..rationals import ZERO


def solve_lp(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction],
             c: Sequence[Fraction]) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Returns (optimal value, primal solution x, dual multipliers y).

    Requires b >= 0 and a bounded optimum (true for norm polytopes, which
    contain 0 and are bounded in every coordinate direction).
    """
    m, n = len(A), len(c)
    if any(x < 0 for x in b):
        raise ValueError("need b >= 0")
    # rows: [A | I | b]; objective row: [-c | 0 | 0]
    rows = [list(map(Fraction, A[i])) + [Fraction(int(i == j)) for j in range(m)] + [Fraction(b[i])]
            for i in range(m)]
    obj = [-Fraction(x) for x in c] + [ZERO] * m + [ZERO]
    basis = list(range(n, n + m))
    total = n + m
    while True:
        col = next((j for j in range(total) if obj[j] < 0), None)
        if col is None:
            break
        pivot_row, best = None, None
        for i in range(m):
            a = rows[i][col]
            if a > 0:
                ratio = rows[i][total] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[pivot_row]):
                    best, pivot_row = ratio, i
        if pivot_row is None:
            raise ValueError("LP is unbounded; polytope constraints are missing")
        piv = rows[pivot_row][col]
        rows[pivot_row] = [v / piv for v in rows[pivot_row]]
        for i in range(m):
            if i != pivot_row and rows[i][col]:
                f = rows[i][col]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[pivot_row])]
        if obj[col]:
            f = obj[col]
            obj = [v - f * w for v, w in zip(obj, rows[pivot_row])]
        basis[pivot_row] = col
    x = [ZERO] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = rows[i][total]
    duals = obj[n:n + m]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), ZERO)
    return value, x, duals
