"""Fixed-point evaluation of the implicit mixed-scale norm

    ||x|| = max( ||x||_c0 , ( sum_k ||x||_{n_k}^2 )^{1/2} )
    ||x||_{n_k} = sup { (1/f(n_k)) sum_{i<n_k} ||E_i x|| : E_0 < ... }

with f(n) = log2(1 + n).  Iteration starts from the sup norm; iterates
are monotone nondecreasing and bounded by the l1 norm, so they converge.
The logarithms are irrational; they enter only through certified
directed-rounding intervals which are folded into the reported radius.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from ..errors import NonConvergence
from ..finvec import FinVec
from ..rationals import DEFAULT_BITS, Ival, ZERO, ival_max, ival_sum, log2_bounds
from .core import NormResult, SchlumprechtLike


def f_interval(n: int, frac_bits: int = 48) -> Ival:
    """Certified bounds on f(n) = log2(1 + n)."""
    lo, hi = log2_bounds(1 + n, frac_bits)
    return Ival(lo, hi)


def schlumprecht_norm(spec: SchlumprechtLike, x: FinVec,
                      tol: Fraction = Fraction(1, 10 ** 9),
                      iter_cap: int = 200, bits: int = DEFAULT_BITS) -> NormResult:
    """Certified fixed-point value; error_radius = tol plus interval slack.

    Raises NonConvergence when iter_cap steps do not reach tol.
    """
    if not x:
        return NormResult.exact(ZERO)
    tol = Fraction(tol)
    coords = x.support
    vals = [abs(x[i]) for i in coords]
    d = len(coords)
    inv_f = {}
    for nk in spec.n_k:
        fi = f_interval(nk)
        inv_f[nk] = Ival(1 / fi.hi, 1 / fi.lo)

    sup_slice = {}
    for i in range(d):
        run = ZERO
        for j in range(i + 1, d + 1):
            run = max(run, vals[j - 1])
            sup_slice[(i, j)] = Ival.point(run)

    prev = dict(sup_slice)
    top = (0, d)
    last = prev[top]
    for _ in range(iter_cap):
        new = {}
        for i in range(d):
            for j in range(i + 1, d + 1):
                # best partition sums into at most t parts, shared across scales
                width = j - i
                per_parts = _best_partitions(prev, i, j, min(max(spec.n_k), width))
                cands = [sup_slice[(i, j)]]
                sq = Ival.point(0)
                for nk in spec.n_k:
                    t = min(nk, width)
                    term = per_parts[t] * inv_f[nk]
                    sq = sq + term * term
                cands.append(sq.sqrt(bits))
                new[(i, j)] = ival_max(cands)
        cur = new[top]
        if cur.mid - last.mid <= tol:
            radius = tol + cur.radius
            return NormResult(cur.mid, radius)
        last = cur
        prev = new
    raise NonConvergence(f"no fixed point within {iter_cap} iterations at tol {tol}")


def _best_partitions(table: dict, i: int, j: int, tmax: int) -> dict[int, Ival]:
    """best[t] = max over partitions of slice [i,j) into at most t nonempty
    interval blocks of the sum of table values of the blocks."""
    width = j - i
    tmax = min(tmax, width)
    best: dict[int, Ival] = {1: table[(i, j)]}
    # dp[pos] = best sum for [pos, j) with exactly r blocks
    exact_prev = {pos: table[(pos, j)] for pos in range(i, j)}
    best_exact = {1: dict(exact_prev)}
    for r in range(2, tmax + 1):
        cur = {}
        for pos in range(i, j - r + 1):
            options = [table[(pos, cut)] + best_exact[r - 1][cut]
                       for cut in range(pos + 1, j - r + 2)]
            cur[pos] = ival_max(options)
        best_exact[r] = cur
        best[r] = ival_max([best[r - 1], cur[i]])
    return best
