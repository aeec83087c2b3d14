"""Tsirelson's space: exact implicit-norm evaluation and its dual.

The norm satisfies
    ||x|| = max( ||x||_inf , 1/2 sup { sum_i ||E_i x|| } )
with the sup over families of finite sets k <= E_1 < ... < E_k (k at most
min(E_1), sets order-separated, indices from 0).  Because the basis is
1-unconditional, the sup may be restricted to interval families tiling a
suffix of the support window, which yields an exact rational
interval-partition dynamic program.

The dual norm has no closed evaluation; it is computed as an exact linear
program over the polytope cut out by the canonically generated norming
functionals on the support, which is a finite (complete) family for
finitely supported vectors.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Optional

from ..errors import BudgetExceeded
from ..finvec import FinVec
from ..rationals import ZERO
from .simplex import solve_lp

# witness nodes: ("coord", index) | ("split", k, (sub-witnesses...))


def _tsirelson_slices(coords: tuple[int, ...], vals: tuple[Fraction, ...]):
    """DP over support slices; returns slice -> (value, witness)."""

    @lru_cache(maxsize=None)
    def norm_slice(i: int, j: int) -> tuple[Fraction, tuple]:
        best = max(vals[i:j])
        witness = ("coord", coords[i + max(range(j - i), key=lambda t: vals[i + t])])
        for k in range(2, j - i + 1):
            a = next((t for t in range(i, j) if coords[t] >= k), None)
            if a is None or j - a < k:
                continue
            val, parts = split(a, j, k)
            val = val / 2
            if val > best:
                best = val
                witness = ("split", k, parts)
        return best, witness

    @lru_cache(maxsize=None)
    def split(pos: int, j: int, parts: int) -> tuple[Fraction, tuple]:
        if parts == 1:
            v, w = norm_slice(pos, j)
            return v, (w,)
        best_val, best_wit = None, None
        for cut in range(pos + 1, j - parts + 2):
            head, whead = norm_slice(pos, cut)
            tail, wtail = split(cut, j, parts - 1)
            if best_val is None or head + tail > best_val:
                best_val, best_wit = head + tail, (whead,) + wtail
        return best_val, best_wit

    return norm_slice


def tsirelson_norm_exact(x: FinVec) -> tuple[Fraction, Optional[tuple]]:
    """Exact rational Tsirelson norm with an optimal functional-tree witness."""
    if not x:
        return ZERO, None
    coords = x.support
    vals = tuple(abs(x[i]) for i in coords)
    norm_slice = _tsirelson_slices(coords, vals)
    return norm_slice(0, len(coords))


def witness_value(node: tuple, x: FinVec) -> Fraction:
    """Re-evaluate a witness tree against x (independent of the DP memo)."""
    kind = node[0]
    if kind == "coord":
        return abs(x[node[1]])
    _, k, parts = node
    return sum((witness_value(p, x) for p in parts), ZERO) / 2


def canonical_functionals(support: tuple[int, ...], level_cap: Optional[int] = None,
                          budget: int = 200_000) -> tuple[list[dict[int, Fraction]], bool]:
    """Nonnegative canonical Tsirelson norming functionals on a support.

    Returns (functionals, complete).  Functionals are coefficient maps; on
    the nonnegative orthant their maxima compute the norm, and restricted
    to extended interval families they already cut out the unit ball
    exactly (smaller families are coordinatewise dominated).  complete is
    False when level_cap or the budget truncated generation.
    """
    n = len(support)
    seen: set[tuple] = set()
    out: list[dict[int, Fraction]] = []
    truncated = [False]

    def emit(f: dict[int, Fraction]):
        key = tuple(sorted(f.items()))
        if key not in seen:
            if len(out) >= budget:
                raise BudgetExceeded(f"functional budget {budget} exhausted")
            seen.add(key)
            out.append(f)

    @lru_cache(maxsize=None)
    def gen(i: int, j: int, depth: int) -> tuple[tuple[tuple[tuple[int, Fraction], ...], ...], ...] | tuple:
        """All canonical functionals on support slice [i, j) up to depth."""
        fams: list[dict[int, Fraction]] = [{support[t]: Fraction(1)} for t in range(i, j)]
        if level_cap is None or depth < level_cap:
            for k in range(2, j - i + 1):
                a = next((t for t in range(i, j) if support[t] >= k), None)
                if a is None or j - a < k:
                    continue
                for combo in _compositions(a, j, k):
                    subs = [gen(lo, hi, depth + 1) for lo, hi in combo]
                    for pick in _product(subs):
                        f: dict[int, Fraction] = {}
                        for sub in pick:
                            for idx, cv in sub:
                                f[idx] = f.get(idx, ZERO) + cv / 2
                        fams.append(f)
                        if len(fams) + len(out) > budget:
                            raise BudgetExceeded(f"functional budget {budget} exhausted")
        elif j - i > 1:
            truncated[0] = True
        # dedup within the slice
        uniq = {}
        for f in fams:
            uniq[tuple(sorted(f.items()))] = f
        return tuple(tuple(sorted(f.items())) for f in uniq.values())

    def _compositions(a: int, j: int, k: int):
        if k == 1:
            yield ((a, j),)
            return
        for cut in range(a + 1, j - k + 2):
            for rest in _compositions(cut, j, k - 1):
                yield ((a, cut),) + rest

    def _product(lists):
        if not lists:
            yield ()
            return
        for head in lists[0]:
            for rest in _product(lists[1:]):
                yield (head,) + rest

    for key in gen(0, n, 0):
        emit(dict(key))
    return out, not truncated[0]


def tsirelson_dual_bounds(y: FinVec, level_cap: Optional[int] = None,
                          budget: int = 200_000
                          ) -> tuple[Fraction, Fraction, list[Fraction], bool]:
    """Certified (lower, upper) for the Tsirelson-dual norm of y.

    Exact (lower == upper) when the canonical functional family on
    supp(y) was generated completely; otherwise the LP value upper-bounds
    the dual norm and the renormalized LP optimizer certifies the lower
    bound.  Also returns the optimizing point (on |y|'s support) and the
    completeness flag.
    """
    if not y:
        return ZERO, ZERO, [], True
    support = y.support
    w = [abs(y[i]) for i in support]
    funcs, complete = canonical_functionals(support, level_cap, budget)
    A = [[f.get(i, ZERO) for i in support] for f in funcs]
    b = [Fraction(1)] * len(funcs)
    value, xstar, _ = solve_lp(A, b, w)
    if complete:
        return value, value, xstar, True
    upper = min(value, sum(w, ZERO))  # ||y||_T* <= ||y||_l1 since ||x||_T >= ||x||_inf
    xv = FinVec({i: v for i, v in zip(support, xstar)})
    tnorm, _ = tsirelson_norm_exact(xv)
    lower = ZERO if tnorm == 0 else sum((wi * xi for wi, xi in zip(w, xstar)), ZERO) / tnorm
    return lower, upper, xstar, False
