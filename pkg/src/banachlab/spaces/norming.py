"""Finite norming families: functionals of dual norm at most one whose
maxima recover a norm up to a declared factor (1 - eps), always including
the coordinate biorthogonals."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from typing import Optional

from ..errors import UnsupportedSpec
from ..finvec import FinVec
from ..rationals import ZERO, root_bounds
from .core import C0, FiniteLinf, Lp, PolyhedralMax, SpaceSpec


def _solve_exact(mat: list[list[Fraction]], rhs: list[Fraction]) -> Optional[list[Fraction]]:
    """Gaussian elimination over Q; None when inconsistent."""
    m, n = len(mat), len(mat[0]) if mat else 0
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    pivots = []
    r = 0
    for c in range(n):
        sel = next((i for i in range(r, m) if a[i][c]), None)
        if sel is None:
            continue
        a[r], a[sel] = a[sel], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if a[i][n]:
            return None
    sol = [ZERO] * n
    for i, c in enumerate(pivots):
        sol[c] = a[i][n]
    return sol


def in_absolute_convex_hull(point: FinVec, functionals: list[FinVec], dim: int) -> bool:
    """Exact membership of `point` in absconv(functionals) on [0, dim).

    By Caratheodory it suffices to scan subsets of size <= dim + 1 of the
    signed family; sizes here are tiny so the scan is exhaustive.
    """
    signed = []
    seen = set()
    for f in functionals:
        for s in (1, -1):
            g = f * s
            key = tuple((i, g[i]) for i in range(dim))
            if key not in seen:
                seen.add(key)
                signed.append(g)
    target = [point[i] for i in range(dim)]
    for size in range(1, min(len(signed), dim + 1) + 1):
        for subset in combinations(signed, size):
            # convex witness on the boundary: weights sum to exactly 1
            mat = [[g[i] for g in subset] for i in range(dim)]
            mat.append([Fraction(1)] * size)
            sol = _solve_exact(mat, target + [Fraction(1)])
            if sol is not None and all(w >= 0 for w in sol):
                return True
            # witness involving the origin: weights sum to at most 1
            sol = _solve_exact(mat[:-1], target)
            if sol is not None and all(w >= 0 for w in sol) and sum(sol) <= 1:
                return True
    return False


def norming_functionals(spec: SpaceSpec, dim: int, eps: Fraction) -> list[FinVec]:
    """Functionals of dual norm <= 1 with max |<f, e>| >= (1 - eps) ||e||
    for e supported on [0, dim), containing the biorthogonals.

    Exact (eps irrelevant) for polyhedral and sup-type norms; net-based
    for lp with the mesh derived from eps.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if isinstance(spec, PolyhedralMax):
        funcs = list(spec.functionals)
        for i in range(dim):
            e = FinVec.unit(i)
            if not in_absolute_convex_hull(e, funcs, dim):
                raise UnsupportedSpec(
                    f"coordinate functional {i} lies outside the dual ball; "
                    "cannot complete the biorthogonal system")
        out = []
        seen = set()
        for f in funcs + [FinVec.unit(i) for i in range(dim)]:
            for s in (1, -1):
                g = f * s
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        return out
    if isinstance(spec, (C0, FiniteLinf)) or (isinstance(spec, Lp) and spec.is_inf):
        if isinstance(spec, FiniteLinf) and dim > spec.n:
            raise UnsupportedSpec("dimension exceeds the space")
        return [s * FinVec.unit(i) for i in range(dim) for s in (1, -1)]
    if isinstance(spec, Lp):
        p = spec.p
        if p == 1:
            # dual ball is the sup ball: all sign vectors norm exactly
            out = [FinVec({i: s for i, s in zip(range(dim), signs)})
                   for signs in product((1, -1), repeat=dim)]
            return out + [s * FinVec.unit(i) for i in range(dim) for s in (1, -1)]
        q = p / (p - 1)
        R = max(2, math.ceil(2 * dim / eps))
        out = [s * FinVec.unit(i) for i in range(dim) for s in (1, -1)]
        seen = {tuple((i, f[i]) for i in range(dim)) for f in out}
        for direction in product(range(-R, R + 1), repeat=dim):
            if all(v == 0 for v in direction):
                continue
            g = FinVec({i: Fraction(v) for i, v in enumerate(direction)})
            scale = _dual_scale_down(g, q)
            f = g * scale
            key = tuple((i, f[i]) for i in range(dim))
            if key not in seen:
                seen.add(key)
                out.append(f)
        return out
    raise UnsupportedSpec(f"no dual description implemented for {spec.tag()}")


def _dual_scale_down(g: FinVec, q: Fraction) -> Fraction:
    """Rational s with ||s g||_q <= 1, close to 1/||g||_q from below."""
    a, b = q.numerator, q.denominator
    # ||g||_q = (sum |g_i|^q)^{1/q}; bound it above and invert
    total = ZERO
    for _, v in g:
        hi = root_bounds(abs(v) ** a, b, 40)[1]
        total += hi
    # total >= sum |g_i|^{q}; ||g||_q <= (total)^{1/q} = (total^b)^{1/a}
    norm_hi = root_bounds(total ** b, a, 40)[1]
    return 1 / norm_hi
