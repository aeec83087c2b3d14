"""Space specifications, norm results, and the norm dispatcher.

A SpaceSpec is a variant record describing one of the supported norms.
norm(spec, x) evaluates it on a finitely supported rational vector,
exactly where the norm is a finite combinatorial optimum over rationals
and with certified rational error bounds otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from ..errors import InvalidSpec, UnsupportedCombination
from ..finvec import FinVec
from ..rationals import (DEFAULT_BITS, Ival, RadicalSum, ZERO, ival_max,
                         ival_sum, nthroot_floor, root_bounds)

INF = Fraction(10 ** 12)  # sentinel only ever compared via is_inf


@dataclass(frozen=True)
class SpaceSpec:
    """Base class for norm variant records."""

    def tag(self) -> str:
        return type(self).__name__


@dataclass(frozen=True)
class Lp(SpaceSpec):
    """Classical lp; p is a rational >= 1 or None for the sup norm."""

    p: Optional[Fraction]

    def __post_init__(self):
        if self.p is not None:
            object.__setattr__(self, "p", Fraction(self.p))
            if self.p < 1:
                raise InvalidSpec("lp requires p >= 1")

    @property
    def is_inf(self) -> bool:
        return self.p is None


@dataclass(frozen=True)
class C0(SpaceSpec):
    pass


@dataclass(frozen=True)
class FiniteLinf(SpaceSpec):
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidSpec("FiniteLinf needs n >= 1")


@dataclass(frozen=True)
class DirectSum(SpaceSpec):
    """Consecutive coordinate blocks of given widths; last inner repeats."""

    outer: SpaceSpec
    inners: tuple[tuple[SpaceSpec, int], ...]

    def __post_init__(self):
        if not self.inners:
            raise InvalidSpec("DirectSum needs at least one inner space")
        if any(w < 1 for _, w in self.inners):
            raise InvalidSpec("widths must be positive")


@dataclass(frozen=True)
class InterleavedSum(SpaceSpec):
    """lp sum of l2 copies with the copies enumerated along diagonals.

    Flat coordinate T_d + j (T_d = d(d+1)/2, 0 <= j <= d) is coordinate
    d - j of copy j, matching the diagonal ordering of the doubly indexed
    unit vector basis.
    """

    outer_p: Fraction

    def __post_init__(self):
        object.__setattr__(self, "outer_p", Fraction(self.outer_p))
        if self.outer_p < 1:
            raise InvalidSpec("outer exponent must be >= 1")


@dataclass(frozen=True)
class Tsirelson(SpaceSpec):
    pass


@dataclass(frozen=True)
class TsirelsonDual(SpaceSpec):
    level_cap: Optional[int] = None
    budget: int = 200_000


@dataclass(frozen=True)
class SchlumprechtLike(SpaceSpec):
    """Implicit norm mixing an l2 aggregate of block averages at scales
    n_k, normalized by f(n) = log2(1 + n)."""

    n_k: tuple[int, ...]

    def __post_init__(self):
        nk = tuple(self.n_k)
        object.__setattr__(self, "n_k", nk)
        if not nk or any(v < 2 for v in nk) or any(a >= b for a, b in zip(nk, nk[1:])):
            raise InvalidSpec("n_k must be a strictly increasing list of naturals >= 2")


@dataclass(frozen=True)
class IndicatorCube(SpaceSpec):
    """Cube-aggregated norm over disjoint families of scaled indicator
    functionals with level weights 1/sqrt(m_i); admissible_only restricts
    to functionals whose support E satisfies min(E) >= |E|."""

    m: tuple[int, ...]
    admissible_only: bool = False

    def __post_init__(self):
        m = tuple(self.m)
        object.__setattr__(self, "m", m)
        if not m or any(v < 1 for v in m):
            raise InvalidSpec("m must be a nonempty list of positive naturals")


@dataclass(frozen=True)
class PolyhedralMax(SpaceSpec):
    functionals: tuple[FinVec, ...]

    def __post_init__(self):
        if not self.functionals:
            raise InvalidSpec("PolyhedralMax needs at least one functional")


@dataclass(frozen=True)
class InfSumWeighted(SpaceSpec):
    """Coordinate 0 carries a distinguished vector; coordinates >= 1 carry
    y_space and an extra weighted-l1 term with weights 2^-i."""

    y_space: SpaceSpec


@dataclass(frozen=True)
class BlockL1AggTstar(SpaceSpec):
    """max of the plain l2 norm of the coefficients and the
    Tsirelson-dual norm of the vector of consecutive-block l1 norms."""

    block_widths: tuple[int, ...]

    def __post_init__(self):
        bw = tuple(self.block_widths)
        object.__setattr__(self, "block_widths", bw)
        if not bw or any(w < 1 for w in bw):
            raise InvalidSpec("block widths must be positive")


@dataclass(frozen=True)
class Renormed(SpaceSpec):
    """Asymptotic renorming sum_c p_c (||c||x|| + x|| + ||c||x|| - x||) of a
    base norm over a finite center family, times an optional scale."""

    base: SpaceSpec
    centers: tuple[tuple[FinVec, Fraction], ...]
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if not self.centers:
            raise InvalidSpec("Renormed needs a nonempty center list")
        centers = tuple((c, Fraction(p)) for c, p in self.centers)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "scale", Fraction(self.scale))
        if any(p <= 0 for _, p in centers):
            raise InvalidSpec("center weights must be positive")
        if self.scale <= 0:
            raise InvalidSpec("scale must be positive")


@dataclass
class NormResult:
    """Norm value with a certified error radius and optional witness.

    The true norm lies in [value - error_radius, value + error_radius].
    error_radius == 0 means value is the exact rational norm.  For
    irrational norms that are still exactly determined, `power` holds
    (p, q) with (true norm)**p == q (q a Fraction or RadicalSum), and
    error_radius only reflects the rational presentation of the root.
    """

    value: Fraction
    error_radius: Fraction
    witness: Any = None
    power: Optional[tuple[int, Any]] = None

    def interval(self) -> Ival:
        return Ival(max(ZERO, self.value - self.error_radius), self.value + self.error_radius)

    @property
    def is_exact(self) -> bool:
        return self.error_radius == 0 or self.power is not None

    @staticmethod
    def exact(q: Fraction, witness: Any = None) -> "NormResult":
        q = Fraction(q)
        return NormResult(q, ZERO, witness, power=(1, q))

    @staticmethod
    def from_interval(iv: Ival, witness: Any = None,
                      power: Optional[tuple[int, Any]] = None) -> "NormResult":
        lo = max(ZERO, iv.lo)
        return NormResult((lo + iv.hi) / 2, (iv.hi - lo) / 2, witness, power)

    @staticmethod
    def from_power(p: int, q: Fraction, witness: Any = None,
                   bits: int = DEFAULT_BITS) -> "NormResult":
        """Exact p-th-power rational; the root is taken at output precision."""
        q = Fraction(q)
        root = exact_root(q, p)
        if root is not None:
            return NormResult(root, ZERO, witness, power=(p, q))
        lo, hi = root_bounds(q, p, bits)
        return NormResult((lo + hi) / 2, (hi - lo) / 2, witness, power=(p, q))

    def to_json(self) -> dict:
        out = {"value": _frac_str(self.value), "error_radius": _frac_str(self.error_radius)}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return _frac_str(obj)
    if isinstance(obj, FinVec):
        return obj.to_json()
    if isinstance(obj, RadicalSum):
        return {str(r): _frac_str(c) for r, c in obj.terms.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(o) for o in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    return obj


def exact_root(q: Fraction, p: int) -> Optional[Fraction]:
    """The exact rational p-th root of q, if it exists."""
    if q < 0:
        return None
    rn = nthroot_floor(q.numerator, p)
    rd = nthroot_floor(q.denominator, p)
    if rn ** p == q.numerator and rd ** p == q.denominator:
        return Fraction(rn, rd)
    return None


def _triangle(pos: int) -> tuple[int, int]:
    """Inverse diagonal enumeration: flat position -> (copy, inner index)."""
    d = int((math.isqrt(8 * pos + 1) - 1) // 2)
    while d * (d + 1) // 2 > pos:
        d -= 1
    while (d + 1) * (d + 2) // 2 <= pos:
        d += 1
    j = pos - d * (d + 1) // 2
    return j, d - j


def _lp_result(p: Optional[Fraction], x: FinVec, bits: int) -> NormResult:
    if not x:
        return NormResult.exact(ZERO)
    if p is None:
        return NormResult.exact(x.sup_abs())
    if p.denominator == 1:
        k = p.numerator
        if k == 1:
            return NormResult.exact(x.l1())
        return NormResult.from_power(k, x.power_sum(k), bits=bits)
    a, b = p.numerator, p.denominator
    total = Ival.point(0)
    for _, v in x:
        term = Ival(*root_bounds(abs(v) ** a, b, bits))
        total = total + term
    # ||x||_p = total ** (1/p) = (total ** b) ** (1/a)
    return NormResult.from_interval(total.pow_int(b).root(a, bits))


def _direct_sum(spec: DirectSum, x: FinVec, bits: int, kwargs) -> NormResult:
    blocks: list[FinVec] = []
    offset = 0
    idx = 0
    max_needed = x.max_index() if x else 0
    while offset <= max_needed:
        inner, width = spec.inners[min(idx, len(spec.inners) - 1)]
        seg = FinVec({i - offset: x[i] for i in range(offset, offset + width) if x[i]})
        blocks.append((inner, seg))
        offset += width
        idx += 1
    results = [norm(inner, seg, bits=bits, **kwargs) for inner, seg in blocks]
    outer = spec.outer
    if isinstance(outer, (C0, FiniteLinf)) or (isinstance(outer, Lp) and outer.is_inf):
        if isinstance(outer, FiniteLinf) and len(results) > outer.n:
            raise UnsupportedCombination("more blocks than the outer finite-dim space allows")
        iv = ival_max([r.interval() for r in results]) if results else Ival.point(0)
        if all(r.error_radius == 0 for r in results):
            return NormResult.exact(iv.lo)
        return NormResult.from_interval(iv)
    if isinstance(outer, Lp) and outer.p.denominator == 1:
        k = outer.p.numerator
        if all(r.error_radius == 0 for r in results):
            total = sum((r.value ** k for r in results), ZERO)
            return NormResult.from_power(k, total, bits=bits)
        total = ival_sum(abs(r.interval()).pow_int(k) for r in results)
        return NormResult.from_interval(total.root(k, bits))
    raise UnsupportedCombination(f"unsupported outer space {outer.tag()} for DirectSum")


def _interleaved(spec: InterleavedSum, x: FinVec, bits: int) -> NormResult:
    if not x:
        return NormResult.exact(ZERO)
    copies: dict[int, Fraction] = {}
    for pos, v in x:
        copy, _ = _triangle(pos)
        copies[copy] = copies.get(copy, ZERO) + v * v
    p = spec.outer_p
    if p.denominator == 1 and p.numerator % 2 == 0:
        k = p.numerator
        total = sum((s ** (k // 2) for s in copies.values()), ZERO)
        return NormResult.from_power(k, total, bits=bits)
    if p.denominator == 1:
        k = p.numerator
        # sum of s^(k/2) = sum of sqrt(s^k)
        total = ival_sum(Ival(*root_bounds(s ** k, 2, bits)) for s in copies.values())
        return NormResult.from_interval(total.root(k, bits))
    raise UnsupportedCombination("InterleavedSum supports integer outer exponents")


def _polyhedral(spec: PolyhedralMax, x: FinVec) -> NormResult:
    best, best_f = ZERO, None
    for f in spec.functionals:
        v = abs(f.inner(x))
        if v > best:
            best, best_f = v, f
    if x and best == 0:
        raise InvalidSpec("functional family does not separate the given vector")
    return NormResult.exact(best, witness=best_f)


def _inf_sum_weighted(spec: InfSumWeighted, x: FinVec, bits: int, kwargs) -> NormResult:
    head = abs(x[0])
    tail = FinVec({i - 1: v for i, v in x if i >= 1})
    weighted = sum((abs(v) * Fraction(1, 2 ** i) for i, v in x if i >= 1), ZERO)
    inner = norm(spec.y_space, tail, bits=bits, **kwargs)
    iv = ival_max([Ival.point(head), inner.interval() + Ival.point(weighted)])
    if inner.error_radius == 0:
        return NormResult.exact(iv.lo)
    return NormResult.from_interval(iv)


def _block_l1_tstar(spec: BlockL1AggTstar, x: FinVec, bits: int) -> NormResult:
    from .tsirelson import tsirelson_dual_bounds
    if not x:
        return NormResult.exact(ZERO)
    sq = x.power_sum(2)
    l2 = Ival(*root_bounds(sq, 2, bits))
    block_norms: dict[int, Fraction] = {}
    offset, idx = 0, 0
    max_needed = x.max_index()
    while offset <= max_needed:
        width = spec.block_widths[min(idx, len(spec.block_widths) - 1)]
        mass = sum((abs(x[i]) for i in range(offset, offset + width)), ZERO)
        if mass:
            block_norms[idx] = mass
        offset += width
        idx += 1
    lo, hi, _, _ = tsirelson_dual_bounds(FinVec(block_norms))
    return NormResult.from_interval(ival_max([l2, Ival(lo, hi)]))


def c_norm_result(base: SpaceSpec, c: FinVec, x: FinVec, bits: int = DEFAULT_BITS,
                  **kwargs) -> NormResult:
    """||c||x|| + x|| + ||c||x|| - x|| under the base norm, certified.

    When the base norm of x is exactly rational the two evaluations are
    exact; otherwise the scalar multiplier interval is propagated through
    the base norm's Lipschitz bound |  ||c t + x|| - ||c t' + x||  | <=
    ||c|| |t - t'|.
    """
    if not x:
        return NormResult.exact(ZERO)
    nx = norm(base, x, bits=bits, **kwargs)
    if not c:
        v = nx.interval() * 2
        if nx.error_radius == 0:
            return NormResult.exact(2 * nx.value)
        return NormResult.from_interval(v, power=None)
    if nx.error_radius == 0:
        t = nx.value
        plus = norm(base, c * t + x, bits=bits, **kwargs)
        minus = norm(base, c * t - x, bits=bits, **kwargs)
        iv = plus.interval() + minus.interval()
        if plus.error_radius == 0 and minus.error_radius == 0:
            return NormResult.exact(plus.value + minus.value)
        return NormResult.from_interval(iv)
    t_iv = nx.interval()
    t = t_iv.mid
    plus = norm(base, c * t + x, bits=bits, **kwargs)
    minus = norm(base, c * t - x, bits=bits, **kwargs)
    nc = norm(base, c, bits=bits, **kwargs)
    slack = 2 * nc.interval().hi * t_iv.radius
    iv = plus.interval() + minus.interval() + Ival(-slack, slack)
    return NormResult.from_interval(iv)


def _renormed(spec: Renormed, x: FinVec, bits: int, kwargs) -> NormResult:
    total = Ival.point(0)
    exact = True
    for c, pc in spec.centers:
        r = c_norm_result(spec.base, c, x, bits=bits, **kwargs)
        exact = exact and r.error_radius == 0
        total = total + r.interval() * pc
    total = total * spec.scale
    if exact:
        return NormResult.exact(total.lo)
    return NormResult.from_interval(total)


def norm(spec: SpaceSpec, x: FinVec, bits: int = DEFAULT_BITS,
         level_cap: Optional[int] = None, tol: Optional[Fraction] = None,
         iter_cap: int = 200) -> NormResult:
    """Evaluate the norm described by `spec` on x.

    Exact (error_radius 0, or an exact `power` payload) for sup-type,
    integer-lp, polyhedral, direct-sum and Tsirelson norms; certified
    with explicit rational radii for the dual, implicit-equation and
    indicator-cube norms.
    """
    if not isinstance(x, FinVec):
        raise TypeError("norm expects a FinVec")
    if isinstance(spec, Lp):
        return _lp_result(spec.p, x, bits)
    if isinstance(spec, C0):
        return NormResult.exact(x.sup_abs())
    if isinstance(spec, FiniteLinf):
        if x and x.max_index() >= spec.n:
            raise UnsupportedCombination(f"support exceeds dimension {spec.n}")
        return NormResult.exact(x.sup_abs())
    if isinstance(spec, DirectSum):
        return _direct_sum(spec, x, bits, dict(tol=tol, iter_cap=iter_cap))
    if isinstance(spec, InterleavedSum):
        return _interleaved(spec, x, bits)
    if isinstance(spec, Tsirelson):
        from .tsirelson import tsirelson_norm_exact
        value, witness = tsirelson_norm_exact(x)
        return NormResult.exact(value, witness=witness)
    if isinstance(spec, TsirelsonDual):
        from .tsirelson import tsirelson_dual_bounds
        cap = level_cap if level_cap is not None else spec.level_cap
        lo, hi, xstar, complete = tsirelson_dual_bounds(x, cap, spec.budget)
        res = NormResult.from_interval(Ival(lo, hi), witness=xstar)
        if complete:
            res.power = (1, res.value)
        return res
    if isinstance(spec, SchlumprechtLike):
        from .schlumprecht import schlumprecht_norm
        return schlumprecht_norm(spec, x, tol=tol if tol is not None else Fraction(1, 10 ** 9),
                                 iter_cap=iter_cap, bits=bits)
    if isinstance(spec, IndicatorCube):
        from .indicator_cube import indicator_cube_norm
        return indicator_cube_norm(spec, x, level_cap=level_cap, bits=bits)
    if isinstance(spec, PolyhedralMax):
        return _polyhedral(spec, x)
    if isinstance(spec, InfSumWeighted):
        return _inf_sum_weighted(spec, x, bits, dict(tol=tol, iter_cap=iter_cap))
    if isinstance(spec, BlockL1AggTstar):
        return _block_l1_tstar(spec, x, bits)
    if isinstance(spec, Renormed):
        return _renormed(spec, x, bits, dict(tol=tol, iter_cap=iter_cap))
    raise UnsupportedCombination(f"no norm oracle for {spec!r}")
