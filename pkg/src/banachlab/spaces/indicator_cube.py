"""Cube-aggregated norms over disjoint families of scaled indicators.

A functional is a sum of terms 1_E / sqrt(m_i) over strictly increasing
levels i, with |E| <= m_i, the E's pairwise disjoint, and the number of
terms at most the first level.  The norm of x is

    sup ( sum_k |<f_k, x>|^3 )^{1/3}

over finite disjointly supported families from the functional family;
the admissible variant further requires min(supp f) >= |supp f| for each
functional.  Level 0 can never occur (the term count must not exceed the
first level), so unit vectors have norm 1/sqrt(m_1) under the literal
definition.

The optimization is exact: inner products live in the field generated by
the square roots of the m_i, and family values are compared through their
exact cubes.  The reported radius covers the certified tail of levels
beyond the cap plus the rational presentation of the cube root.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Optional

from ..errors import BudgetExceeded, InvalidSpec
from ..finvec import FinVec
from ..rationals import DEFAULT_BITS, RadicalSum, ZERO, root_bounds, sqrt_bounds
from .core import IndicatorCube, NormResult


def allowed_shapes(cap: int) -> list[tuple[int, ...]]:
    """Level sets {i_0 < ... < i_{n-1}} within [1, cap] satisfying n <= i_0."""
    shapes = []
    for n in range(1, cap + 1):
        for combo in combinations(range(1, cap + 1), n):
            if n <= combo[0]:
                shapes.append(combo)
    return shapes


class _Slot:
    """One open functional during the search."""

    __slots__ = ("shape", "rem", "sums", "count", "min_pos")

    def __init__(self, shape: tuple[int, ...], caps: dict[int, int]):
        self.shape = shape
        self.rem = {lvl: caps[lvl] for lvl in shape}
        self.sums = {lvl: ZERO for lvl in shape}
        self.count = 0
        self.min_pos: Optional[int] = None

    def value(self, weights: dict[int, RadicalSum]) -> RadicalSum:
        out = RadicalSum()
        for lvl, s in self.sums.items():
            if s:
                out = out + weights[lvl] * s
        return out

    def best_weight_level(self) -> Optional[int]:
        open_levels = [lvl for lvl in self.shape if self.rem[lvl] > 0]
        return min(open_levels) if open_levels else None  # m increasing: lowest level = largest weight


class _Search:
    """Exact branch and bound over coordinate-to-term assignments.

    Coordinates of equal weight form classes (collapsed only when the
    admissibility constraint is off, since that constraint sees
    positions); within one class, slot indices are nondecreasing and
    counts on freshly opened same-shape functionals are nonincreasing,
    which removes permutation symmetry.
    """

    def __init__(self, classes: list[tuple[Fraction, list[int]]], m: tuple[int, ...],
                 cap: int, admissible: bool, budget: int):
        self.classes = classes
        self.cap = cap
        self.admissible = admissible
        self.budget = budget
        self.nodes = 0
        self.shapes = allowed_shapes(cap)
        total_units = sum(len(ixs) for _, ixs in classes)
        self.caps = {lvl: min(m[lvl], total_units) for lvl in range(1, cap + 1)}
        self.weights = {lvl: RadicalSum.sqrt_of(Fraction(1, m[lvl]))
                        for lvl in range(1, cap + 1)}
        self.w_best_new = self.weights[1] if cap >= 1 else RadicalSum()
        self.best = RadicalSum()
        self.best_witness: list = []
        self.funcs: list[_Slot] = []
        self.assignments: list[list[tuple[int, int, int]]] = []  # per class: (func, lvl, count)

    def run(self) -> tuple[RadicalSum, list]:
        if self.shapes:
            self._walk(0)
        return self.best, self.best_witness

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"branch-and-bound budget {self.budget} exhausted")

    def _total(self) -> RadicalSum:
        out = RadicalSum()
        for f in self.funcs:
            out = out + f.value(self.weights) ** 3
        return out

    def _record(self):
        total = self._total()
        if total.cmp(self.best) > 0:
            self.best = total
            witness = []
            for fi, f in enumerate(self.funcs):
                terms: dict[int, list[int]] = {lvl: [] for lvl in f.shape}
                for ci, alist in enumerate(self.assignments):
                    coords = self.classes[ci][1]
                    used = 0
                    for (func_idx, lvl, count) in alist:
                        chunk = coords[used:used + count]
                        used += count
                        if func_idx == fi:
                            terms[lvl].extend(chunk)
                entry = [(lvl, sorted(ix)) for lvl, ix in terms.items() if ix]
                if entry:
                    witness.append(entry)
            self.best_witness = witness

    def _bound_exceeds(self, ci: int) -> bool:
        """Prune when even concentrating all remaining mass on the single
        best slot (convexity: the cube-sum maximum over a mass simplex
        sits at a vertex) cannot beat the incumbent."""
        rest = sum((v * len(ixs) for v, ixs in self.classes[ci:]), ZERO)
        if rest == 0:
            return True
        base = self._total()
        cands = [base + (self.w_best_new * rest) ** 3]
        for f in self.funcs:
            lvl = f.best_weight_level()
            if lvl is None:
                continue
            v = f.value(self.weights)
            cands.append(base - v ** 3 + (v + self.weights[lvl] * rest) ** 3)
        ub = cands[0]
        for c in cands[1:]:
            if c.cmp(ub) > 0:
                ub = c
        return ub.cmp(self.best) <= 0

    def _walk(self, ci: int):
        self._tick()
        self._record()
        if ci == len(self.classes):
            return
        if self._bound_exceeds(ci):
            return
        value, coords = self.classes[ci]
        self.assignments.append([])
        self._assign(ci, value, list(coords), 0, 0, None)
        self.assignments.pop()

    def _assign(self, ci: int, value: Fraction, coords: list[int],
                si: int, li: int, last_new: Optional[tuple]):
        self._tick()
        self._walk(ci + 1)  # discard the rest of this class
        if not coords:
            return
        n = len(self.funcs)
        for fi in range(si, n):
            f = self.funcs[fi]
            for lj in range(li if fi == si else 0, len(f.shape)):
                lvl = f.shape[lj]
                room = min(f.rem[lvl], len(coords))
                for take in range(1, room + 1):
                    chunk = coords[:take]
                    self._apply(f, lvl, chunk, value)
                    if not self._violates(f):
                        self.assignments[-1].append((fi, lvl, take))
                        self._assign(ci, value, coords[take:], fi, lj + 1, last_new)
                        self.assignments[-1].pop()
                    self._undo(f, lvl, chunk, value)
        for shape in self.shapes:
            for lj, lvl in enumerate(shape):
                take_cap = min(self.caps[lvl], len(coords))
                if last_new is not None and (shape, lvl) == last_new[:2]:
                    take_cap = min(take_cap, last_new[2])
                for take in range(1, take_cap + 1):
                    f = _Slot(shape, self.caps)
                    chunk = coords[:take]
                    self._apply(f, lvl, chunk, value)
                    if not self._violates(f):
                        self.funcs.append(f)
                        self.assignments[-1].append((n, lvl, take))
                        self._assign(ci, value, coords[take:], n, lj + 1,
                                     (shape, lvl, take))
                        self.assignments[-1].pop()
                        self.funcs.pop()
                    self._undo(f, lvl, chunk, value)

    def _violates(self, f: _Slot) -> bool:
        # count can only grow and min_pos only shrink, so this is monotone
        return self.admissible and f.min_pos is not None and f.count > f.min_pos

    def _apply(self, f: _Slot, lvl: int, chunk: list[int], value: Fraction):
        f.rem[lvl] -= len(chunk)
        f.sums[lvl] += value * len(chunk)
        f.count += len(chunk)
        mp = min(chunk)
        if f.min_pos is None or mp < f.min_pos:
            f.min_pos = mp

    def _undo(self, f: _Slot, lvl: int, chunk: list[int], value: Fraction):
        f.rem[lvl] += len(chunk)
        f.sums[lvl] -= value * len(chunk)
        f.count -= len(chunk)
        if f.count == 0:
            f.min_pos = None


def _family_best(entries: list[tuple[int, Fraction]], m: tuple[int, ...], cap: int,
                 admissible: bool, budget: int) -> tuple[RadicalSum, list]:
    """Max over disjoint families of the cube sum, for nonnegative entries
    (index, weight)."""
    if not entries or cap < 1:
        return RadicalSum(), []
    if admissible:
        classes = [(v, [i]) for i, v in sorted(entries, key=lambda t: (-t[1], t[0]))]
    else:
        grouped: dict[Fraction, list[int]] = {}
        for i, v in entries:
            grouped.setdefault(v, []).append(i)
        classes = [(v, sorted(ixs)) for v, ixs in
                   sorted(grouped.items(), key=lambda t: -t[0])]
    search = _Search(classes, m, cap, admissible, budget)
    return search.run()


def indicator_cube_norm(spec: IndicatorCube, x: FinVec,
                        level_cap: Optional[int] = None,
                        bits: int = DEFAULT_BITS,
                        budget: int = 500_000) -> NormResult:
    """Exact optimum over families with term levels <= level_cap, plus a
    certified radius for the excluded higher levels."""
    m = spec.m
    cap = level_cap if level_cap is not None else len(m) - 1
    if cap > len(m) - 1:
        raise InvalidSpec(f"level_cap {cap} exceeds the provided m list (levels 0..{len(m) - 1})")
    if cap < 1:
        raise InvalidSpec("level_cap must be >= 1 (level 0 is never usable)")
    if not x:
        return NormResult.exact(ZERO)

    pos = [(i, v) for i, v in x if v > 0]
    neg = [(i, -v) for i, v in x if v < 0]
    cube_pos, wit_pos = _family_best(pos, m, cap, spec.admissible_only, budget)
    cube_neg, wit_neg = _family_best(neg, m, cap, spec.admissible_only, budget)
    cube = cube_pos + cube_neg
    witness = {"plus": wit_pos, "minus": wit_neg}

    # certified tail for levels above the cap; beyond the supplied list the
    # declared growth law of the m-sequence extends it
    supp = len(x)
    if cap + 1 <= len(m) - 1:
        m_next = m[cap + 1]
    else:
        m_next = (2 * m[cap]) ** 4 + 1
    inv_sqrt_hi = 1 / sqrt_bounds(m_next, 40)[0]
    delta = supp * x.sup_abs() * 2 * inv_sqrt_hi
    tail = delta * root_bounds(supp, 3, 40)[1]

    ival = cube.interval(bits)
    lo = root_bounds(max(ZERO, ival.lo), 3, bits)[0]
    hi = root_bounds(ival.hi, 3, bits)[1]
    value = lo
    radius = (hi - lo) + tail
    return NormResult(value, radius, witness=witness, power=(3, cube))
