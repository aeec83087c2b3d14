"""Directed-rounding arithmetic over the rationals.

Every helper in this module returns Fraction bounds that certifiably
bracket the true real value.  No floats participate in any comparison;
floats appear only when a caller explicitly asks for a presentation
value.  These primitives back all "certified" norm evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

ZERO = Fraction(0)
ONE = Fraction(1)

# Presentation precision for irrational values reported as Fractions.
DEFAULT_BITS = 80


def sqrt_bounds(q: Fraction | int, bits: int = DEFAULT_BITS) -> tuple[Fraction, Fraction]:
    """Certified lo <= sqrt(q) <= hi with hi - lo <= 2**-bits."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("sqrt of negative rational")
    if q == 0:
        return ZERO, ZERO
    p, r = q.numerator, q.denominator
    scale = 1 << bits
    root = math.isqrt(p * r * scale * scale)
    den = r * scale
    lo = Fraction(root, den)
    return lo, Fraction(root + 1, den)


def nthroot_floor(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, k >= 1, by exact Newton iteration."""
    if n < 0 or k < 1:
        raise ValueError("nthroot_floor needs n >= 0, k >= 1")
    if n == 0 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def root_bounds(q: Fraction | int, k: int, bits: int = DEFAULT_BITS) -> tuple[Fraction, Fraction]:
    """Certified bounds on the k-th root of a nonnegative rational."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("root of negative rational")
    if q == 0:
        return ZERO, ZERO
    p, r = q.numerator, q.denominator
    scale = 1 << bits
    # (p/r)^{1/k} = (p * r^{k-1})^{1/k} / r
    root = nthroot_floor(p * r ** (k - 1) * scale ** k, k)
    den = r * scale
    return Fraction(root, den), Fraction(root + 1, den)


def cbrt_bounds(q: Fraction | int, bits: int = DEFAULT_BITS) -> tuple[Fraction, Fraction]:
    return root_bounds(q, 3, bits)


def log2_bounds(m: int, frac_bits: int = 48) -> tuple[Fraction, Fraction]:
    """Certified bounds on log2(m) for an integer m >= 1.

    Uses mantissa repeated squaring; cost is O(frac_bits) big-int squarings
    of fixed width, so astronomically large m are fine.
    """
    if m < 1:
        raise ValueError("log2 needs m >= 1")
    e = m.bit_length() - 1
    if m & (m - 1) == 0:
        return Fraction(e), Fraction(e)
    S = frac_bits + 16
    # bracket y0 = m / 2^e in [A,B]/2^S
    if e >= S:
        A = m >> (e - S)
        B = A + 1
    else:
        A = m << (S - e)
        B = A
    two = 1 << (S + 1)
    lo = Fraction(e)
    w = ONE
    for _ in range(frac_bits):
        w /= 2
        A = (A * A) >> S
        B = ((B * B) >> S) + 1
        if B < two:
            continue
        if A >= two:
            lo += w
            A >>= 1
            B = (B + 1) >> 1
        else:
            # bracket too wide to decide this bit
            return lo, lo + 2 * w
    return lo, lo + w


@dataclass(frozen=True)
class Ival:
    """Closed rational interval certifying lo <= true value <= hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(q: Fraction | int) -> "Ival":
        q = Fraction(q)
        return Ival(q, q)

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def radius(self) -> Fraction:
        return (self.hi - self.lo) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def is_point(self) -> bool:
        return self.lo == self.hi

    def __add__(self, other: "Ival | Fraction | int") -> "Ival":
        other = _as_ival(other)
        return Ival(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "Ival":
        return Ival(-self.hi, -self.lo)

    def __sub__(self, other: "Ival | Fraction | int") -> "Ival":
        return self + (-_as_ival(other))

    def __mul__(self, other: "Ival | Fraction | int") -> "Ival":
        other = _as_ival(other)
        cands = (self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi)
        return Ival(min(cands), max(cands))

    __rmul__ = __mul__

    def __truediv__(self, q: Fraction | int) -> "Ival":
        q = Fraction(q)
        if q == 0:
            raise ZeroDivisionError
        return self * (1 / q)

    def __abs__(self) -> "Ival":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Ival(ZERO, max(-self.lo, self.hi))

    def sqrt(self, bits: int = DEFAULT_BITS) -> "Ival":
        if self.lo < 0:
            raise ValueError("sqrt of interval reaching below 0")
        return Ival(sqrt_bounds(self.lo, bits)[0], sqrt_bounds(self.hi, bits)[1])

    def root(self, k: int, bits: int = DEFAULT_BITS) -> "Ival":
        if self.lo < 0:
            raise ValueError("root of interval reaching below 0")
        return Ival(root_bounds(self.lo, k, bits)[0], root_bounds(self.hi, k, bits)[1])

    def pow_int(self, k: int) -> "Ival":
        if k == 0:
            return Ival.point(1)
        if k < 0:
            raise ValueError("negative powers unsupported")
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def certainly_le(self, other: "Ival | Fraction | int") -> bool:
        return self.hi <= _as_ival(other).lo

    def certainly_lt(self, other: "Ival | Fraction | int") -> bool:
        return self.hi < _as_ival(other).lo

    def overlaps(self, other: "Ival | Fraction | int") -> bool:
        other = _as_ival(other)
        return self.lo <= other.hi and other.lo <= self.hi


def _as_ival(x) -> Ival:
    if isinstance(x, Ival):
        return x
    return Ival.point(Fraction(x))


def ival_max(items: Iterable[Ival]) -> Ival:
    items = list(items)
    if not items:
        raise ValueError("ival_max of empty collection")
    return Ival(max(v.lo for v in items), max(v.hi for v in items))


def ival_sum(items: Iterable[Ival]) -> Ival:
    out = Ival.point(0)
    for v in items:
        out = out + v
    return out


_SMALL_PRIMES: list[int] = []


def _primes_upto(n: int) -> list[int]:
    global _SMALL_PRIMES
    if _SMALL_PRIMES and _SMALL_PRIMES[-1] >= n:
        return _SMALL_PRIMES
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p:: p] = bytearray(len(sieve[p * p:: p]))
    _SMALL_PRIMES = [i for i, b in enumerate(sieve) if b]
    return _SMALL_PRIMES


@lru_cache(maxsize=None)
def squarefree_split(n: int) -> tuple[int, int]:
    """n = outer**2 * inner with inner squarefree (inner correct for all
    prime-square factors up to 10**5; larger radicands are additionally
    checked for being perfect squares)."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    outer, inner = 1, 1
    rem = n
    for p in _primes_upto(100_000):
        if p * p > rem:
            break
        while rem % (p * p) == 0:
            outer *= p
            rem //= p * p
        if rem % p == 0:
            inner *= p
            rem //= p
    if rem > 1:
        r = math.isqrt(rem)
        if r * r == rem:
            outer *= r
        else:
            inner *= rem
    return outer, inner


class RadicalSum:
    """Exact element of the field generated by square roots of naturals.

    Represented as sum of coeff * sqrt(radicand) over distinct squarefree
    radicands (radicand 1 is the rational part).  Signs of nonzero
    elements are decided exactly: distinct squarefree radicals are
    linearly independent over Q, so interval refinement terminates.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self.terms: dict[int, Fraction] = {}
        if terms:
            for rad, c in terms.items():
                if c:
                    self.terms[rad] = self.terms.get(rad, ZERO) + c
            self.terms = {r: c for r, c in self.terms.items() if c}

    @staticmethod
    def rational(q: Fraction | int) -> "RadicalSum":
        return RadicalSum({1: Fraction(q)})

    @staticmethod
    def sqrt_of(q: Fraction | int, coeff: Fraction | int = 1) -> "RadicalSum":
        """coeff * sqrt(q) for a nonnegative rational q."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("sqrt of negative rational")
        if q == 0:
            return RadicalSum()
        # sqrt(p/r) = sqrt(p*r)/r
        o, i = squarefree_split(q.numerator * q.denominator)
        return RadicalSum({i: Fraction(coeff) * Fraction(o, q.denominator)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return set(self.terms) <= {1}

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational value")
        return self.terms.get(1, ZERO)

    def __add__(self, other) -> "RadicalSum":
        other = _as_radsum(other)
        out = dict(self.terms)
        for r, c in other.terms.items():
            out[r] = out.get(r, ZERO) + c
        return RadicalSum(out)

    __radd__ = __add__

    def __neg__(self) -> "RadicalSum":
        return RadicalSum({r: -c for r, c in self.terms.items()})

    def __sub__(self, other) -> "RadicalSum":
        return self + (-_as_radsum(other))

    def __rsub__(self, other) -> "RadicalSum":
        return _as_radsum(other) + (-self)

    def __mul__(self, other) -> "RadicalSum":
        other = _as_radsum(other)
        out: dict[int, Fraction] = {}
        for r1, c1 in self.terms.items():
            for r2, c2 in other.terms.items():
                g = math.gcd(r1, r2)
                rad = (r1 // g) * (r2 // g)
                coeff = c1 * c2 * g
                out[rad] = out.get(rad, ZERO) + coeff
        return RadicalSum(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RadicalSum":
        out = RadicalSum.rational(1)
        for _ in range(k):
            out = out * self
        return out

    def interval(self, bits: int = DEFAULT_BITS) -> Ival:
        out = Ival.point(0)
        for r, c in self.terms.items():
            lo, hi = sqrt_bounds(r, bits)
            out = out + Ival(lo, hi) * c
        return out

    def sign(self) -> int:
        if not self.terms:
            return 0
        if self.is_rational():
            q = self.terms[1]
            return (q > 0) - (q < 0)
        if len(self.terms) == 2:
            (r1, c1), (r2, c2) = self.terms.items()
            if (c1 > 0) == (c2 > 0):
                return 1 if c1 > 0 else -1
            # opposite signs: the term with larger square dominates
            d = c1 * c1 * r1 - c2 * c2 * r2
            if d == 0:
                return 0
            c = c1 if d > 0 else c2
            return 1 if c > 0 else -1
        bits = 64
        while bits <= 1 << 16:
            iv = self.interval(bits)
            if iv.lo > 0:
                return 1
            if iv.hi < 0:
                return -1
            bits *= 2
        raise ArithmeticError("could not separate RadicalSum from zero")

    def cmp(self, other) -> int:
        return (self - _as_radsum(other)).sign()

    def __eq__(self, other) -> bool:
        return self.cmp(other) == 0

    def __lt__(self, other) -> bool:
        return self.cmp(other) < 0

    def __le__(self, other) -> bool:
        return self.cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self.cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self.cmp(other) >= 0

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "RadicalSum(0)"
        bits = " + ".join(f"({c})*sqrt({r})" if r != 1 else f"({c})"
                          for r, c in sorted(self.terms.items()))
        return f"RadicalSum({bits})"


def _as_radsum(x) -> RadicalSum:
    if isinstance(x, RadicalSum):
        return x
    return RadicalSum.rational(Fraction(x))


def compare_sqrt_sum(a_sq: RadicalSum, b_sq: RadicalSum, target: RadicalSum) -> int:
    """Exact sign of (sqrt(A) + sqrt(B) - T) given A, B >= 0 as RadicalSums.

    Needed for inequalities between sums of two nested square roots and a
    radical expression, e.g. two-sided renorming bounds in an l2 base.
    """
    if a_sq.sign() < 0 or b_sq.sign() < 0:
        raise ValueError("squared quantities must be nonnegative")
    if target.sign() < 0:
        return 1
    # compare (sqrt A + sqrt B)^2 = A + B + 2 sqrt(AB) with T^2
    d = target * target - a_sq - b_sq
    if d.sign() < 0:
        # lhs^2 = A + B + 2 sqrt(AB) >= A + B > T^2, both sides nonnegative
        return 1
    # sign of 2 sqrt(AB) - D with D >= 0: compare 4AB with D^2
    return (4 * (a_sq * b_sq) - d * d).sign()
