"""Finitely supported rational coefficient sequences.

FinVec is the universal vector representation for every norm oracle in
the package: a map from natural coordinate indices to nonzero rationals.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .rationals import ZERO


class FinVec:
    """Immutable finitely supported sequence of rationals, indexed by naturals."""

    __slots__ = ("entries", "support")

    def __init__(self, entries: Mapping[int, Fraction | int | str] | Iterable[tuple[int, Fraction]] = ()):
        if isinstance(entries, Mapping):
            items = entries.items()
        else:
            items = entries
        store: dict[int, Fraction] = {}
        for idx, val in items:
            if not isinstance(idx, int) or idx < 0:
                raise ValueError(f"coordinate index must be a natural, got {idx!r}")
            val = Fraction(val)
            if val:
                store[idx] = store.get(idx, ZERO) + val
        self.entries: dict[int, Fraction] = {i: v for i, v in sorted(store.items()) if v}
        self.support: tuple[int, ...] = tuple(self.entries)

    @staticmethod
    def unit(i: int) -> "FinVec":
        return FinVec({i: 1})

    @staticmethod
    def from_list(values: Iterable[Fraction | int | str], start: int = 0) -> "FinVec":
        return FinVec({start + i: Fraction(v) for i, v in enumerate(values)})

    @staticmethod
    def indicator(indices: Iterable[int]) -> "FinVec":
        return FinVec({i: 1 for i in indices})

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries.get(i, ZERO)

    def __iter__(self):
        return iter(self.entries.items())

    def __add__(self, other: "FinVec") -> "FinVec":
        out = dict(self.entries)
        for i, v in other.entries.items():
            out[i] = out.get(i, ZERO) + v
        return FinVec(out)

    def __sub__(self, other: "FinVec") -> "FinVec":
        return self + (-other)

    def __neg__(self) -> "FinVec":
        return FinVec({i: -v for i, v in self.entries.items()})

    def __mul__(self, scalar: Fraction | int) -> "FinVec":
        scalar = Fraction(scalar)
        return FinVec({i: v * scalar for i, v in self.entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, FinVec) and self.entries == other.entries

    def __hash__(self):
        return hash(tuple(self.entries.items()))

    def restrict(self, indices: Iterable[int]) -> "FinVec":
        keep = set(indices)
        return FinVec({i: v for i, v in self.entries.items() if i in keep})

    def suppress(self, indices: Iterable[int]) -> "FinVec":
        drop = set(indices)
        return FinVec({i: v for i, v in self.entries.items() if i not in drop})

    def abs(self) -> "FinVec":
        return FinVec({i: abs(v) for i, v in self.entries.items()})

    def inner(self, other: "FinVec") -> Fraction:
        small, big = (self, other) if len(self) <= len(other) else (other, self)
        return sum((v * big[i] for i, v in small), ZERO)

    def shift(self, offset: int) -> "FinVec":
        return FinVec({i + offset: v for i, v in self.entries.items()})

    def max_index(self) -> int:
        if not self.entries:
            raise ValueError("zero vector has no support")
        return self.support[-1]

    def min_index(self) -> int:
        if not self.entries:
            raise ValueError("zero vector has no support")
        return self.support[0]

    def sup_abs(self) -> Fraction:
        return max((abs(v) for v in self.entries.values()), default=ZERO)

    def l1(self) -> Fraction:
        return sum((abs(v) for v in self.entries.values()), ZERO)

    def power_sum(self, p: int) -> Fraction:
        """sum over support of |x_i|**p for an integer p >= 1."""
        return sum((abs(v) ** p for v in self.entries.values()), ZERO)

    def to_json(self) -> dict[str, str]:
        return {str(i): f"{v.numerator}/{v.denominator}" for i, v in self.entries.items()}

    @staticmethod
    def from_json(obj: Mapping[str, str]) -> "FinVec":
        return FinVec({int(k): Fraction(v) for k, v in obj.items()})

    def __repr__(self):
        inside = ", ".join(f"{i}: {v}" for i, v in self.entries.items())
        return f"FinVec({{{inside}}})"
