"""Exact Borel sets on [0, 1) as finite unions of half-open rational intervals.

Every set is stored in a unique canonical form: intervals sorted, pairwise
disjoint, and never abutting.  Endpoints are :class:`fractions.Fraction`, so
set algebra and Lebesgue measure are exact.  "Null set" therefore means
"empty" in this model; a nonempty set of measure zero cannot be represented.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "Rational",
    "as_rational",
    "Interval",
    "BorelSet",
    "RefinementPartition",
    "EMPTY",
    "FULL",
    "canonicalize",
    "combine",
    "complement",
    "measure",
    "refinement",
    "grid_cell",
]

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(value) -> Fraction:
    """Coerce ``value`` to an exact :class:`Fraction`.

    Accepts integers, fractions, ``"p/q"`` strings and ``(p, q)`` pairs.
    Floats are rejected: they would silently smuggle binary rounding into
    the set algebra.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, (tuple, list)) and len(value) == 2:
        num, den = value
        if not isinstance(num, int) or not isinstance(den, int) or den <= 0:
            raise DomainError(f"bad rational pair {value!r}")
        return Fraction(num, den)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True, order=True)
class Interval:
    """Half-open interval ``[lo, hi)`` with ``0 <= lo < hi <= 1``."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_rational(self.lo), as_rational(self.hi)
        if lo < 0 or hi > 1:
            raise DomainError(f"endpoint outside [0,1]: [{lo}, {hi})")
        if not lo < hi:
            raise DomainError(f"empty or reversed interval [{lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x < self.hi

    def to_json(self) -> list[int]:
        return [self.lo.numerator, self.lo.denominator, self.hi.numerator, self.hi.denominator]

    @classmethod
    def from_json(cls, quad: Sequence[int]) -> "Interval":
        if len(quad) != 4 or not all(isinstance(v, int) and not isinstance(v, bool) for v in quad):
            raise DomainError(f"interval must be four integers, got {quad!r}")
        if quad[1] <= 0 or quad[3] <= 0:
            raise DomainError(f"nonpositive denominator in {quad!r}")
        return cls(Fraction(quad[0], quad[1]), Fraction(quad[2], quad[3]))

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi})"


def _merge_sorted(pairs: Iterable[tuple[Fraction, Fraction]]) -> tuple[Interval, ...]:
    out: list[list[Fraction]] = []
    for lo, hi in pairs:
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1][1] = hi
        else:
            out.append([lo, hi])
    return tuple(Interval(lo, hi) for lo, hi in out)


class BorelSet:
    """Finite union of half-open rational subintervals of [0, 1).

    Instances are immutable and hashable; equality is equality of the
    canonical interval tuples, hence of indicator functions.
    """

    __slots__ = ("_intervals", "_los")

    def __init__(self, intervals: Iterable = ()):
        items = []
        for iv in intervals:
            if not isinstance(iv, Interval):
                lo, hi = iv
                iv = Interval(lo, hi)
            items.append((iv.lo, iv.hi))
        items.sort()
        self._set(_merge_sorted(items))

    def _set(self, intervals: tuple[Interval, ...]):
        self._intervals = intervals
        self._los = [iv.lo for iv in intervals]

    @classmethod
    def _from_canonical(cls, intervals: tuple[Interval, ...]) -> "BorelSet":
        obj = cls.__new__(cls)
        obj._set(intervals)
        return obj

    @classmethod
    def interval(cls, lo, hi) -> "BorelSet":
        return cls._from_canonical((Interval(lo, hi),))

    @property
    def intervals(self) -> tuple[Interval, ...]:
        return self._intervals

    def endpoints(self) -> set[Fraction]:
        pts = set()
        for iv in self._intervals:
            pts.add(iv.lo)
            pts.add(iv.hi)
        return pts

    def measure(self) -> Fraction:
        return sum((iv.length for iv in self._intervals), _ZERO)

    def is_empty(self) -> bool:
        return not self._intervals

    def is_full(self) -> bool:
        return self == FULL

    def __bool__(self) -> bool:
        return bool(self._intervals)

    def __contains__(self, x) -> bool:
        pos = bisect_right(self._los, x) - 1
        return pos >= 0 and x < self._intervals[pos].hi

    def covers(self, cell: Interval) -> bool:
        """True when ``cell`` is a subset of this set."""
        pos = bisect_right(self._los, cell.lo) - 1
        return pos >= 0 and cell.hi <= self._intervals[pos].hi

    def issubset(self, other: "BorelSet") -> bool:
        return all(other.covers(iv) for iv in self._intervals)

    __le__ = issubset

    def __ge__(self, other: "BorelSet") -> bool:
        return other.issubset(self)

    def __or__(self, other: "BorelSet") -> "BorelSet":
        return combine("union", self, other)

    def __and__(self, other: "BorelSet") -> "BorelSet":
        return combine("intersect", self, other)

    def __sub__(self, other: "BorelSet") -> "BorelSet":
        return combine("difference", self, other)

    def __invert__(self) -> "BorelSet":
        return complement(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BorelSet):
            return NotImplemented
        return self._intervals == other._intervals

    def __hash__(self) -> int:
        return hash(self._intervals)

    def __repr__(self) -> str:
        if not self._intervals:
            return "BorelSet(∅)"
        return "BorelSet(" + " ∪ ".join(str(iv) for iv in self._intervals) + ")"

    def to_json(self) -> list[list[int]]:
        return [iv.to_json() for iv in self._intervals]

    @classmethod
    def from_json(cls, data) -> "BorelSet":
        if not isinstance(data, list):
            raise DomainError(f"a Borel set is a list of 4-tuples, got {type(data).__name__}")
        return canonicalize([Interval.from_json(q) for q in data])


EMPTY = BorelSet._from_canonical(())
FULL = BorelSet._from_canonical((Interval(_ZERO, _ONE),))


def canonicalize(intervals: Iterable) -> BorelSet:
    """Canonical form of the union of ``intervals`` (Interval or (lo, hi) pairs)."""
    return BorelSet(intervals)


_OPS = {
    "union": lambda p, q: p or q,
    "intersect": lambda p, q: p and q,
    "difference": lambda p, q: p and not q,
    "xor": lambda p, q: p != q,
}


def combine(op: str, a: BorelSet, b: BorelSet) -> BorelSet:
    """Boolean combination of two canonical sets; ``op`` in union/intersect/difference."""
    try:
        f = _OPS[op]
    except KeyError:
        raise DomainError(f"unknown set operation {op!r}") from None
    pts = sorted(a.endpoints() | b.endpoints())
    pieces = []
    for lo, hi in zip(pts, pts[1:]):
        if f(lo in a, lo in b):
            pieces.append((lo, hi))
    return BorelSet._from_canonical(_merge_sorted(pieces))


def complement(a: BorelSet) -> BorelSet:
    """Complement in [0, 1)."""
    pieces = []
    cursor = _ZERO
    for iv in a.intervals:
        if iv.lo > cursor:
            pieces.append(Interval(cursor, iv.lo))
        cursor = iv.hi
    if cursor < _ONE:
        pieces.append(Interval(cursor, _ONE))
    return BorelSet._from_canonical(tuple(pieces))


def measure(a: BorelSet) -> Fraction:
    return a.measure()


def union_all(sets: Iterable[BorelSet]) -> BorelSet:
    pieces = []
    for s in sets:
        pieces.extend((iv.lo, iv.hi) for iv in s.intervals)
    pieces.sort()
    return BorelSet._from_canonical(_merge_sorted(pieces))


def intersect_all(sets: Iterable[BorelSet]) -> BorelSet:
    out = FULL
    for s in sets:
        out = out & s
        if not out:
            break
    return out


class RefinementPartition:
    """Consecutive cells exhausting [0, 1), cut at every endpoint of a family."""

    __slots__ = ("points", "cells")

    def __init__(self, points: Iterable[Fraction]):
        pts = sorted(set(points) | {_ZERO, _ONE})
        self.points: tuple[Fraction, ...] = tuple(pts)
        self.cells: tuple[Interval, ...] = tuple(Interval(lo, hi) for lo, hi in zip(pts, pts[1:]))

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __repr__(self) -> str:
        return f"RefinementPartition({', '.join(str(c) for c in self.cells)})"

    def locate(self, x) -> int:
        """Index of the cell containing ``x``."""
        x = as_rational(x)
        if not (_ZERO <= x < _ONE):
            raise DomainError(f"point {x} outside [0,1)")
        return bisect_right(self.points, x) - 1

    def indicator(self, s: BorelSet) -> np.ndarray:
        """Boolean vector: which cells lie inside ``s``.

        ``s`` must be a union of whole cells (true for every generating member).
        """
        out = np.zeros(len(self.cells), dtype=bool)
        for iv in s.intervals:
            i0 = bisect_left(self.points, iv.lo)
            i1 = bisect_left(self.points, iv.hi)
            if self.points[i0] != iv.lo or i1 >= len(self.points) or self.points[i1] != iv.hi:
                raise DomainError(f"{s!r} is not a union of refinement cells")
            out[i0:i1] = True
        return out

    def union_of(self, mask) -> BorelSet:
        """Borel set formed by the cells selected by a boolean mask."""
        return BorelSet._from_canonical(
            _merge_sorted((c.lo, c.hi) for c, keep in zip(self.cells, mask) if keep)
        )

    def refines(self, s: BorelSet) -> bool:
        return s.endpoints() <= set(self.points)


def refinement(family: Iterable[BorelSet]) -> RefinementPartition:
    """Minimal partition of [0, 1) in which every member is a union of cells."""
    pts: set[Fraction] = set()
    for s in family:
        pts |= s.endpoints()
    return RefinementPartition(pts)


def grid_cell(q: int, m: int) -> Interval:
    """Grid cell ``q`` (1-based) of an ``m``-cell grid: ``[(q-1)/m, q/m)``."""
    if not 1 <= q <= m:
        raise DomainError(f"cell {q} outside 1..{m}")
    return Interval(Fraction(q - 1, m), Fraction(q, m))
