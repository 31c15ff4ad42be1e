"""Membership of a model operator in the algebra of an extended system."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..borel import BorelSet, union_all
from ..errors import AlignmentError, DomainError, ShapeError
from ..tsys.system import ExtTriSystem
from .seminorms import cell_profile, diag_seminorm, liminal_limits
from .space import BlockOperator, grid_cells_of, nest_violations

__all__ = [
    "CellViolation",
    "ConditionResult",
    "MembershipReport",
    "membership",
    "is_larson_member",
    "larson_exception",
    "InequalityRecord",
    "product_inequality_check",
]


@dataclass(frozen=True, order=True)
class CellViolation:
    indices: tuple[int, ...]
    cell: int
    value: float

    def to_json(self) -> dict:
        return {"indices": list(self.indices), "cell": self.cell, "value": self.value}


@dataclass(frozen=True)
class ConditionResult:
    violations: tuple[CellViolation, ...]
    exception_set: BorelSet

    @property
    def exception_measure(self) -> Fraction:
        return self.exception_set.measure()

    def to_json(self) -> dict:
        return {
            "violations": [v.to_json() for v in self.violations],
            "exception_set": self.exception_set.to_json(),
            "exception_measure": str(self.exception_measure),
        }


@dataclass(frozen=True)
class MembershipReport:
    condition1: ConditionResult
    condition2: ConditionResult
    condition3: ConditionResult
    nest_violations: tuple[tuple[int, int], ...]
    tol: float
    eta: Fraction
    w_floor: int

    @property
    def member(self) -> bool:
        if self.nest_violations:
            return False
        return all(c.exception_measure <= self.eta for c in self.conditions)

    @property
    def conditions(self) -> tuple[ConditionResult, ConditionResult, ConditionResult]:
        return (self.condition1, self.condition2, self.condition3)

    def failing(self) -> list[int]:
        """Numbers of the conditions whose exception measure exceeds the budget."""
        return [n for n, c in enumerate(self.conditions, 1) if c.exception_measure > self.eta]

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "tol": self.tol,
            "eta": str(self.eta),
            "w_floor": self.w_floor,
            "nest_violations": [list(p) for p in self.nest_violations],
            "condition1": self.condition1.to_json(),
            "condition2": self.condition2.to_json(),
            "condition3": self.condition3.to_json(),
        }


def _cells_mask(s: BorelSet, m: int) -> np.ndarray:
    mask = np.zeros(m, dtype=bool)
    try:
        cells = grid_cells_of(s, m)
    except AlignmentError:
        raise AlignmentError(f"system set {s!r} is not aligned with the {m}-cell grid") from None
    mask[np.asarray(cells, dtype=int) - 1] = True
    return mask


def _cells_set(cells, m: int) -> BorelSet:
    return union_all(BorelSet.interval(Fraction(q - 1, m), Fraction(q, m)) for q in cells)


def _condition(found: list[CellViolation], m: int) -> ConditionResult:
    found.sort()
    return ConditionResult(tuple(found), _cells_set({v.cell for v in found}, m))


def membership(X: BlockOperator, sys_: ExtTriSystem, tol: float = 1e-9, eta=0, w_floor: int = 1) -> MembershipReport:
    """Check the three seminorm conditions cell by cell.

    A cell outside ``S[i][j]`` (resp. ``R_i``, ``C_j``) where the block
    seminorm (resp. reported row or column liminal value) exceeds ``tol``
    is a violation.  The operator is a member when it lies in the nest
    algebra and each condition's violating cells have total measure at most
    ``eta``.
    """
    space = X.space
    k, m = space.k, space.m
    if sys_.size != k:
        raise ShapeError(f"system has {sys_.size} indices but the space has k={k} blocks")
    eta = Fraction(eta)
    if eta < 0:
        raise DomainError("eta must be nonnegative")
    S = [[_cells_mask(sys_.s(i, j), m) for j in range(1, k + 1)] for i in range(1, k + 1)]
    R = [_cells_mask(sys_.r(i), m) for i in range(1, k + 1)]
    C = [_cells_mask(sys_.c(j), m) for j in range(1, k + 1)]

    c1: list[CellViolation] = []
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            outside = ~S[i - 1][j - 1]
            if not outside.any():
                continue
            prof = cell_profile(X, w_floor, [i], [j])
            for q in np.flatnonzero(outside & (prof > tol)):
                c1.append(CellViolation((i, j), int(q) + 1, float(prof[q])))

    c2: list[CellViolation] = []
    c3: list[CellViolation] = []
    if k >= 2:
        for idx in range(1, k + 1):
            for axis, sets, bucket in (("row", R, c2), ("col", C, c3)):
                outside = ~sets[idx - 1]
                if not outside.any():
                    continue
                lim = liminal_limits(X, axis, idx, w_floor)
                for q in np.flatnonzero(outside & (lim > tol)):
                    bucket.append(CellViolation((idx,), int(q) + 1, float(lim[q])))

    return MembershipReport(
        _condition(c1, m),
        _condition(c2, m),
        _condition(c3, m),
        tuple(nest_violations(X, tol)),
        tol,
        eta,
        w_floor,
    )


def larson_exception(X: BlockOperator, tol: float = 1e-9) -> BorelSet:
    """Cells where the single-cell seminorm of ``X`` exceeds ``tol``."""
    prof = cell_profile(X, 1)
    return _cells_set((int(q) + 1 for q in np.flatnonzero(prof > tol)), X.space.m)


def is_larson_member(X: BlockOperator, tol: float = 1e-9, eta=0) -> bool:
    """Single-cell seminorm at most ``tol`` off a set of measure at most ``eta``."""
    return larson_exception(X, tol).measure() <= Fraction(eta)


@dataclass(frozen=True)
class InequalityRecord:
    i: int
    j: int
    cell: int
    r: int
    w_floor: int
    left: float
    terms: tuple[float, ...]
    remainder: float

    @property
    def right(self) -> float:
        return float(sum(self.terms) + self.remainder)

    @property
    def holds(self) -> bool:
        return self.left <= self.right + 1e-9

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "cell": self.cell,
            "r": self.r,
            "w_floor": self.w_floor,
            "left": self.left,
            "right": self.right,
            "terms": list(self.terms),
            "remainder": self.remainder,
            "holds": self.holds,
        }


def product_inequality_check(
    X: BlockOperator, Y: BlockOperator, i: int, j: int, cell: int, r: int, w_floor: int = 1
) -> InequalityRecord:
    """Compare the block seminorm of ``E_i X Y E_j`` with its split through ``M_r``.

    The right side sums ``i(E_i X E_l) i(E_l Y E_j)`` over ``l <= r`` and adds
    ``i(E_i X M_r^perp) i(M_r^perp Y E_j)``.
    """
    k = X.space.k
    if Y.space != X.space:
        raise ShapeError("operators live on different model spaces")
    if not 0 <= r < k:
        raise DomainError(f"r must satisfy 0 <= r < k={k}")
    left = diag_seminorm(X @ Y, cell, w_floor, [i], [j])
    terms = tuple(
        diag_seminorm(X, cell, w_floor, [i], [l]) * diag_seminorm(Y, cell, w_floor, [l], [j])
        for l in range(1, r + 1)
    )
    tail = list(range(r + 1, k + 1))
    remainder = diag_seminorm(X, cell, w_floor, [i], tail) * diag_seminorm(Y, cell, w_floor, tail, [j])
    return InequalityRecord(i, j, cell, r, w_floor, left, terms, remainder)
