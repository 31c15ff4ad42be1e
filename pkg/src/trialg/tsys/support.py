"""Support sets of an operator family, read off the model's seminorms."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from ..borel import FULL, BorelSet, union_all
from ..errors import ParameterError, ShapeError
from .system import AxiomReport, ExtTriSystem, check_extended

__all__ = ["derive_support_system"]


def _cells(mask: np.ndarray, m: int) -> BorelSet:
    return union_all(BorelSet.interval(Fraction(q, m), Fraction(q + 1, m)) for q in np.flatnonzero(mask))


def derive_support_system(
    ops: Sequence,
    thresholds: Sequence[float] = (1.0,),
    tol: float = 1e-9,
    *,
    space=None,
    w_floor: int = 1,
) -> tuple[ExtTriSystem, AxiomReport]:
    """Collect where each operator's block and liminal seminorms reach a threshold.

    ``S[i][j]`` is the union, over operators and thresholds ``a``, of the
    cells where the seminorm of ``E_i X E_j`` is at least ``a - tol``;
    ``R`` and ``C`` come from the row and column liminal values the same
    way.  Diagonal sets are forced full.  Returns the system together with
    its nearly-mode axiom report.
    """
    from ..nestlab.seminorms import cell_profile, liminal_limits

    ops = list(ops)
    if not thresholds or any(a <= 0 for a in thresholds):
        raise ParameterError("thresholds must be a nonempty sequence of positive reals")
    if space is None:
        if not ops:
            raise ParameterError("an empty family needs an explicit model space")
        space = ops[0].space
    for X in ops:
        if X.space != space:
            raise ShapeError("operators live on different model spaces")
    m, k = space.m, space.k
    level = min(thresholds) - tol
    S = np.zeros((k, k, m), dtype=bool)
    R = np.zeros((k, m), dtype=bool)
    C = np.zeros((k, m), dtype=bool)
    for X in ops:
        for i in range(k):
            for j in range(k):
                S[i, j] |= cell_profile(X, w_floor, [i + 1], [j + 1]) >= level
        if k >= 2:
            for i in range(k):
                R[i] |= liminal_limits(X, "row", i + 1, w_floor) >= level
                C[i] |= liminal_limits(X, "col", i + 1, w_floor) >= level
    sets = [[FULL if i == j else _cells(S[i, j], m) for j in range(k)] for i in range(k)]
    system = ExtTriSystem.build(space.template, sets, [_cells(r, m) for r in R], [_cells(c, m) for c in C])
    return system, check_extended(system, mode="nearly")
