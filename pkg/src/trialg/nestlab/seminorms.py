"""Window norms, the cell seminorm and its liminal and subset variants.

The cell seminorm at grid cell ``q`` with window floor ``w`` is the smallest
norm of a compression of ``X`` to ``w`` consecutive cells containing ``q``.
Compressing to a wider window never lowers the norm, so windows of width
exactly ``w`` suffice.  ``rows`` and ``cols`` restrict to block ranges, which
is how ``E_i X E_j``, ``E_i X M_n^perp`` and friends are evaluated without
forming the products.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from ..errors import DomainError, InsufficientTruncationError
from .space import BlockOperator, spectral_norm

__all__ = [
    "SeminormProfile",
    "window_norm",
    "window_norms",
    "cell_profile",
    "diag_seminorm",
    "liminal",
    "liminal_limits",
    "rinf_seminorm",
]

AXES = ("row", "col")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TRIALG_THREADS", "1")))
    except ValueError:
        return 1


def _blocks(k: int, sel) -> list[int]:
    if sel is None:
        return list(range(1, k + 1))
    out = sorted(set(int(b) for b in sel))
    if out and (out[0] < 1 or out[-1] > k):
        raise DomainError(f"block selection {out} outside 1..{k}")
    return out


def window_norm(X: BlockOperator, s_cell: int, t_cell: int, rows=None, cols=None) -> float:
    """Norm of ``X`` compressed to cells ``s_cell+1 .. t_cell``."""
    m = X.space.m
    if not (0 <= s_cell < t_cell <= m):
        raise DomainError(f"window ({s_cell}, {t_cell}] must satisfy 0 <= s < t <= {m}")
    rb, cb = _blocks(X.space.k, rows), _blocks(X.space.k, cols)
    if not rb or not cb:
        return 0.0
    cells = range(s_cell + 1, t_cell + 1)
    return spectral_norm(X.block(X.space.indices(cells, rb), X.space.indices(cells, cb)))


def window_norms(X: BlockOperator, width: int, rows=None, cols=None) -> np.ndarray:
    """Norms of every window of ``width`` cells; entry ``s`` covers cells ``s+1..s+width``."""
    m = X.space.m
    if not 1 <= width <= m:
        raise DomainError(f"window width {width} outside 1..{m}")
    starts = range(m - width + 1)
    rb, cb = _blocks(X.space.k, rows), _blocks(X.space.k, cols)
    if not rb or not cb:
        return np.zeros(len(starts))

    def one(s):
        cells = range(s + 1, s + width + 1)
        return spectral_norm(X.block(X.space.indices(cells, rb), X.space.indices(cells, cb)))

    n = _threads()
    if n > 1:
        with ThreadPoolExecutor(n) as pool:
            return np.fromiter(pool.map(one, starts), dtype=float, count=len(starts))
    return np.fromiter(map(one, starts), dtype=float, count=len(starts))


def cell_profile(X: BlockOperator, w_floor: int = 1, rows=None, cols=None) -> np.ndarray:
    """Cell seminorm at every grid cell (array of length ``m``, index ``q-1``)."""
    m = X.space.m
    wn = window_norms(X, w_floor, rows, cols)
    out = np.empty(m)
    for q in range(1, m + 1):
        lo = max(0, q - w_floor)
        hi = min(q - 1, m - w_floor)
        out[q - 1] = wn[lo : hi + 1].min()
    return out


def diag_seminorm(X: BlockOperator, cell: int, w_floor: int = 1, rows=None, cols=None) -> float:
    m = X.space.m
    if not 1 <= cell <= m:
        raise DomainError(f"cell {cell} outside 1..{m}")
    if not 1 <= w_floor <= m:
        raise DomainError(f"w_floor {w_floor} outside 1..{m}")
    best = np.inf
    for s in range(max(0, cell - w_floor), min(cell - 1, m - w_floor) + 1):
        best = min(best, window_norm(X, s, s + w_floor, rows, cols))
    return float(best)


@dataclass(frozen=True, eq=False)
class SeminormProfile:
    """Liminal values per cell along a truncation schedule.

    ``values[c, t]`` is the cell seminorm at ``cells[c]`` after truncating
    the first ``schedule[t]`` blocks.  ``limit`` holds the reported liminal
    value per cell.
    """

    axis: str
    index: int
    w_floor: int
    cells: tuple[int, ...]
    schedule: tuple[int, ...]
    values: np.ndarray
    limit: np.ndarray
    m: int = field(repr=False, default=0)

    def is_nonincreasing(self, tol: float = 1e-12) -> bool:
        if self.values.shape[1] < 2:
            return True
        return bool(np.all(np.diff(self.values, axis=1) <= tol))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["cell_lo", "cell_hi", "value", "truncation"])
        for ci, q in enumerate(self.cells):
            lo, hi = f"{q - 1}/{self.m}", f"{q}/{self.m}"
            for ti, n in enumerate(self.schedule):
                w.writerow([lo, hi, repr(float(self.values[ci, ti])), n])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "axis": self.axis,
            "index": self.index,
            "w_floor": self.w_floor,
            "cells": list(self.cells),
            "schedule": list(self.schedule),
            "values": self.values.tolist(),
            "limit": self.limit.tolist(),
        }


def _axis_blocks(axis: str, index: int, tail: Sequence[int]):
    if axis == "row":
        return [index], tail
    return tail, [index]


def liminal(X: BlockOperator, axis: str, index: int, cell: int | Iterable[int] | None = None, w_floor: int = 1) -> SeminormProfile:
    """Cell seminorm of ``E_i X M_n^perp`` (row) or ``M_n^perp X E_j`` (col) for ``n = 1..k-1``.

    The last block stands in for everything past the truncation.  When
    ``index`` is itself the last block nothing lies beyond it, so the
    reported limit is zero there; the profile is still returned in full.
    """
    if axis not in AXES:
        raise DomainError(f"axis must be 'row' or 'col', got {axis!r}")
    k, m = X.space.k, X.space.m
    if k < 2:
        raise InsufficientTruncationError("liminal profiles need at least two blocks")
    if not 1 <= index <= k:
        raise DomainError(f"index {index} outside 1..{k}")
    if cell is None:
        cells = tuple(range(1, m + 1))
    elif isinstance(cell, (int, np.integer)):
        cells = (int(cell),)
    else:
        cells = tuple(int(q) for q in cell)
    for q in cells:
        if not 1 <= q <= m:
            raise DomainError(f"cell {q} outside 1..{m}")
    schedule = tuple(range(1, k))
    vals = np.empty((len(cells), len(schedule)))
    for t, n in enumerate(schedule):
        rows, cols = _axis_blocks(axis, index, list(range(n + 1, k + 1)))
        prof = cell_profile(X, w_floor, rows, cols)
        vals[:, t] = [prof[q - 1] for q in cells]
    limit = vals[:, -1].copy() if index < k else np.zeros(len(cells))
    return SeminormProfile(axis, index, w_floor, cells, schedule, vals, limit, m)


def liminal_limits(X: BlockOperator, axis: str, index: int, w_floor: int = 1) -> np.ndarray:
    """Reported liminal value at every cell (length ``m``)."""
    k = X.space.k
    if k < 2:
        raise InsufficientTruncationError("liminal profiles need at least two blocks")
    if index == k:
        return np.zeros(X.space.m)
    rows, cols = _axis_blocks(axis, index, [k])
    return cell_profile(X, w_floor, rows, cols)


def rinf_seminorm(X: BlockOperator, axis: str, index: int, cell: int, s_min: int, w_floor: int = 1) -> float:
    """Smallest cell seminorm of ``E_i X M_S`` (row) or ``M_S X E_j`` (col) over ``|S| >= s_min``.

    Enlarging ``S`` cannot lower the value, so only subsets of size exactly
    ``s_min`` are enumerated.
    """
    if axis not in AXES:
        raise DomainError(f"axis must be 'row' or 'col', got {axis!r}")
    k = X.space.k
    if not 1 <= index <= k:
        raise DomainError(f"index {index} outside 1..{k}")
    if not 0 <= s_min <= k:
        raise DomainError(f"s_min {s_min} outside 0..{k}")
    if k > 16:
        raise DomainError("exact subset enumeration is limited to k <= 16")
    if s_min == 0:
        return 0.0
    best = np.inf
    for S in combinations(range(1, k + 1), s_min):
        rows, cols = _axis_blocks(axis, index, list(S))
        best = min(best, diag_seminorm(X, cell, w_floor, rows, cols))
        if best == 0.0:
            break
    return float(best)
