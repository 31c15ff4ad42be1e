"""Pointwise orders and cuts induced by an extended system; maximality and completion.

At every refinement cell an extended system induces a partial order on the
indices (``i`` below ``j`` when the cell lies in ``S[i][j]``) together with a
cut ``(A, B)``: ``A`` collects the indices whose column set covers the cell,
``B`` those whose row set does.

A finite model only sees a truncation of an infinite index set.  Cuts with
``A`` and ``B`` disjoint cannot be maximal for a finite index set, but they
are the trace of a cut at a missing point of the ambient order (a point at
infinity, or an irrational gap for the rationals).  ``truncated`` mode
accepts exactly those traces that the template's order type allows.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..borel import FULL, BorelSet, Interval, as_rational, union_all
from ..errors import DomainError, InvalidInputError
from .system import AxiomReport, ExtTriSystem, TriSystem, Violation, _indicators, check_extended

log = logging.getLogger(__name__)

__all__ = [
    "Cut",
    "VIRTUAL_TAGS",
    "ADMISSIBLE_VIRTUAL",
    "induced_cut_at",
    "induced_cuts",
    "is_maximal",
    "complete_to_maximal",
]

A_EMPTY = "A-empty-at-infinity"
B_EMPTY = "B-empty-at-infinity"
GAP = "gap"
VIRTUAL_TAGS = ("none", A_EMPTY, B_EMPTY, GAP)

# Disjoint, exhaustive cuts that are legitimate traces of a maximal cut of the
# ambient order.  A prefix of N or of a well-ordered set only misses the point
# above everything; Z also misses the point below everything; Q has gaps too.
ADMISSIBLE_VIRTUAL = {
    "finite": frozenset(),
    "nat": frozenset({A_EMPTY}),
    "well-ordered": frozenset({A_EMPTY}),
    "int": frozenset({A_EMPTY, B_EMPTY}),
    "rat": frozenset({A_EMPTY, B_EMPTY, GAP}),
}


@dataclass(frozen=True, eq=False)
class Cut:
    """Order and cut induced on one refinement cell (indices are 1-based)."""

    cell: Interval
    relation: np.ndarray
    A: frozenset[int]
    B: frozenset[int]
    virtual: str = "none"
    kind: str = "finite"

    def leq(self, i: int, j: int) -> bool:
        return bool(self.relation[i - 1, j - 1])

    @property
    def size(self) -> int:
        return self.relation.shape[0]

    def is_linear(self) -> bool:
        rel = self.relation
        return bool(np.all(rel | rel.T))

    def minimum(self, subset) -> int | None:
        for a in sorted(subset):
            if all(self.leq(a, b) for b in subset):
                return a
        return None

    def maximum(self, subset) -> int | None:
        for a in sorted(subset):
            if all(self.leq(b, a) for b in subset):
                return a
        return None

    def order(self) -> list[int]:
        """Indices sorted by the induced order (requires linearity)."""
        n = self.size
        return sorted(range(1, n + 1), key=lambda i: int(self.relation[:, i - 1].sum()))

    def to_json(self) -> dict:
        return {
            "cell": self.cell.to_json(),
            "A": sorted(self.A),
            "B": sorted(self.B),
            "virtual": self.virtual,
            "kind": self.kind,
            "linear": self.is_linear(),
        }


def _virtual_tag(A: frozenset, B: frozenset, n: int) -> str:
    if A & B or len(A | B) != n:
        return "none"
    if not A:
        return A_EMPTY
    if not B:
        return B_EMPTY
    return GAP


def _cut_from_indicators(S, R, C, c: int, cell: Interval, kind: str) -> Cut:
    n = S.shape[0]
    rel = S[:, :, c].copy()
    rel.setflags(write=False)
    A = frozenset(int(i) + 1 for i in np.flatnonzero(C[:, c]))
    B = frozenset(int(i) + 1 for i in np.flatnonzero(R[:, c]))
    return Cut(cell, rel, A, B, _virtual_tag(A, B, n), kind)


def induced_cuts(sys_: ExtTriSystem) -> list[Cut]:
    """The cut on every cell of the system's refinement."""
    part = sys_.refinement()
    S, R, C = _indicators(sys_, part)
    tmpl = sys_.template
    return [_cut_from_indicators(S, R, C, c, cell, tmpl.kind_at(cell)) for c, cell in enumerate(part.cells)]


def induced_cut_at(sys_: ExtTriSystem, x) -> Cut:
    """Cut on the refinement cell containing the point ``x`` of [0, 1)."""
    x = as_rational(x)
    if not 0 <= x < 1:
        raise DomainError(f"point {x} outside [0,1)")
    part = sys_.refinement()
    c = part.locate(x)
    S, R, C = _indicators(sys_, part)
    cell = part.cells[c]
    return _cut_from_indicators(S, R, C, c, cell, sys_.template.kind_at(cell))


def _cut_violations(cut: Cut, mode: str) -> list[Violation]:
    n = cut.size
    out = []
    linear = True
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if not (cut.leq(i, j) or cut.leq(j, i)):
                out.append(Violation("linear", (i, j), cut.cell))
                linear = False
    missing = sorted(set(range(1, n + 1)) - (cut.A | cut.B))
    out.extend(Violation("cover", (i,), cut.cell) for i in missing)
    if not linear or missing:
        return out
    if cut.A & cut.B:
        lo, hi = cut.minimum(cut.A), cut.maximum(cut.B)
        if lo is None or lo != hi:
            out.append(Violation("cut", (), cut.cell))
        return out
    allowed = ADMISSIBLE_VIRTUAL[cut.kind] if mode == "truncated" else frozenset()
    if cut.virtual not in allowed:
        out.append(Violation("cut", (), cut.cell))
    return out


def is_maximal(sys_: ExtTriSystem, mode: str = "finite", *, verbose: bool = False) -> AxiomReport:
    """Check the per-cell maximality conditions.

    On each cell the order must be linear, every index must lie in ``A`` or
    ``B``, and the cut must either meet in a single index (the least element
    of ``A`` equals the greatest of ``B``) or, in ``truncated`` mode only, be
    a disjoint cut the template's order type admits at a missing point.
    """
    if mode not in ("finite", "truncated"):
        raise DomainError(f"mode must be 'finite' or 'truncated', got {mode!r}")
    pre = check_extended(sys_)
    if not pre.passed:
        raise InvalidInputError("is_maximal needs an extended triangular system", report=pre)
    out = []
    seen = set()
    for cut in induced_cuts(sys_):
        for v in _cut_violations(cut, mode):
            key = (v.axiom, v.indices)
            if verbose or key not in seen:
                seen.add(key)
                out.append(v)
    return AxiomReport(tuple(sorted(out)), kind=f"maximal-{mode}")


def default_mode(sys_: ExtTriSystem) -> str:
    return "finite" if sys_.template.kind == "finite" else "truncated"


def _nonadmissible(mode: str, sys_: ExtTriSystem, R: Sequence[BorelSet], C: Sequence[BorelSet]) -> BorelSet:
    """Where a disjoint exhaustive cut would still be non-maximal."""
    if mode == "finite":
        return FULL
    any_a = union_all(C)
    any_b = union_all(R)
    pieces = []
    for region, kind in sys_.template.kind_partition():
        if kind in ("nat", "well-ordered"):
            pieces.append(region & any_a)
        elif kind == "int":
            pieces.append(region & any_a & any_b)
        elif kind == "finite":
            pieces.append(region)
    return union_all(pieces)


def _linearize(S: list[list[BorelSet]], R: list[BorelSet], C: list[BorelSet]) -> None:
    n = len(S)
    for i0 in range(n):
        for j0 in range(n):
            if i0 == j0:
                continue
            gap = ~(S[i0][j0] | S[j0][i0])
            if not gap:
                continue
            new = ~S[j0][i0]
            S[i0][j0] = new
            # Transitive closure of adding i0 <= j0.  Column i0 and row j0 are
            # untouched by these updates, so in-place iteration is safe.
            for i in range(n):
                left = S[i][i0] & new
                if not left:
                    continue
                for j in range(n):
                    add = left & S[j0][j]
                    if add and not add <= S[i][j]:
                        S[i][j] = S[i][j] | add
            oldR, oldC = list(R), list(C)
            for i in range(n):
                R[i] = union_all(S[i][b] & oldR[b] for b in range(n))
                C[i] = union_all(oldC[a] & S[a][i] for a in range(n))


def _fill_uncovered(S, R, C) -> None:
    n = len(S)
    for i0 in range(n):
        U = ~(R[i0] | C[i0])
        if not U:
            continue
        for i in range(n):
            R[i] = R[i] | (S[i][i0] & U)
            C[i] = C[i] | (S[i0][i] & U)


def _close_disjoint(S, R, C, mode: str, sys_: ExtTriSystem) -> None:
    n = len(S)
    for i0 in range(n):
        meet = union_all(R[i] & C[i] for i in range(n))
        bad = _nonadmissible(mode, sys_, R, C) - meet
        if not bad:
            return
        V = bad
        for a in range(n):
            V = V & (~C[a] | S[i0][a])
        for b in range(n):
            V = V & (~R[b] | S[b][i0])
        if not V:
            continue
        for i in range(n):
            R[i] = R[i] | (S[i][i0] & V)
            C[i] = C[i] | (S[i0][i] & V)


def complete_to_maximal(sys_: ExtTriSystem, mode: str | None = None, *, return_rounds: bool = False):
    """Enlarge an extended system to a maximal one, set by set.

    Stage 1 visits ordered pairs ``(i0, j0)`` row-major; where the two indices
    are incomparable it declares ``i0`` below ``j0``, closes the order
    transitively and pushes the cuts up and down the new order.  Stage 2
    visits each ``i0`` in turn and, wherever ``i0`` is in neither half of the
    cut, replaces the cut by the one meeting at ``i0``.  A final pass closes
    disjoint cuts that the chosen mode does not accept.  The stages repeat
    until nothing changes.

    ``mode`` defaults to ``finite`` for finite templates and ``truncated``
    otherwise.  With ``return_rounds`` the number of passes is returned too.
    """
    mode = mode or default_mode(sys_)
    if mode not in ("finite", "truncated"):
        raise DomainError(f"mode must be 'finite' or 'truncated', got {mode!r}")
    pre = check_extended(sys_)
    if not pre.passed:
        raise InvalidInputError("complete_to_maximal needs an extended triangular system", report=pre)
    S = [list(row) for row in sys_.S]
    R, C = list(sys_.R), list(sys_.C)
    rounds = 0
    while True:
        before = ([tuple(r) for r in S], tuple(R), tuple(C))
        _linearize(S, R, C)
        _fill_uncovered(S, R, C)
        _close_disjoint(S, R, C, mode, sys_)
        rounds += 1
        if before == ([tuple(r) for r in S], tuple(R), tuple(C)):
            break
    log.debug("completion converged after %d round(s)", rounds)
    out = ExtTriSystem(TriSystem(sys_.template, S), R, C)
    if out == sys_:
        out = sys_
    return (out, rounds) if return_rounds else out
