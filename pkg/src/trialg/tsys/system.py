"""Index templates, (extended) triangular systems and their axiom checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count

import numpy as np

from ..borel import EMPTY, FULL, BorelSet, Interval, RefinementPartition, refinement, union_all
from ..errors import DomainError, ShapeError

__all__ = [
    "KINDS",
    "IndexTemplate",
    "TriSystem",
    "ExtTriSystem",
    "Violation",
    "AxiomReport",
    "check_triangular",
    "check_extended",
    "farey_labels",
]

KINDS = ("finite", "nat", "int", "rat", "well-ordered")
INFINITE_KINDS = KINDS[1:]


def farey_labels(count_: int) -> list[Fraction]:
    """First ``count_`` rationals of (0, 1) in order of denominator, then numerator."""
    out: list[Fraction] = []
    seen: set[Fraction] = set()
    for q in count(2):
        for p in range(1, q):
            f = Fraction(p, q)
            if f not in seen:
                seen.add(f)
                out.append(f)
                if len(out) == count_:
                    return out
    return out  # pragma: no cover


def _default_labels(kind: str, size: int) -> list:
    if kind in ("finite", "nat"):
        return list(range(1, size + 1))
    if kind == "int":
        lo = -(size // 2)
        return list(range(lo, lo + size))
    if kind == "rat":
        return sorted(farey_labels(size))
    if kind == "well-ordered":
        first = (size + 1) // 2
        return [(0, b) for b in range(first)] + [(1, b) for b in range(size - first)]
    raise DomainError(f"unknown template kind {kind!r}")


def _normalize_label(label):
    if isinstance(label, bool):
        raise DomainError("boolean labels are not allowed")
    if isinstance(label, (tuple, list)):
        return tuple(int(v) for v in label)
    if isinstance(label, int):
        return label
    if isinstance(label, (Fraction, str)):
        f = Fraction(label)
        return int(f) if f.denominator == 1 else f
    raise DomainError(f"unsupported index label {label!r}")


@dataclass(frozen=True)
class IndexTemplate:
    """Ambient ordered index set and the finite stretch of it that is represented.

    ``kind`` names the order type of the full index set; ``labels`` name the
    represented indices in increasing order.  ``regions`` optionally override
    the order type on parts of [0, 1), which is how cell-varying orders
    (several order types blended on disjoint sets) are declared.
    """

    kind: str
    labels: tuple
    regions: tuple[tuple[BorelSet, str], ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown template kind {self.kind!r}; expected one of {KINDS}")
        labels = tuple(_normalize_label(v) for v in self.labels)
        if not labels:
            raise DomainError("a template needs at least one index")
        for a, b in zip(labels, labels[1:]):
            if not a < b:
                raise DomainError(f"labels must be strictly increasing: {a!r} !< {b!r}")
        if self.kind == "finite" and labels != tuple(range(1, len(labels) + 1)):
            raise DomainError("finite templates are labelled 1..size")
        regions = tuple((r, k) for r, k in self.regions)
        seen = EMPTY
        for region, kind in regions:
            if kind not in INFINITE_KINDS:
                raise DomainError(f"region kind must be an infinite order type, got {kind!r}")
            if region & seen:
                raise DomainError("template regions must be pairwise disjoint")
            seen = seen | region
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "regions", regions)

    @classmethod
    def of(cls, kind: str, size: int) -> "IndexTemplate":
        if size < 1:
            raise DomainError("template size must be positive")
        return cls(kind, tuple(_default_labels(kind, size)))

    @property
    def size(self) -> int:
        return len(self.labels)

    def position(self, label) -> int:
        """1-based index of ``label``."""
        label = _normalize_label(label)
        try:
            return self.labels.index(label) + 1
        except ValueError:
            raise DomainError(f"label {label!r} is not represented in this template") from None

    def kind_partition(self) -> list[tuple[BorelSet, str]]:
        """Disjoint (region, kind) pairs covering [0, 1)."""
        parts = [(r, k) for r, k in self.regions if r]
        rest = FULL - union_all(r for r, _ in parts)
        if rest:
            parts.append((rest, self.kind))
        return parts

    def kind_at(self, cell: Interval) -> str:
        for region, kind in self.regions:
            if region.covers(cell):
                return kind
        return self.kind

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, tuple):
                return list(v)
            if isinstance(v, Fraction):
                return f"{v.numerator}/{v.denominator}"
            return v

        out = {"kind": self.kind, "size": self.size, "labels": [enc(v) for v in self.labels]}
        if self.regions:
            out["regions"] = [{"kind": k, "set": r.to_json()} for r, k in self.regions]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "IndexTemplate":
        labels = data.get("labels")
        if labels is None:
            return cls.of(data["kind"], int(data["size"]))
        if "size" in data and int(data["size"]) != len(labels):
            raise ShapeError(f"template size {data['size']} does not match {len(labels)} labels")
        regions = tuple((BorelSet.from_json(r["set"]), r["kind"]) for r in data.get("regions", ()))
        return cls(data["kind"], tuple(labels), regions)


def _as_matrix(S, size: int | None = None) -> tuple[tuple[BorelSet, ...], ...]:
    rows = [tuple(row) for row in S]
    n = len(rows)
    if size is not None and n != size:
        raise ShapeError(f"S has {n} rows, template has {size} indices")
    for r, row in enumerate(rows, 1):
        if len(row) != n:
            raise ShapeError(f"ragged matrix: row {r} has {len(row)} entries, expected {n}")
        for s in row:
            if not isinstance(s, BorelSet):
                raise ShapeError(f"matrix entries must be BorelSet, got {type(s).__name__}")
    return tuple(rows)


def _as_vector(v, size: int, name: str) -> tuple[BorelSet, ...]:
    v = tuple(v)
    if len(v) != size:
        raise ShapeError(f"{name} has length {len(v)}, expected {size}")
    for s in v:
        if not isinstance(s, BorelSet):
            raise ShapeError(f"{name} entries must be BorelSet, got {type(s).__name__}")
    return v


@dataclass(frozen=True)
class TriSystem:
    template: IndexTemplate
    S: tuple[tuple[BorelSet, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "S", _as_matrix(self.S, self.template.size))

    @property
    def size(self) -> int:
        return self.template.size

    def s(self, i: int, j: int) -> BorelSet:
        """S_{i,j} with 1-based indices."""
        return self.S[i - 1][j - 1]


@dataclass(frozen=True)
class ExtTriSystem:
    """Triangular system together with row sets R and column sets C."""

    base: TriSystem
    R: tuple[BorelSet, ...]
    C: tuple[BorelSet, ...]

    def __post_init__(self):
        n = self.base.size
        object.__setattr__(self, "R", _as_vector(self.R, n, "R"))
        object.__setattr__(self, "C", _as_vector(self.C, n, "C"))

    @classmethod
    def build(cls, template: IndexTemplate, S, R=None, C=None) -> "ExtTriSystem":
        n = template.size
        R = (EMPTY,) * n if R is None else R
        C = (EMPTY,) * n if C is None else C
        return cls(TriSystem(template, S), R, C)

    @property
    def template(self) -> IndexTemplate:
        return self.base.template

    @property
    def S(self):
        return self.base.S

    @property
    def size(self) -> int:
        return self.base.size

    def s(self, i: int, j: int) -> BorelSet:
        return self.base.S[i - 1][j - 1]

    def r(self, i: int) -> BorelSet:
        return self.R[i - 1]

    def c(self, j: int) -> BorelSet:
        return self.C[j - 1]

    def sets(self) -> list[BorelSet]:
        out = [s for row in self.S for s in row]
        out.extend(self.R)
        out.extend(self.C)
        out.extend(r for r, _ in self.template.regions)
        return out

    def refinement(self) -> RefinementPartition:
        return refinement(self.sets())

    def extends(self, other: "ExtTriSystem") -> bool:
        """True when every set of ``other`` is contained in the matching set here."""
        if other.size != self.size:
            return False
        n = self.size
        return (
            all(other.S[i][j] <= self.S[i][j] for i in range(n) for j in range(n))
            and all(a <= b for a, b in zip(other.R, self.R))
            and all(a <= b for a, b in zip(other.C, self.C))
        )

    def to_json(self) -> dict:
        return {
            "template": self.template.to_json(),
            "S": [[s.to_json() for s in row] for row in self.S],
            "R": [s.to_json() for s in self.R],
            "C": [s.to_json() for s in self.C],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ExtTriSystem":
        template = IndexTemplate.from_json(data["template"])
        S = [[BorelSet.from_json(s) for s in row] for row in data["S"]]
        R = [BorelSet.from_json(s) for s in data["R"]] if "R" in data else None
        C = [BorelSet.from_json(s) for s in data["C"]] if "C" in data else None
        return cls.build(template, S, R, C)


@dataclass(frozen=True, order=True)
class Violation:
    axiom: str
    indices: tuple[int, ...]
    cell: Interval

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "indices": list(self.indices), "cell": self.cell.to_json()}


@dataclass(frozen=True)
class AxiomReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)
    kind: str = "extended"

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def to_json(self) -> dict:
        return {
            "check": self.kind,
            "passed": self.passed,
            "violations": [v.to_json() for v in self.violations],
        }


def _indicators(sys_: ExtTriSystem | TriSystem, part: RefinementPartition):
    n = sys_.size
    S = np.empty((n, n, len(part)), dtype=bool)
    for i in range(n):
        for j in range(n):
            S[i, j] = part.indicator(sys_.S[i][j])
    R = C = None
    if isinstance(sys_, ExtTriSystem):
        R = np.array([part.indicator(s) for s in sys_.R], dtype=bool).reshape(n, len(part))
        C = np.array([part.indicator(s) for s in sys_.C], dtype=bool).reshape(n, len(part))
    return S, R, C


def _collect(axiom: str, arr: np.ndarray, part: RefinementPartition, verbose: bool, mask=None):
    """Turn a boolean array (..., cell) into violations; indices become 1-based."""
    out = []
    idx = np.argwhere(arr)
    seen = set()
    for row in idx:
        key = tuple(int(v) + 1 for v in row[:-1])
        if mask is not None and not mask(key):
            continue
        if not verbose:
            if key in seen:
                continue
            seen.add(key)
        out.append(Violation(axiom, key, part.cells[int(row[-1])]))
    return out


def _triangular_violations(S, part, verbose):
    n = S.shape[0]
    out = []
    diag = ~S[np.arange(n), np.arange(n)]
    out += _collect("1", diag, part, verbose)
    both = S & np.transpose(S, (1, 0, 2))
    out += _collect("2", both, part, verbose, mask=lambda key: key[0] < key[1])
    trans = S[:, :, None, :] & S[None, :, :, :] & ~S[:, None, :, :]
    out += _collect("3", trans, part, verbose)
    return out


def _coerce_tri(sys_) -> TriSystem:
    if isinstance(sys_, (TriSystem, ExtTriSystem)):
        return sys_
    S = _as_matrix(sys_)
    return TriSystem(IndexTemplate.of("finite", max(len(S), 1)), S)


def check_triangular(sys_, *, verbose: bool = False) -> AxiomReport:
    """Check reflexivity, antisymmetry and transitivity on every refinement cell.

    Accepts a :class:`TriSystem`, an :class:`ExtTriSystem` (only S is
    inspected) or a raw square matrix of Borel sets.  Without ``verbose``
    only the first violating cell per (axiom, indices) is reported.
    """
    sys_ = _coerce_tri(sys_)
    part = refinement(s for row in sys_.S for s in row)
    S, _, _ = _indicators(TriSystem(sys_.template, sys_.S), part)
    return AxiomReport(tuple(sorted(_triangular_violations(S, part, verbose))), kind="triangular")


def check_extended(sys_: ExtTriSystem, mode: str = "extended", *, verbose: bool = False) -> AxiomReport:
    """Check the six extended-system axioms (``mode="nearly"`` drops the sixth)."""
    if mode not in ("extended", "nearly"):
        raise DomainError(f"mode must be 'extended' or 'nearly', got {mode!r}")
    if not isinstance(sys_, ExtTriSystem):
        raise ShapeError("check_extended needs an ExtTriSystem")
    part = sys_.refinement()
    S, R, C = _indicators(sys_, part)
    out = _triangular_violations(S, part, verbose)
    out += _collect("4", C[:, None, :] & S & ~C[None, :, :], part, verbose)
    out += _collect("5", S & R[None, :, :] & ~R[:, None, :], part, verbose)
    if mode == "extended":
        out += _collect("6", R[:, None, :] & C[None, :, :] & ~S, part, verbose)
    return AxiomReport(tuple(sorted(out)), kind=mode)


def full_or_empty(flag: bool) -> BorelSet:
    return FULL if flag else EMPTY


def constant_system(template: IndexTemplate, leq, in_A, in_B) -> ExtTriSystem:
    """System whose sets are all [0,1) or empty, from a fixed order and cut.

    ``leq(i, j)``, ``in_A(i)`` and ``in_B(i)`` receive 1-based positions.
    """
    n = template.size
    S = [[full_or_empty(i == j or leq(i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)]
    R = [full_or_empty(in_B(i)) for i in range(1, n + 1)]
    C = [full_or_empty(in_A(i)) for i in range(1, n + 1)]
    return ExtTriSystem.build(template, S, R, C)
