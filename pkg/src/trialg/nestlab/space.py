"""Discretized model space, block operators and the named projections.

The space is spanned by basis vectors ``e(q, i, ch)``: grid cell ``q`` of
``m``, block ``i`` of ``k`` and channel ``ch`` of ``c``, all 1-based, ordered
lexicographically.  A *link* from ``src`` to ``dst`` with weight ``w`` is the
rank-one operator ``e_src -> w * e_dst``.  Operators built from links keep
their link list, so compositions of fixtures stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from numbers import Number
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from ..borel import BorelSet, grid_cell
from ..errors import AlignmentError, DomainError, ShapeError
from ..tsys.system import IndexTemplate

__all__ = [
    "ModelSpace",
    "Link",
    "BlockOperator",
    "NestPrefix",
    "Block",
    "BlockPair",
    "Truncation",
    "Marker",
    "project",
    "grid_cells_of",
]

Basis = tuple[int, int, int]

# Operators up to this dimension keep a dense copy for fast slicing.
DENSE_LIMIT = 1024


@dataclass(frozen=True)
class ModelSpace:
    m: int
    k: int
    c: int
    template: IndexTemplate | None = None

    def __post_init__(self):
        for name in ("m", "k", "c"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < 1:
                raise DomainError(f"{name} must be a positive integer, got {v!r}")
        if self.template is None:
            object.__setattr__(self, "template", IndexTemplate.of("finite", self.k))
        elif self.template.size != self.k:
            raise ShapeError(f"template has {self.template.size} indices but k={self.k}")

    @property
    def dim(self) -> int:
        return self.m * self.k * self.c

    def index(self, q: int, i: int, ch: int) -> int:
        if not (1 <= q <= self.m and 1 <= i <= self.k and 1 <= ch <= self.c):
            raise DomainError(f"basis vector ({q},{i},{ch}) outside {self.m}x{self.k}x{self.c}")
        return ((q - 1) * self.k + (i - 1)) * self.c + (ch - 1)

    def basis(self, idx: int) -> Basis:
        rest, ch = divmod(idx, self.c)
        q, i = divmod(rest, self.k)
        return (q + 1, i + 1, ch + 1)

    def indices(self, cells: Iterable[int] | None = None, blocks: Iterable[int] | None = None) -> np.ndarray:
        """Sorted basis indices with cell in ``cells`` and block in ``blocks`` (default: all)."""
        qs = np.arange(self.m) if cells is None else np.asarray(sorted(cells), dtype=int) - 1
        bs = np.arange(self.k) if blocks is None else np.asarray(sorted(blocks), dtype=int) - 1
        if qs.size and (qs.min() < 0 or qs.max() >= self.m):
            raise DomainError(f"cell outside 1..{self.m}")
        if bs.size and (bs.min() < 0 or bs.max() >= self.k):
            raise DomainError(f"block outside 1..{self.k}")
        base = (qs[:, None] * self.k + bs[None, :]).ravel() * self.c
        return (base[:, None] + np.arange(self.c)[None, :]).ravel()

    def cell(self, q: int):
        return grid_cell(q, self.m)

    def to_json(self) -> dict:
        return {"m": self.m, "k": self.k, "c": self.c, "template": self.template.to_json()}


def grid_cells_of(K: BorelSet, m: int) -> list[int]:
    """1-based grid cells making up ``K``; ``K`` must be a union of whole cells."""
    cells = []
    for iv in K.intervals:
        lo, hi = iv.lo * m, iv.hi * m
        if lo.denominator != 1 or hi.denominator != 1:
            raise AlignmentError(f"{K!r} is not a union of 1/{m} grid cells")
        cells.extend(range(int(lo) + 1, int(hi) + 1))
    return cells


@dataclass(frozen=True, order=True)
class Link:
    """Rank-one map ``e_src -> weight * e_dst``."""

    src: Basis
    dst: Basis
    weight: Number = 1

    def to_json(self) -> dict:
        w = complex(self.weight)
        return {"from": list(self.src), "to": list(self.dst), "re": w.real, "im": w.imag}

    @classmethod
    def from_json(cls, data: Mapping) -> "Link":
        try:
            src = tuple(int(v) for v in data["from"])
            dst = tuple(int(v) for v in data["to"])
            re, im = float(data.get("re", 0.0)), float(data.get("im", 0.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed link {data!r}: {exc}") from None
        if len(src) != 3 or len(dst) != 3:
            raise DomainError(f"link endpoints must be [cell, block, channel]: {data!r}")
        w = complex(re, im) if im else (int(re) if re.is_integer() else re)
        return cls(src, dst, w)


def _merge_links(items: Iterable[tuple[Basis, Basis, Number]]) -> tuple[Link, ...]:
    acc: dict[tuple[Basis, Basis], Number] = {}
    for src, dst, w in items:
        key = (src, dst)
        acc[key] = acc.get(key, 0) + w
    return tuple(sorted(Link(s, d, w) for (s, d), w in acc.items() if w != 0))


class BlockOperator:
    """Operator on a :class:`ModelSpace`, optionally carrying an exact link list."""

    __slots__ = ("space", "matrix", "links", "__dict__")

    def __init__(self, space: ModelSpace, matrix, links: tuple[Link, ...] | None = None):
        if sp.issparse(matrix):
            mat = sp.csr_array(matrix, dtype=complex)
        else:
            mat = np.asarray(matrix, dtype=complex)
        if mat.shape != (space.dim, space.dim):
            raise ShapeError(f"matrix shape {mat.shape} does not match dimension {space.dim}")
        self.space = space
        self.matrix = mat
        self.links = links

    @classmethod
    def zeros(cls, space: ModelSpace) -> "BlockOperator":
        return cls.from_links(space, ())

    @classmethod
    def identity(cls, space: ModelSpace) -> "BlockOperator":
        return project(space, NestPrefix(space.m))

    @classmethod
    def from_links(cls, space: ModelSpace, links: Iterable) -> "BlockOperator":
        items = []
        for ln in links:
            if not isinstance(ln, Link):
                ln = Link(*ln)
            space.index(*ln.src)
            space.index(*ln.dst)
            items.append((tuple(ln.src), tuple(ln.dst), ln.weight))
        merged = _merge_links(items)
        rows = [space.index(*ln.dst) for ln in merged]
        cols = [space.index(*ln.src) for ln in merged]
        vals = [complex(ln.weight) for ln in merged]
        mat = sp.csr_array((vals, (rows, cols)), shape=(space.dim, space.dim), dtype=complex)
        return cls(space, mat, merged)

    @property
    def is_symbolic(self) -> bool:
        return self.links is not None

    @cached_property
    def dense(self) -> np.ndarray:
        if sp.issparse(self.matrix):
            return self.matrix.toarray()
        return self.matrix

    def block(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Dense submatrix ``X[rows][:, cols]``."""
        if not sp.issparse(self.matrix) or self.space.dim <= DENSE_LIMIT:
            return self.dense[np.ix_(rows, cols)]
        return self.matrix[rows][:, cols].toarray()

    def norm(self) -> float:
        return spectral_norm(self.dense)

    def _check(self, other: "BlockOperator"):
        if not isinstance(other, BlockOperator):
            return NotImplemented
        if other.space != self.space:
            raise ShapeError("operators live on different model spaces")
        return None

    def __matmul__(self, other: "BlockOperator") -> "BlockOperator":
        if self._check(other) is NotImplemented:
            return NotImplemented
        links = None
        if self.links is not None and other.links is not None:
            by_src: dict[Basis, list[Link]] = {}
            for ln in self.links:
                by_src.setdefault(ln.src, []).append(ln)
            links = _merge_links(
                (b.src, a.dst, a.weight * b.weight) for b in other.links for a in by_src.get(b.dst, ())
            )
        mat = self.matrix @ other.matrix
        return BlockOperator(self.space, mat, links)

    def __add__(self, other: "BlockOperator") -> "BlockOperator":
        if self._check(other) is NotImplemented:
            return NotImplemented
        links = None
        if self.links is not None and other.links is not None:
            links = _merge_links((ln.src, ln.dst, ln.weight) for ln in self.links + other.links)
        a, b = self.matrix, other.matrix
        if sp.issparse(a) != sp.issparse(b):
            a, b = self.dense, other.dense
        return BlockOperator(self.space, a + b, links)

    def __neg__(self) -> "BlockOperator":
        return self * -1

    def __sub__(self, other: "BlockOperator") -> "BlockOperator":
        return self + (-other)

    def __mul__(self, scalar) -> "BlockOperator":
        if not isinstance(scalar, Number):
            return NotImplemented
        links = None
        if self.links is not None:
            links = _merge_links((ln.src, ln.dst, ln.weight * scalar) for ln in self.links)
        return BlockOperator(self.space, self.matrix * complex(scalar), links)

    __rmul__ = __mul__

    def adjoint(self) -> "BlockOperator":
        links = None
        if self.links is not None:
            links = _merge_links((ln.dst, ln.src, _conj(ln.weight)) for ln in self.links)
        return BlockOperator(self.space, self.matrix.conj().T, links)

    @property
    def H(self) -> "BlockOperator":
        return self.adjoint()

    def allclose(self, other: "BlockOperator", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.dense, other.dense, atol=atol, rtol=0))

    def exactly_equals(self, other: "BlockOperator") -> bool:
        """Equality of link lists; both operators must be symbolic."""
        if self.links is None or other.links is None:
            raise DomainError("exact comparison needs link-list operators")
        return self.space == other.space and self.links == other.links

    def is_nest_member(self, tol: float = 0.0) -> bool:
        """True when every entry maps a cell into the same or an earlier cell."""
        return not nest_violations(self, tol)

    def __repr__(self) -> str:
        kind = f"{len(self.links)} links" if self.links is not None else "dense"
        s = self.space
        return f"BlockOperator(m={s.m}, k={s.k}, c={s.c}, {kind})"

    def to_json(self) -> dict:
        if self.links is None:
            raise DomainError("only link-list operators serialize to JSON")
        return {"space": self.space.to_json(), "links": [ln.to_json() for ln in self.links]}

    @classmethod
    def from_json(cls, data: Mapping) -> "BlockOperator":
        sp_ = data.get("space")
        if not isinstance(sp_, Mapping):
            raise DomainError("operator JSON needs a 'space' object")
        tmpl = IndexTemplate.from_json(sp_["template"]) if "template" in sp_ else None
        space = ModelSpace(int(sp_["m"]), int(sp_["k"]), int(sp_["c"]), tmpl)
        return cls.from_links(space, [Link.from_json(d) for d in data.get("links", [])])


def _conj(w):
    return w.conjugate() if isinstance(w, complex) else w


def spectral_norm(a: np.ndarray) -> float:
    """Largest singular value (LAPACK SVD); zero for empty or all-zero input."""
    if a.size == 0 or not a.any():
        return 0.0
    return float(np.linalg.norm(a, 2))


def nest_violations(X: BlockOperator, tol: float = 0.0) -> list[tuple[int, int]]:
    """``(dst cell, src cell)`` pairs where ``X`` maps a cell to a later one."""
    s = X.space
    mat = sp.coo_array(X.matrix) if sp.issparse(X.matrix) else sp.coo_array(X.dense)
    mask = np.abs(mat.data) > tol
    rows = mat.row[mask] // (s.k * s.c) + 1
    cols = mat.col[mask] // (s.k * s.c) + 1
    bad = rows > cols
    return sorted(set(zip(rows[bad].tolist(), cols[bad].tolist())))


# -- selectors --------------------------------------------------------------


@dataclass(frozen=True)
class NestPrefix:
    """Projection onto cells ``1..q`` (all blocks and channels)."""

    q: int


@dataclass(frozen=True)
class Block:
    """Projection onto block ``i``."""

    i: int


@dataclass(frozen=True)
class BlockPair:
    """Partial isometry carrying block ``j`` onto block ``i`` cell- and channel-wise."""

    i: int
    j: int


@dataclass(frozen=True)
class Truncation:
    """Projection onto blocks ``1..n``."""

    n: int


@dataclass(frozen=True)
class Marker:
    """``BlockPair(i, j)`` restricted to the grid cells of ``K``."""

    K: BorelSet
    i: int
    j: int


def _pair_links(space: ModelSpace, cells, i: int, j: int):
    return [((q, j, ch), (q, i, ch), 1) for q in cells for ch in range(1, space.c + 1)]


def project(space: ModelSpace, selector) -> BlockOperator:
    m, k = space.m, space.k

    def need(v, lo, hi, what):
        if not isinstance(v, (int, np.integer)) or not lo <= v <= hi:
            raise DomainError(f"{what} {v!r} outside {lo}..{hi}")

    all_cells = range(1, m + 1)
    if isinstance(selector, NestPrefix):
        need(selector.q, 0, m, "prefix cell")
        links = [l for i in range(1, k + 1) for l in _pair_links(space, range(1, selector.q + 1), i, i)]
    elif isinstance(selector, Block):
        need(selector.i, 1, k, "block")
        links = _pair_links(space, all_cells, selector.i, selector.i)
    elif isinstance(selector, BlockPair):
        need(selector.i, 1, k, "block")
        need(selector.j, 1, k, "block")
        links = _pair_links(space, all_cells, selector.i, selector.j)
    elif isinstance(selector, Truncation):
        need(selector.n, 0, k, "truncation")
        links = [l for i in range(1, selector.n + 1) for l in _pair_links(space, all_cells, i, i)]
    elif isinstance(selector, Marker):
        need(selector.i, 1, k, "block")
        need(selector.j, 1, k, "block")
        links = _pair_links(space, grid_cells_of(selector.K, m), selector.i, selector.j)
    else:
        raise DomainError(f"unknown selector {selector!r}")
    return BlockOperator.from_links(space, links)
