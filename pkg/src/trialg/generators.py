"""Seeded random structures for property sweeps and the command-line lab."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .borel import FULL, BorelSet, union_all
from .lemmas import interval_family
from .nestlab.space import BlockOperator, Link, ModelSpace
from .tsys.system import ExtTriSystem, IndexTemplate

__all__ = [
    "random_endpoints",
    "random_borel_set",
    "random_system",
    "random_extended_system",
    "random_nest_operator",
    "random_diagonal_contraction",
    "random_grid_set",
    "random_linking_instance",
    "random_factor_instance",
]


def random_endpoints(rng: np.random.Generator, count: int, denominator: int = 12) -> list[Fraction]:
    """Up to ``count`` distinct interior rationals with the given denominator."""
    pool = np.arange(1, denominator)
    picked = rng.choice(pool, size=min(count, len(pool)), replace=False)
    return sorted(Fraction(int(p), denominator) for p in picked)


def _cells_from(points: list[Fraction]) -> list[BorelSet]:
    pts = [Fraction(0)] + list(points) + [Fraction(1)]
    return [BorelSet.interval(lo, hi) for lo, hi in zip(pts, pts[1:])]


def random_borel_set(rng: np.random.Generator, points: list[Fraction], p: float = 0.5) -> BorelSet:
    cells = _cells_from(points)
    return union_all(c for c in cells if rng.random() < p)


def random_system(rng: np.random.Generator, size: int, n_points: int, extended: bool = True) -> ExtTriSystem:
    """Arbitrary (usually invalid) system over ``n_points`` shared endpoints."""
    pts = random_endpoints(rng, n_points)
    S = [[FULL if i == j and rng.random() < 0.8 else random_borel_set(rng, pts, 0.4) for j in range(size)] for i in range(size)]
    R = [random_borel_set(rng, pts, 0.3) for _ in range(size)] if extended else None
    C = [random_borel_set(rng, pts, 0.3) for _ in range(size)] if extended else None
    return ExtTriSystem.build(IndexTemplate.of("finite", size), S, R, C)


def _random_partial_order(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random reflexive partial order: a shuffled chain or a product order on small grid points."""
    if rng.random() < 0.3:
        perm = rng.permutation(n)
        return perm[:, None] <= perm[None, :]
    coords = rng.integers(0, 3, size=(n, int(rng.integers(1, 3))))
    le = np.all(coords[:, None, :] <= coords[None, :, :], axis=2)
    eq = np.all(coords[:, None, :] == coords[None, :, :], axis=2)
    # points sharing coordinates are chained by position to keep antisymmetry
    tie = np.arange(n)[:, None] <= np.arange(n)[None, :]
    return (le & ~eq) | (eq & tie)


def _random_cut(rng: np.random.Generator, le: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Increasing A, decreasing B with b <= a for all b in B, a in A."""
    n = le.shape[0]
    mode = rng.integers(0, 4)
    if mode == 0:
        return np.zeros(n, bool), np.zeros(n, bool)
    pivot = int(rng.integers(n))
    A = le[pivot].copy()  # up-set of pivot
    B = le[:, pivot].copy()  # down-set of pivot
    if mode == 2:
        A[:] = False
    elif mode == 3:
        B[:] = False
    # Shrink A to a smaller up-set occasionally.
    if A.any() and rng.random() < 0.3:
        a = int(rng.choice(np.flatnonzero(A)))
        A = le[a].copy()
    return A, B


def random_extended_system(rng: np.random.Generator, size: int, n_points: int) -> ExtTriSystem:
    """Valid extended system: an independent partial order and cut on each refinement cell."""
    pts = random_endpoints(rng, n_points)
    cells = _cells_from(pts)
    S = [[[] for _ in range(size)] for _ in range(size)]
    R = [[] for _ in range(size)]
    C = [[] for _ in range(size)]
    for cell in cells:
        le = _random_partial_order(rng, size)
        A, B = _random_cut(rng, le)
        for i in range(size):
            for j in range(size):
                if le[i, j]:
                    S[i][j].append(cell)
            if B[i]:
                R[i].append(cell)
            if A[i]:
                C[i].append(cell)
    return ExtTriSystem.build(
        IndexTemplate.of("finite", size),
        [[union_all(e) for e in row] for row in S],
        [union_all(e) for e in R],
        [union_all(e) for e in C],
    )


def _cell_upper_mask(space: ModelSpace, strict: bool = False) -> np.ndarray:
    cell = np.arange(space.dim) // (space.k * space.c)
    return cell[:, None] < cell[None, :] if strict else cell[:, None] <= cell[None, :]


def random_nest_operator(
    rng: np.random.Generator, space: ModelSpace, *, strict: bool = False, complex_: bool = True, scale: float = 1.0
) -> BlockOperator:
    """Dense random operator mapping every cell into itself and earlier cells."""
    shape = (space.dim, space.dim)
    M = rng.standard_normal(shape)
    if complex_:
        M = M + 1j * rng.standard_normal(shape)
    M = M * _cell_upper_mask(space, strict) * scale / np.sqrt(space.dim)
    return BlockOperator(space, M)


def random_diagonal_contraction(rng: np.random.Generator, space: ModelSpace) -> BlockOperator:
    """Random nest operator rescaled to norm at most one."""
    X = random_nest_operator(rng, space)
    n = X.norm()
    return X * (1 / n) if n > 1 else X


def random_grid_set(rng: np.random.Generator, m: int, p: float = 0.4, nonempty: bool = True) -> BorelSet:
    while True:
        cells = [q for q in range(1, m + 1) if rng.random() < p]
        if cells or not nonempty:
            return union_all(BorelSet.interval(Fraction(q - 1, m), Fraction(q, m)) for q in cells)


def random_linking_instance(rng: np.random.Generator, m: int = 16, c: int = 2, q_max: int | None = None):
    """Sequences ``(A, B, D)`` driven by the grid windows of an interval family.

    ``A_n = B_n`` compresses to the grid cells under window ``n``.  ``D_n`` is
    a link between two random cells under the window, with random unit
    vectors across the channels and weight in ``[1.05, 2]``, so
    ``||A_n D_n B_n|| > 1``.
    """
    space = ModelSpace(m, 1, c)
    K = random_grid_set(rng, m)
    fam = interval_family(K, q_max or m)
    A, B, D = [], [], []
    for w in fam.windows:
        lo = int(np.floor(w.s * m)) + 1
        hi = int(np.ceil(w.t * m))
        idx = space.indices(range(lo, hi + 1))
        P = np.zeros((space.dim, space.dim))
        P[idx, idx] = 1.0
        src, dst = (int(q) for q in rng.integers(lo, hi + 1, size=2))
        vecs = []
        for q in (dst, src):
            v = np.zeros(space.dim, complex)
            sl = space.indices([q])
            v[sl] = rng.standard_normal(c) + 1j * rng.standard_normal(c)
            vecs.append(v / np.linalg.norm(v))
        A.append(P)
        B.append(P)
        D.append(rng.uniform(1.05, 2.0) * np.outer(vecs[0], vecs[1].conj()))
    return A, B, D


def random_factor_instance(rng: np.random.Generator, m: int = 8, k: int = 3, c: int = 2):
    """``(X, K, i, j)`` with enough disjoint heavy links in block ``i`` on every cell of ``K``.

    Extra light links and links into other blocks are sprinkled in as noise.
    """
    if k < 2:
        raise ValueError("factor instances need k >= 2")
    space = ModelSpace(m, k, c)
    K = random_grid_set(rng, m, nonempty=False)
    i, j = (int(v) for v in rng.integers(1, k + 1, size=2))
    links = []
    cells = {q for q in range(1, m + 1) if BorelSet.interval(Fraction(q - 1, m), Fraction(q, m)) <= K}
    for q in range(1, m + 1):
        srcs = [(q, b, ch) for b in range(1, k + 1) for ch in range(1, c + 1)]
        order = rng.permutation(len(srcs))
        dst_ch = rng.permutation(c) + 1
        if q in cells:
            for n in range(c):
                src = srcs[order[n]]
                links.append(Link(src, (q, i, int(dst_ch[n])), int(rng.integers(1, 6)) * int(rng.choice([-1, 1]))))
        # light noise: below the weight threshold
        src = srcs[order[-1]]
        links.append(Link(src, (q, i, int(rng.integers(1, c + 1))), Fraction(1, 10)))
        # noise into another block
        other = 1 + (i % k)
        if other != i:
            links.append(Link(srcs[order[0]], (q, other, 1), int(rng.integers(1, 4))))
        # cross-cell noise
        if q < m and other != i:
            links.append(Link((q + 1, j, 1), (q, other, 1), 3))
    return BlockOperator.from_links(space, links), K, i, j
