"""Finite-horizon selection procedures and marker factorizations.

Each procedure checks its smallness conditions on the data it is given
instead of assuming them, and stops with :class:`InsufficientDataError`
naming the first step it cannot complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .borel import BorelSet
from .errors import CapacityError, DomainError, InsufficientDataError, ParameterError, UnsupportedOperatorError
from .nestlab.space import BlockOperator, Link, grid_cells_of, spectral_norm

__all__ = [
    "Window",
    "IntervalFamily",
    "interval_family",
    "StepCertificate",
    "Selection",
    "sub_sum_select",
    "linking_select",
    "row_column_factors",
]


# -- interval families -------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """Open interval ``((p-1)/q, (p+1)/q)``."""

    s: Fraction
    t: Fraction
    p: int
    q: int

    @property
    def width(self) -> Fraction:
        return self.t - self.s

    def __contains__(self, x) -> bool:
        return self.s < x < self.t

    def within(self, other: "Window") -> bool:
        return other.s <= self.s and self.t <= other.t

    def meets(self, K: BorelSet) -> bool:
        return any(iv.lo < self.t and self.s < iv.hi for iv in K.intervals)


@dataclass(frozen=True)
class IntervalFamily:
    windows: tuple[Window, ...]
    containment: dict[int, frozenset[int]]

    def __len__(self) -> int:
        return len(self.windows)

    def to_json(self) -> dict:
        return {
            "windows": [[str(w.s), str(w.t), w.p, w.q] for w in self.windows],
            "containment": {str(n): sorted(s) for n, s in self.containment.items()},
        }


def interval_family(K: BorelSet, q_max: int) -> IntervalFamily:
    """Windows ``((p-1)/q, (p+1)/q)``, ``1 <= p < q <= q_max``, that meet ``K``.

    Ordered by ``q`` then ``p``; ``containment[n]`` holds the positions of the
    windows inside window ``n`` (``n`` included).
    """
    if not K:
        raise DomainError("interval family needs a nonempty set K")
    if q_max < 2:
        raise DomainError(f"q_max must be at least 2, got {q_max}")
    wins = []
    for q in range(2, q_max + 1):
        for p in range(1, q):
            w = Window(Fraction(p - 1, q), Fraction(p + 1, q), p, q)
            if w.meets(K):
                wins.append(w)
    containment = {n: frozenset(m for m, v in enumerate(wins) if v.within(w)) for n, w in enumerate(wins)}
    return IntervalFamily(tuple(wins), containment)


# -- selections -----------------------------------------------------------------


@dataclass(frozen=True)
class StepCertificate:
    """Inequalities recorded when one index of a selection was fixed."""

    step: int
    index: int
    checks: dict[str, float]
    bounds: dict[str, float]

    def holds(self) -> bool:
        return all(self.checks[name] <= self.bounds[name] for name in self.checks)

    def to_json(self) -> dict:
        return {"step": self.step, "index": self.index, "checks": self.checks, "bounds": self.bounds}


@dataclass(frozen=True, eq=False)
class Selection:
    k: tuple[int, ...]
    P: tuple[np.ndarray, ...] = ()
    Q: tuple[np.ndarray, ...] = ()
    certificates: tuple[StepCertificate, ...] = ()
    partial_sum_norms: tuple[float, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "k": list(self.k),
            "ranks_P": [int(round(np.trace(p).real)) for p in self.P],
            "ranks_Q": [int(round(np.trace(q).real)) for q in self.Q],
            "certificates": [c.to_json() for c in self.certificates],
            "partial_sum_norms": list(self.partial_sum_norms),
        }


def _arr(x) -> np.ndarray:
    return x.dense if isinstance(x, BlockOperator) else np.asarray(x, dtype=complex)


def _threshold_projections(A: np.ndarray, level: float) -> tuple[np.ndarray, np.ndarray]:
    """Spectral projections of ``|A*|`` and ``|A|`` for ``[level, inf)``."""
    U, s, Vh = np.linalg.svd(A)
    keep = s >= level
    u, v = U[:, : len(s)][:, keep], Vh[: len(s)][keep].conj().T
    return u @ u.conj().T, v @ v.conj().T


def _subsets(S, steps: int, n_items: int) -> list[set[int]]:
    if S is None:
        return [set(range(n_items))] * steps
    if len(S) < steps:
        raise ParameterError(f"need one index subset per step: got {len(S)} for {steps} steps")
    return [set(s) for s in S[:steps]]


def sub_sum_select(A: Sequence, alpha: Sequence[float], S: Sequence | None = None) -> Selection:
    """Pick ``k(1) < k(2) < ...`` and orthogonal projections cutting each ``A_k(i)`` down to ``alpha_i``.

    Step 1 takes the first admissible index and thresholds ``|A*|``, ``|A|``
    at ``alpha_1 / 2``.  Step ``n`` needs an index whose mass outside the
    ranges already used is below ``alpha_n / 2``; its compression to the
    remaining room is thresholded at ``alpha_n / 4``.  ``S[n]`` optionally
    restricts the index chosen at step ``n`` (0-based positions).
    """
    mats = [_arr(a) for a in A]
    alpha = [float(x) for x in alpha]
    if not mats:
        raise ParameterError("empty operator sequence")
    if any(x <= 0 for x in alpha):
        raise ParameterError("alpha must be positive")
    dim_r, dim_c = mats[0].shape
    allowed = _subsets(S, len(alpha), len(mats))
    P_used = np.zeros((dim_r, dim_r), dtype=complex)
    Q_used = np.zeros((dim_c, dim_c), dtype=complex)
    ks, Ps, Qs, certs, sums = [], [], [], [], []
    total = np.zeros((dim_r, dim_c), dtype=complex)
    prev = -1
    for n, a_n in enumerate(alpha):
        P = np.eye(dim_r) - P_used
        Q = np.eye(dim_c) - Q_used
        chosen = None
        best_gap = np.inf
        for k in range(prev + 1, len(mats)):
            if k not in allowed[n]:
                continue
            Ak = mats[k]
            gap = spectral_norm(Ak - P @ Ak @ Q) if n else 0.0
            if gap < a_n / 2:
                chosen = k
                break
            best_gap = min(best_gap, gap)
        if chosen is None:
            raise InsufficientDataError(
                f"step {n + 1}: no admissible index after {prev} with ||A_k - P A_k Q|| < alpha/2 = {a_n / 2:g}"
                + (f" (smallest found {best_gap:g})" if np.isfinite(best_gap) else "")
            )
        Ak = mats[chosen]
        compressed = P @ Ak @ Q
        Pn, Qn = _threshold_projections(compressed, a_n / 2 if n == 0 else a_n / 4)
        err = spectral_norm(Ak - Pn @ Ak @ Qn)
        P_used = P_used + Pn
        Q_used = Q_used + Qn
        total = total + Ak
        norm_sum = spectral_norm(total)
        ks.append(chosen)
        Ps.append(Pn)
        Qs.append(Qn)
        sums.append(norm_sum)
        max_norm = max(spectral_norm(mats[k]) for k in ks)
        checks = {"approximation": err, "partial_sum": norm_sum}
        bounds = {"approximation": a_n, "partial_sum": max_norm + sum(alpha[: n + 1])}
        if n:
            checks["outside_room"] = spectral_norm(Ak - compressed)
            bounds["outside_room"] = a_n / 2
        certs.append(StepCertificate(n + 1, chosen, checks, bounds))
        prev = chosen
    return Selection(tuple(ks), tuple(Ps), tuple(Qs), tuple(certs), tuple(sums))


def _top_right_vector(M: np.ndarray) -> np.ndarray:
    _, _, Vh = np.linalg.svd(M)
    return Vh[0].conj()


def linking_select(
    A: Sequence,
    B: Sequence,
    D: Sequence,
    a: float,
    eps: float,
    S: Sequence | None = None,
    n_steps: int | None = None,
):
    """Choose indices so that ``D_sum = sum D_k(i)`` keeps ``||A_k(i) D_sum B_k(i)|| > (1-eps) a``.

    Step ``n`` draws from ``S[m(n)]`` where ``m`` cycles round-robin over the
    subsets.  A candidate ``k`` is accepted when

    * ``Kbar * sum_{j<n} ||A_k D_k(j)|| < eps a / 2``, and
    * ``max_{j<n} ||D_k B_k(j) xi_k(j)|| < eps a / (2^(n+1) Kbar)``,

    with ``xi_i`` a top right singular vector of ``A_i D_i B_i`` and ``Kbar``
    the largest norm among all inputs.  Without ``n_steps`` selection runs
    until no candidate is left.
    """
    As, Bs, Ds = [_arr(x) for x in A], [_arr(x) for x in B], [_arr(x) for x in D]
    if not (len(As) == len(Bs) == len(Ds)) or not As:
        raise ParameterError("A, B and D must be nonempty sequences of equal length")
    if not 0 < eps < 1:
        raise ParameterError("eps must lie in (0, 1)")
    products = [As[i] @ Ds[i] @ Bs[i] for i in range(len(As))]
    for i, P in enumerate(products):
        val = spectral_norm(P)
        if not val > a:
            raise ParameterError(f"precondition fails at index {i}: ||A D B|| = {val:g} is not > a = {a:g}")
    xi = [_top_right_vector(P) for P in products]
    Kbar = max(spectral_norm(M) for M in As + Bs + Ds)
    groups = [set(range(len(As)))] if S is None else [set(s) for s in S]
    if not groups or not all(groups):
        raise ParameterError("every index subset must be nonempty")

    ks: list[int] = []
    certs: list[StepCertificate] = []
    prev = -1
    n = 0
    while n_steps is None or n < n_steps:
        n += 1
        pool = groups[(n - 1) % len(groups)]
        bound1 = eps * a / 2
        bound2 = eps * a / (2 ** (n + 1) * Kbar)
        chosen, closest = None, None
        for k in range(prev + 1, len(As)):
            if k not in pool:
                continue
            c1 = Kbar * sum(spectral_norm(As[k] @ Ds[j]) for j in ks)
            c2 = max((float(np.linalg.norm(Ds[k] @ Bs[j] @ xi[j])) for j in ks), default=0.0)
            if c1 < bound1 and c2 < bound2:
                chosen = k
                certs.append(StepCertificate(n, k, {"earlier_sum": c1, "later_max": c2}, {"earlier_sum": bound1, "later_max": bound2}))
                break
            if closest is None:
                closest = (k, c1, c2)
        if chosen is None:
            if n_steps is None and ks:
                break
            if closest is None:
                raise InsufficientDataError(f"step {n}: no candidate index left after {prev} in subset {(n - 1) % len(groups)}")
            k, c1, c2 = closest
            which = (
                f"Kbar*sum ||A_k D_k(j)|| = {c1:g} >= {bound1:g}"
                if c1 >= bound1
                else f"max ||D_k B_k(j) xi|| = {c2:g} >= {bound2:g}"
            )
            raise InsufficientDataError(f"step {n}: first candidate {k} fails {which}")
        ks.append(chosen)
        prev = chosen

    D_sum = sum((Ds[k] for k in ks), np.zeros_like(Ds[0]))
    if D and isinstance(D[0], BlockOperator):
        D_sum = BlockOperator(D[0].space, D_sum)
    return Selection(tuple(ks), certificates=tuple(certs)), D_sum


# -- marker factorization ---------------------------------------------------------


def _inverse(w):
    if isinstance(w, complex):
        return 1 / w
    return 1 / Fraction(w)


def row_column_factors(X: BlockOperator, K: BorelSet, i: int, j: int, a: float):
    """Factors ``A = E_i A E_i`` and ``B = B E_j`` with ``A X B`` the marker of ``K`` from ``j`` to ``i``.

    For every grid cell ``q`` of ``K`` and channel ``ch`` a separate link of
    ``X`` inside cell ``q``, landing in block ``i`` with weight above ``a/2``,
    is reserved.  ``B`` feeds ``e(q, j, ch)`` into that link's source and
    ``A`` returns its target, rescaled, to ``e(q, i, ch)``.  With rational
    weights the factorization is exact.
    """
    if not isinstance(X, BlockOperator) or X.links is None:
        raise UnsupportedOperatorError("row/column factors need a link-list (fixture) operator")
    space = X.space
    m, k, c = space.m, space.k, space.c
    for name, v in (("i", i), ("j", j)):
        if not 1 <= v <= k:
            raise DomainError(f"block {name}={v} outside 1..{k}")
    cells = grid_cells_of(K, m)
    by_src: dict = {}
    for ln in X.links:
        by_src.setdefault(ln.src, set()).add(ln.dst)

    a_links, b_links = [], []
    used_src, used_dst = set(), set()
    for q in cells:
        picks = []
        for ln in X.links:
            if len(picks) == c:
                break
            if not (ln.src[0] == q and ln.dst[0] == q and ln.dst[1] == i and abs(ln.weight) > a / 2):
                continue
            if ln.src in used_src or ln.dst in used_dst:
                continue
            # The source must not reach any other reserved target, and no
            # earlier source may reach this one.
            if by_src[ln.src] & used_dst or any(ln.dst in by_src[s] for s in used_src):
                continue
            used_src.add(ln.src)
            used_dst.add(ln.dst)
            picks.append(ln)
        if len(picks) < c:
            lo, hi = Fraction(q - 1, m), Fraction(q, m)
            raise CapacityError(
                f"window [{lo}, {hi}) (cell {q}) has no usable link for channel {len(picks) + 1}: "
                f"need {c} disjoint links into block {i} with |weight| > {a / 2:g}, found {len(picks)}"
            )
        for ch, ln in enumerate(picks, 1):
            b_links.append(Link((q, j, ch), ln.src, 1))
            a_links.append(Link(ln.dst, (q, i, ch), _inverse(ln.weight)))
    return BlockOperator.from_links(space, a_links), BlockOperator.from_links(space, b_links)
