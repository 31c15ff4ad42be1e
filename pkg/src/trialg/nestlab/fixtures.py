"""Link-list operators that witness the algebraic phenomena the lab checks.

All fixtures are exact: weights are integers, so products of fixtures stay
exact link lists.
"""

from __future__ import annotations

from fractions import Fraction

from ..borel import FULL, BorelSet
from ..errors import CapacityError, DomainError, ParameterError
from ..tsys.system import ExtTriSystem
from .space import BlockOperator, Link, ModelSpace, grid_cells_of

__all__ = ["build_fixture", "FIXTURE_KINDS", "link_span", "nonclosure_channels"]

FIXTURE_KINDS = ("nonclosure", "rinf_witness", "nonsimple", "member", "violator")


def link_span(link: Link, m: int) -> Fraction:
    """Length of the stretch of [0, 1) from the first to the last cell a link touches."""
    lo = min(link.src[0], link.dst[0])
    hi = max(link.src[0], link.dst[0])
    return Fraction(hi - lo + 1, m)


def nonclosure_channels(m: int) -> int:
    """Channels the non-closure pair needs: one per window of three cells."""
    return m - 2


def _nonclosure(space: ModelSpace | None, m: int | None, i: int, j: int, via: int | None):
    if space is None:
        m = 8 if m is None else m
        space = ModelSpace(m, max(2, i, j), max(1, nonclosure_channels(m)))
    m, k = space.m, space.k
    if m < 3:
        raise CapacityError(f"non-closure pair needs at least 3 cells, got m={m}")
    if space.c < nonclosure_channels(m):
        raise CapacityError(
            f"non-closure pair needs c >= m - 2 = {nonclosure_channels(m)} channels (one per 3-cell window), got c={space.c}"
        )
    via = k if via is None else via
    for name, v in (("i", i), ("j", j), ("via", via)):
        if not 1 <= v <= k:
            raise DomainError(f"{name}={v} outside blocks 1..{k}")
    # Window a covers cells a, a+1, a+2 and owns channel a.
    xs, ys = [], []
    for a in range(1, m - 1):
        alpha, beta, gamma = (a, i, a), (a + 1, via, a), (a + 2, j, a)
        xs.append(Link(beta, alpha, 1))
        ys.append(Link(gamma, beta, 1))
    return BlockOperator.from_links(space, xs), BlockOperator.from_links(space, ys)


def _rinf_witness(space: ModelSpace, K: BorelSet, j: int, depth: int | None, width: int):
    m, k, c = space.m, space.k, space.c
    depth = k if depth is None else depth
    if depth > k:
        raise CapacityError(f"rinf witness depth {depth} exceeds k={k} blocks")
    if c < depth:
        raise CapacityError(f"rinf witness needs c >= depth = {depth} channels, got c={c}")
    if not 2 <= width <= m:
        raise DomainError(f"window width must be between 2 and m={m}, got {width}")
    if not 1 <= j <= k:
        raise DomainError(f"column block {j} outside 1..{k}")
    cells = set(grid_cells_of(K, m))
    links = []
    for s in range(m - width + 1):
        window = range(s + 1, s + width + 1)
        if not cells.intersection(window):
            continue
        early, late = s + 1, s + width
        for row in range(1, depth + 1):
            links.append(Link((late, j, row), (early, row, row), 1))
    return BlockOperator.from_links(space, links)


def _nonsimple(space: ModelSpace):
    m, k = space.m, space.k
    if k < 2:
        raise CapacityError("non-simple fixture needs k >= 2 blocks")
    links = []
    for q in range(1, m + 1):
        for i in range(1, k):
            links.append(Link((q, k, 1), (q, i, 1), 1))
    for q in range(1, m):
        for b in range(1, k):
            links.append(Link((q + 1, b, 1), (q, b + 1, 1), 1))
    return BlockOperator.from_links(space, links)


def _grid_mask(s: BorelSet, m: int) -> set[int]:
    return set(grid_cells_of(s, m))


def _allowed_cells(sys_: ExtTriSystem, m: int, i: int, j: int) -> set[int]:
    """Cells where a within-cell link from block j to block i breaks no condition."""
    k = sys_.size
    ok = _grid_mask(sys_.s(i, j), m)
    if j == k and i < k:
        ok &= _grid_mask(sys_.r(i), m)
    if i == k and j < k:
        ok &= _grid_mask(sys_.c(j), m)
    return ok


def _member(space: ModelSpace, sys_: ExtTriSystem):
    m, k = space.m, space.k
    if sys_.size != k:
        raise ParameterError(f"system has {sys_.size} indices but the space has k={k}")
    links = []
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            for q in sorted(_allowed_cells(sys_, m, i, j)):
                links.append(Link((q, j, 1), (q, i, 1), 1))
    # Strictly cell-upper links are invisible to every single-cell seminorm.
    for q in range(1, m):
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                links.append(Link((q + 1, j, 1), (q, i, 1), 1))
    return BlockOperator.from_links(space, links)


def _violator(space: ModelSpace, sys_: ExtTriSystem, condition: int, indices, K: BorelSet):
    m, k = space.m, space.k
    if sys_.size != k:
        raise ParameterError(f"system has {sys_.size} indices but the space has k={k}")
    cells = set(grid_cells_of(K, m))
    if not cells:
        raise ParameterError("violation region K is empty")
    if condition == 1:
        i, j = indices
        if cells & _grid_mask(sys_.s(i, j), m):
            raise ParameterError(f"K meets S[{i}][{j}]; condition 1 cannot fail there")
        if j == k and i < k and not cells <= _grid_mask(sys_.r(i), m):
            raise ParameterError(f"K leaves R_{i}; the link would also break condition 2")
        if i == k and j < k and not cells <= _grid_mask(sys_.c(j), m):
            raise ParameterError(f"K leaves C_{j}; the link would also break condition 3")
        src, dst = j, i
    elif condition in (2, 3):
        (idx,) = indices if isinstance(indices, (tuple, list)) else (indices,)
        if idx >= k:
            raise ParameterError(f"index {idx} has no represented tail; use an index below k={k}")
        i, j = (idx, k) if condition == 2 else (k, idx)
        home = sys_.r(idx) if condition == 2 else sys_.c(idx)
        if cells & _grid_mask(home, m):
            raise ParameterError(f"K meets the condition-{condition} set of index {idx}")
        if not cells <= _grid_mask(sys_.s(i, j), m):
            raise ParameterError(f"K leaves S[{i}][{j}]; the link would also break condition 1")
        src, dst = j, i
    else:
        raise ParameterError(f"condition must be 1, 2 or 3, got {condition!r}")
    links = [Link((q, src, 1), (q, dst, 1), 1) for q in sorted(cells)]
    return BlockOperator.from_links(space, links)


def build_fixture(kind: str, space: ModelSpace | None = None, **params):
    """Build a witness operator (or pair) on ``space``.

    ``nonclosure``: returns ``(X, Y)`` with ``X = E_i X`` and ``Y = Y E_j``;
        params ``i=1``, ``j=2``, ``via`` (default ``k``), and ``m`` when no
        space is given (the space is then sized automatically).
    ``rinf_witness``: returns ``T = T E_j``; params ``K``, ``j=1``,
        ``depth`` (default ``k``), ``width=2``.
    ``nonsimple``: returns ``X``.
    ``member``: returns ``X`` in the algebra of ``system``.
    ``violator``: returns ``X`` failing ``condition`` (1, 2 or 3) for
        ``indices`` exactly on the grid cells of ``K``.
    """
    if kind == "nonclosure":
        return _nonclosure(space, params.get("m"), params.get("i", 1), params.get("j", 2), params.get("via"))
    if space is None:
        raise ParameterError(f"fixture {kind!r} needs a model space")
    if kind == "rinf_witness":
        K = params.get("K", FULL)
        return _rinf_witness(space, K, params.get("j", 1), params.get("depth"), params.get("width", 2))
    if kind == "nonsimple":
        return _nonsimple(space)
    if kind == "member":
        return _member(space, params["system"])
    if kind == "violator":
        return _violator(space, params["system"], params.get("condition", 1), params["indices"], params["K"])
    raise ParameterError(f"unknown fixture {kind!r}; choose from {FIXTURE_KINDS}")
