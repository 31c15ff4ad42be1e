"""Constant and mixed extended systems over the classical countable orders.

Every example lives on a finite stretch of an infinite index order.  For the
four pure orders the order and cut are the same at every point of [0, 1), so
each set is empty or full.  The ``mixed`` example splits every grid cell into
sub-cells and gives each sub-cell its own order type and cut, so the induced
order changes from cell to cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from ..borel import EMPTY, BorelSet, as_rational, union_all
from ..errors import ParameterError
from .system import ExtTriSystem, IndexTemplate, constant_system, farey_labels

__all__ = ["build_example", "EXAMPLE_KINDS", "GOLDEN_GAP", "SubOrder", "mixed_layout"]

GOLDEN_GAP = (5**0.5 - 1) / 2
GAMMA_MIXED = 2**-0.5

_ALIASES = {
    "nat": "nat",
    "nat-case": "nat",
    "int": "int",
    "int-case": "int",
    "wo": "well-ordered",
    "well-ordered": "well-ordered",
    "cantor": "cantor",
    "rat": "cantor",
    "mixed": "mixed",
}
EXAMPLE_KINDS = ("nat", "int", "well-ordered", "cantor", "mixed")

_DEFAULT_SIZE = {"nat": 6, "int": 5, "well-ordered": 6, "cantor": 7, "mixed": 6}
_DEFAULT_CUT = {"nat": "A-empty", "int": 0, "well-ordered": (1, 0), "cantor": GOLDEN_GAP}


def _normalize_kind(kind: str) -> str:
    try:
        return _ALIASES[kind]
    except KeyError:
        raise ParameterError(f"unknown example {kind!r}; choose from {sorted(_ALIASES)}") from None


def _cut_predicates(labels: list, cut) -> tuple[Callable[[int], bool], Callable[[int], bool]]:
    """Membership tests for A and B given a cut spec over a sorted label list.

    ``cut`` is ``"A-empty"``, ``"B-empty"``, a represented label (the cut meets
    there) or, for rational labels only, a float read as an irrational gap.
    """
    if cut == "A-empty":
        return (lambda p: False), (lambda p: True)
    if cut == "B-empty":
        return (lambda p: True), (lambda p: False)
    if isinstance(cut, float):
        gamma = cut
        if any(l == gamma for l in labels):
            raise ParameterError(f"gap {gamma} coincides with a label")
        return (lambda p: labels[p - 1] > gamma), (lambda p: labels[p - 1] < gamma)
    if cut not in labels:
        raise ParameterError(f"cut label {cut!r} is not a represented index")
    return (lambda p: labels[p - 1] >= cut), (lambda p: labels[p - 1] <= cut)


def _pure(kind: str, size: int, cut) -> ExtTriSystem:
    tkind = "rat" if kind == "cantor" else kind
    template = IndexTemplate.of(tkind, size)
    labels = list(template.labels)
    allowed = {"nat": ("A-empty",), "well-ordered": ("A-empty",)}.get(kind, ("A-empty", "B-empty"))
    if isinstance(cut, str) and cut in ("A-empty", "B-empty"):
        if cut not in allowed:
            raise ParameterError(f"cut {cut!r} is not a maximal cut of a {kind} order")
    elif isinstance(cut, float):
        if kind != "cantor":
            raise ParameterError("irrational gaps only exist in the rational order")
    else:
        if kind == "well-ordered" and isinstance(cut, list):
            cut = tuple(cut)
        if kind == "cantor":
            cut = as_rational(cut)
    in_a, in_b = _cut_predicates(labels, cut)
    return constant_system(template, lambda i, j: i <= j, in_a, in_b)


@dataclass(frozen=True)
class SubOrder:
    """One order type of the mixed example: how positions map to labels, and its cuts."""

    kind: str
    label: Callable[[int], object]
    cuts: tuple


def _zigzag(p: int) -> int:
    return p // 2 if p % 2 == 0 else -(p // 2)


def _omega_two(p: int) -> tuple[int, int]:
    # odd positions fill the first copy of omega, even ones the second
    return (0, (p - 1) // 2) if p % 2 else (1, p // 2 - 1)


def _sub_orders(size: int) -> list[SubOrder]:
    rat = farey_labels(size)
    return [
        SubOrder("nat", lambda p: p, ("A-empty", 1, 2)),
        SubOrder("int", _zigzag, ("A-empty", "B-empty", 0)),
        SubOrder("well-ordered", _omega_two, ("A-empty", (0, 0), (1, 0))),
        SubOrder("rat", lambda p: rat[p - 1], ("A-empty", "B-empty", GAMMA_MIXED)),
    ]


def mixed_layout(sub_orders: int, resolution, cuts_per_order: int):
    """Sub-cell ownership for the mixed example.

    Returns ``(grid, slots)`` where ``grid`` is the number of grid cells and
    ``slots`` lists ``(order_index, cut_index)`` in sub-cell order; slot ``s``
    owns the ``s``-th sub-cell of every grid cell.
    """
    if not 1 <= sub_orders <= 4:
        raise ParameterError("sub_orders must be between 1 and 4")
    if not 1 <= cuts_per_order <= 3:
        raise ParameterError("cuts_per_order must be between 1 and 3")
    res = as_rational(resolution)
    if res <= 0 or res.numerator != 1:
        raise ParameterError(f"resolution must be 1/g for a positive integer g, got {res}")
    grid = res.denominator
    slots = [(o, c) for o in range(sub_orders) for c in range(cuts_per_order)]
    return grid, slots


def _mixed(size: int, sub_orders: int, resolution, cuts_per_order: int) -> ExtTriSystem:
    grid, slots = mixed_layout(sub_orders, resolution, cuts_per_order)
    orders = _sub_orders(size)[:sub_orders]
    width = Fraction(1, grid * len(slots))
    owned = [[] for _ in slots]
    for g in range(grid):
        for s in range(len(slots)):
            lo = Fraction(g, grid) + s * width
            owned[s].append((lo, lo + width))
    owned_sets = [BorelSet(iv) for iv in owned]

    n = size
    S = [[[] for _ in range(n)] for _ in range(n)]
    R = [[] for _ in range(n)]
    C = [[] for _ in range(n)]
    for s, (o, c) in enumerate(slots):
        order = orders[o]
        labels = [order.label(p) for p in range(1, n + 1)]
        cut = order.cuts[c]
        if order.kind in ("int", "well-ordered") and cut not in ("A-empty", "B-empty") and cut not in labels:
            raise ParameterError(f"size {size} too small to represent cut {cut!r} of the {order.kind} order")
        in_a, in_b = _cut_predicates(labels, cut)
        region = owned_sets[s]
        for i in range(n):
            for j in range(n):
                if labels[i] <= labels[j]:
                    S[i][j].append(region)
            if in_b(i + 1):
                R[i].append(region)
            if in_a(i + 1):
                C[i].append(region)

    regions = []
    for o, order in enumerate(orders):
        mine = union_all(owned_sets[s] for s, (oo, _) in enumerate(slots) if oo == o)
        if order.kind != "nat":
            regions.append((mine, order.kind))
    template = IndexTemplate("nat", tuple(range(1, n + 1)), tuple(regions))
    return ExtTriSystem.build(
        template,
        [[union_all(e) for e in row] for row in S],
        [union_all(e) if e else EMPTY for e in R],
        [union_all(e) if e else EMPTY for e in C],
    )


def build_example(
    kind: str,
    size: int | None = None,
    cut=None,
    *,
    sub_orders: int = 4,
    resolution=Fraction(1, 8),
    cuts_per_order: int = 3,
) -> ExtTriSystem:
    """Maximal extended system for one of the classical index orders.

    ``kind`` is ``nat``, ``int``, ``well-ordered`` (``wo``), ``cantor`` or
    ``mixed``.  For the pure kinds ``cut`` picks the maximal Dedekind cut:

    * ``"A-empty"`` (``A`` empty, ``B`` everything) or ``"B-empty"``;
    * a represented label, where ``A`` and ``B`` meet;
    * for ``cantor`` also a float, read as an irrational gap.

    ``mixed`` ignores ``cut``; each of the ``sub_orders`` order types owns
    ``cuts_per_order`` sub-cells of every grid cell of width ``resolution``,
    one per cut from that order's list.
    """
    kind = _normalize_kind(kind)
    size = _DEFAULT_SIZE[kind] if size is None else size
    if not isinstance(size, int) or size < 1:
        raise ParameterError(f"size must be a positive integer, got {size!r}")
    if kind == "mixed":
        if size < 3:
            raise ParameterError("mixed example needs size >= 3")
        return _mixed(size, sub_orders, resolution, cuts_per_order)
    if cut is None:
        cut = _DEFAULT_CUT[kind]
    if kind == "nat" and isinstance(cut, int) and not 1 <= cut <= size:
        raise ParameterError(f"cut {cut} outside represented indices 1..{size}")
    return _pure(kind, size, cut)
