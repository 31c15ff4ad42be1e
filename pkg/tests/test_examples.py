from fractions import Fraction as F
import math

import pytest

from trialg.borel import EMPTY, FULL
from trialg.errors import ParameterError
from trialg.tsys import build_example, check_extended, complete_to_maximal, induced_cuts, is_maximal
from trialg.tsys.system import farey_labels

from oracles import truncated_maximal_at


def labelled(cut, labels):
    return {labels[i - 1] for i in cut.A}, {labels[i - 1] for i in cut.B}


@pytest.mark.parametrize("kind", ["nat", "int", "wo", "cantor", "mixed"])
def test_defaults_are_maximal_extended_systems(kind):
    s = build_example(kind)
    assert check_extended(s).passed
    assert is_maximal(s, "truncated").passed
    assert complete_to_maximal(s, "truncated") is s
    for cut in induced_cuts(s):
        assert truncated_maximal_at(s, cut.cell.midpoint, cut.kind)


def test_nat_cut_at_three():
    s = build_example("nat", 6, 3)
    assert [s.r(i) for i in range(1, 7)] == [FULL] * 3 + [EMPTY] * 3
    assert [s.c(i) for i in range(1, 7)] == [EMPTY] * 2 + [FULL] * 4
    for i in range(1, 7):
        for j in range(1, 7):
            assert s.s(i, j) == (FULL if i <= j else EMPTY)
    assert is_maximal(s, "finite").passed


def test_nat_default_is_virtual_cut():
    (cut,) = induced_cuts(build_example("nat"))
    assert cut.A == frozenset() and cut.B == frozenset(range(1, 7))
    assert cut.virtual == "A-empty-at-infinity"
    assert not is_maximal(build_example("nat"), "finite").passed


def test_int_cut_at_zero():
    s = build_example("int", 5, 0)
    labels = s.template.labels
    for cut in induced_cuts(s):
        A, B = labelled(cut, labels)
        assert A == {v for v in labels if v >= 0}
        assert B == {v for v in labels if v <= 0}


def test_int_b_empty():
    s = build_example("int", 5, "B-empty")
    (cut,) = induced_cuts(s)
    assert cut.virtual == "B-empty-at-infinity"
    assert is_maximal(s, "truncated").passed


def test_well_ordered_cut_at_omega():
    s = build_example("wo", 6, (1, 0))
    A, B = labelled(induced_cuts(s)[0], s.template.labels)
    assert A == {(1, 0), (1, 1), (1, 2)}
    assert B == {(0, 0), (0, 1), (0, 2), (1, 0)}


def test_cantor_irrational_gap():
    s = build_example("cantor")
    assert all(isinstance(v, F) for v in s.template.labels)
    (cut,) = induced_cuts(s)
    gamma = (math.sqrt(5) - 1) / 2
    A, B = labelled(cut, s.template.labels)
    assert A == {v for v in s.template.labels if v > gamma}
    assert B == {v for v in s.template.labels if v < gamma}
    assert cut.virtual == "gap"
    assert not is_maximal(s, "finite").passed


@pytest.mark.parametrize(
    "kind,cut",
    [("nat", "B-empty"), ("wo", "B-empty"), ("nat", 0.5), ("int", 17), ("nat", 9), ("cantor", 0.5), ("bogus", None)],
)
def test_unsupported_cuts(kind, cut):
    with pytest.raises(ParameterError):
        build_example(kind, None, cut)


def _expected_mixed(n):
    nat = list(range(1, n + 1))
    zig = [0, 1, -1, 2, -2, 3][:n]
    omega2 = [(0, 0), (1, 0), (0, 1), (1, 1), (0, 2), (1, 2)][:n]
    rat = list(farey_labels(n))
    gamma = 2 ** -0.5
    return [
        ("nat", nat, ["A-empty", 1, 2]),
        ("int", zig, ["A-empty", "B-empty", 0]),
        ("well-ordered", omega2, ["A-empty", (0, 0), (1, 0)]),
        ("rat", rat, ["A-empty", "B-empty", ("gap", gamma)]),
    ]


def _expected_cut(labels, cut):
    if cut == "A-empty":
        return set(), set(labels)
    if cut == "B-empty":
        return set(labels), set()
    if isinstance(cut, tuple) and cut[0] == "gap":
        g = cut[1]
        return {v for v in labels if v > g}, {v for v in labels if v < g}
    return {v for v in labels if v >= cut}, {v for v in labels if v <= cut}


def test_mixed_cuts_match_slots():
    n = 6
    s = build_example("mixed", n)
    table = _expected_mixed(n)
    slots = [(o, c) for o in range(4) for c in range(3)]
    grid = 8
    width = F(1, grid * len(slots))
    cuts = induced_cuts(s)
    assert len(cuts) == grid * len(slots)
    relations = set()
    for cut in cuts:
        assert cut.cell.hi - cut.cell.lo == width
        o, c = slots[int(cut.cell.lo / width) % len(slots)]
        kind, labels, stated_cuts = table[o]
        assert cut.kind == kind
        A = {labels[i - 1] for i in cut.A}
        B = {labels[i - 1] for i in cut.B}
        assert (A, B) == _expected_cut(labels, stated_cuts[c])
        assert [labels[i - 1] for i in cut.order()] == sorted(labels)
        relations.add(cut.relation.tobytes())
    assert len(relations) == 4


def test_mixed_too_small():
    with pytest.raises(ParameterError):
        build_example("mixed", 2)
