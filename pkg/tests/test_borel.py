from fractions import Fraction as F

import pytest
from hypothesis import given

from trialg.borel import (
    EMPTY,
    FULL,
    BorelSet,
    Interval,
    canonicalize,
    combine,
    complement,
    grid_cell,
    measure,
    refinement,
)
from trialg.errors import DomainError

from conftest import borel_sets


def iv(a, b):
    return Interval(F(a), F(b))


class TestCanonicalize:
    def test_abutting_pieces_merge(self):
        assert canonicalize([iv(0, "1/2"), iv("1/2", 1)]) == FULL

    def test_overlapping_pieces_merge(self):
        assert canonicalize([iv("1/4", "3/4"), iv("1/2", 1)]) == BorelSet.interval(F(1, 4), 1)

    def test_empty_input(self):
        assert canonicalize([]) == EMPTY
        assert not canonicalize([])

    def test_endpoint_outside_unit_interval(self):
        with pytest.raises(DomainError):
            canonicalize([(F(-1, 4), F(1, 2))])
        with pytest.raises(DomainError):
            Interval(F(1, 2), F(3, 2))

    def test_floats_are_rejected(self):
        with pytest.raises(TypeError):
            Interval(0.25, 0.5)


class TestCombine:
    def test_intersect(self):
        out = combine("intersect", BorelSet.interval(0, F(1, 2)), BorelSet.interval(F(1, 4), F(3, 4)))
        assert out == BorelSet.interval(F(1, 4), F(1, 2))

    def test_union_of_separate_pieces(self):
        out = combine("union", BorelSet.interval(0, F(1, 4)), BorelSet.interval(F(1, 2), F(3, 4)))
        assert len(out.intervals) == 2
        assert measure(out) == F(1, 2)

    def test_difference_with_itself(self):
        assert combine("difference", FULL, FULL) == EMPTY

    def test_unknown_op(self):
        with pytest.raises(DomainError):
            combine("sum", FULL, FULL)


class TestComplementAndMeasure:
    def test_complement_examples(self):
        assert complement(EMPTY) == FULL
        assert complement(BorelSet.interval(0, F(1, 2))) == BorelSet.interval(F(1, 2), 1)

    @given(borel_sets())
    def test_double_complement(self, a):
        assert complement(complement(a)) == a
        assert ~~a == a

    def test_measure_examples(self):
        assert measure(FULL) == 1
        assert measure(BorelSet([(0, F(1, 4)), (F(1, 2), F(3, 4))])) == F(1, 2)
        assert measure(EMPTY) == 0


class TestRefinement:
    def test_single_member(self):
        cells = refinement([BorelSet.interval(0, F(1, 2))]).cells
        assert cells == (iv(0, "1/2"), iv("1/2", 1))

    def test_empty_family(self):
        assert refinement([]).cells == (iv(0, 1),)

    def test_endpoints_sorted(self):
        part = refinement([BorelSet.interval(0, F(1, 3)), BorelSet.interval(F(1, 4), 1)])
        assert part.points == (F(0), F(1, 4), F(1, 3), F(1))

    def test_locate_outside(self):
        with pytest.raises(DomainError):
            refinement([]).locate(1)

    @given(borel_sets(), borel_sets(), borel_sets())
    def test_members_are_unions_of_cells(self, a, b, c):
        part = refinement([a, b, c])
        for s in (a, b, c):
            assert part.union_of(part.indicator(s)) == s


def _ind(part, s):
    return part.indicator(s)


@given(borel_sets(), borel_sets(), borel_sets())
def test_boolean_algebra_laws_on_cells(a, b, c):
    part = refinement([a, b, c, a | b, a & b, ~a, b & c, a | (b & c), (a | b) & (a | c), ~(a | b), ~a & ~b])
    A, B, C = _ind(part, a), _ind(part, b), _ind(part, c)
    assert (_ind(part, ~(a | b)) == (~A & ~B)).all()
    assert (_ind(part, ~(a & b)) == (~A | ~B)).all()
    assert (_ind(part, a | (b & c)) == (A | (B & C))).all()
    assert ~(a | b) == ~a & ~b
    assert a | (b & c) == (a | b) & (a | c)
    assert a - b == a & ~b


@given(borel_sets(), borel_sets())
def test_inclusion_exclusion(a, b):
    assert measure(a | b) + measure(a & b) == measure(a) + measure(b)


@given(borel_sets())
def test_json_round_trip(a):
    assert BorelSet.from_json(a.to_json()) == a
    for quad in a.to_json():
        assert all(isinstance(v, int) for v in quad)


def test_grid_cell():
    assert grid_cell(3, 8) == iv("1/4", "3/8")
    with pytest.raises(DomainError):
        grid_cell(0, 8)


def test_membership_and_covers():
    s = BorelSet([(0, F(1, 4)), (F(1, 2), 1)])
    assert F(1, 4) not in s and F(1, 2) in s and 0 in s
    assert s.covers(iv("1/2", "3/4"))
    assert not s.covers(iv("1/8", "3/8"))
    assert BorelSet.interval(F(1, 2), F(3, 4)) <= s
