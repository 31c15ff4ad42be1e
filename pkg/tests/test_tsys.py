from fractions import Fraction as F

import numpy as np
import pytest

from trialg.borel import EMPTY, FULL, BorelSet
from trialg.errors import DomainError, InvalidInputError, ShapeError
from trialg.generators import random_extended_system, random_system
from trialg.tsys import (
    ExtTriSystem,
    IndexTemplate,
    TriSystem,
    build_example,
    check_extended,
    check_triangular,
    complete_to_maximal,
    induced_cut_at,
    induced_cuts,
    is_maximal,
)
from trialg.tsys.system import constant_system

from oracles import axiom_failures, finitely_maximal_at, sample_points

HALF = BorelSet.interval(0, F(1, 2))


def finite(n):
    return IndexTemplate.of("finite", n)


def tri(S):
    return TriSystem(finite(len(S)), S)


def keys(report):
    return {(v.axiom, v.indices) for v in report.violations}


class TestCheckTriangular:
    def test_linear_order_passes(self):
        assert check_triangular(tri([[FULL, FULL], [EMPTY, FULL]])).passed

    def test_antisymmetry_breach(self):
        rep = check_triangular(tri([[FULL, HALF], [HALF, FULL]]))
        assert [(v.axiom, v.indices, v.cell) for v in rep.violations] == [("2", (1, 2), HALF.intervals[0])]

    def test_transitivity_breach(self):
        S = [[FULL, FULL, EMPTY], [EMPTY, FULL, FULL], [EMPTY, EMPTY, FULL]]
        rep = check_triangular(tri(S))
        assert ("3", (1, 2, 3)) in keys(rep)
        (v,) = [v for v in rep.violations if v.indices == (1, 2, 3)]
        assert v.cell.lo == 0 and v.cell.hi == 1

    def test_ragged_matrix(self):
        with pytest.raises(ShapeError):
            check_triangular([[FULL, FULL], [FULL]])

    def test_verbose_reports_every_cell(self):
        S = [[FULL, FULL], [FULL, FULL]]
        S[0][1] = S[1][0] = BorelSet([(0, F(1, 4)), (F(1, 2), F(3, 4))])
        S[0][0] = BorelSet.interval(0, F(1, 8)) | BorelSet.interval(F(1, 8), 1)
        rep = check_triangular(tri(S), verbose=True)
        assert len(rep.violations) == 2
        assert len(check_triangular(tri(S)).violations) == 1

    def test_matches_brute_force(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            s = random_system(rng, int(rng.integers(1, 5)), int(rng.integers(0, 5)))
            assert keys(check_triangular(s)) == axiom_failures(s, extended=False)


class TestCheckExtended:
    def test_empty_row_and_column_sets(self):
        s = ExtTriSystem.build(finite(2), [[FULL, FULL], [EMPTY, FULL]])
        assert check_extended(s).passed

    def test_example_57_truncation_fails_axiom_six(self):
        tmpl = IndexTemplate.of("int", 5)
        s = constant_system(tmpl, lambda i, j: i < j, lambda i: True, lambda i: True)
        rep = check_extended(s)
        assert rep.axioms() == {"6"}
        assert all(v.indices[0] > v.indices[1] for v in rep.violations)
        assert check_extended(s, "nearly").passed

    def test_bad_mode(self):
        s = ExtTriSystem.build(finite(1), [[FULL]])
        with pytest.raises(DomainError):
            check_extended(s, "loose")

    def test_witness_cells_really_fail(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            s = random_system(rng, 3, 3)
            rep = check_extended(s)
            assert keys(rep) == axiom_failures(s)
            for v in rep.violations:
                x = (v.cell.lo + v.cell.hi) / 2
                single = ExtTriSystem.build(
                    s.template,
                    [[FULL if x in e else EMPTY for e in row] for row in s.S],
                    [FULL if x in e else EMPTY for e in s.R],
                    [FULL if x in e else EMPTY for e in s.C],
                )
                assert (v.axiom, v.indices) in axiom_failures(single)

    def test_nearly_drops_only_axiom_six(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            s = random_system(rng, 3, 3)
            assert keys(check_extended(s, "nearly")) == axiom_failures(s, nearly=True)


class TestCuts:
    def test_nat_example_virtual_cut(self):
        s = build_example("nat")
        for x in (F(0), F(1, 3), F(7, 8)):
            cut = induced_cut_at(s, x)
            assert cut.A == frozenset() and cut.B == frozenset(range(1, 7))
            assert cut.virtual == "A-empty-at-infinity"

    def test_int_example_cut_at_zero(self):
        s = build_example("int", 5, 0)
        labels = s.template.labels
        cut = induced_cut_at(s, F(1, 2))
        assert {labels[i - 1] for i in cut.A} == {v for v in labels if v >= 0}
        assert {labels[i - 1] for i in cut.B} == {v for v in labels if v <= 0}

    def test_empty_row_and_column_sets_give_empty_cuts(self):
        s = ExtTriSystem.build(finite(3), [[FULL if i <= j else EMPTY for j in range(3)] for i in range(3)])
        for cut in induced_cuts(s):
            assert cut.A == cut.B == frozenset()

    def test_point_outside(self):
        with pytest.raises(DomainError):
            induced_cut_at(build_example("nat"), 1)

    def test_cut_invariants_on_valid_systems(self):
        rng = np.random.default_rng(7)
        for _ in range(60):
            s = random_extended_system(rng, int(rng.integers(1, 6)), int(rng.integers(0, 5)))
            for cut in induced_cuts(s):
                n = cut.size
                assert all(cut.leq(i, i) for i in range(1, n + 1))
                for a in cut.A:
                    assert all(b in cut.A for b in range(1, n + 1) if cut.leq(a, b))
                    assert all(cut.leq(b, a) for b in cut.B)
                for b in cut.B:
                    assert all(c in cut.B for c in range(1, n + 1) if cut.leq(c, b))


class TestMaximality:
    def test_int_example_is_maximal_truncated(self):
        assert is_maximal(build_example("int", 5, 0), "truncated").passed

    def test_incomparable_pair_is_not_maximal(self):
        S = [[FULL, BorelSet.interval(F(1, 2), 1)], [EMPTY, FULL]]
        s = ExtTriSystem.build(finite(2), S)
        rep = is_maximal(s, "finite")
        assert ("linear", (1, 2)) in keys(rep)
        assert all(v.cell.hi <= F(1, 2) for v in rep.violations if v.axiom == "linear")

    def test_requires_extended_input(self):
        s = constant_system(IndexTemplate.of("int", 3), lambda i, j: i < j, lambda i: True, lambda i: True)
        with pytest.raises(InvalidInputError) as err:
            is_maximal(s)
        assert err.value.report.axioms() == {"6"}

    def test_finite_maximal_has_meeting_point(self):
        rng = np.random.default_rng(8)
        for _ in range(40):
            s = complete_to_maximal(random_extended_system(rng, 4, 3), "finite")
            assert is_maximal(s, "finite").passed
            for cut in induced_cuts(s):
                c = cut.minimum(cut.A)
                assert c is not None and c == cut.maximum(cut.B)


class TestCompletion:
    def test_empty_two_index_system(self):
        s = ExtTriSystem.build(finite(2), [[FULL, EMPTY], [EMPTY, FULL]])
        out = complete_to_maximal(s)
        assert out.s(1, 2) == FULL and out.s(2, 1) == EMPTY
        for cut in induced_cuts(out):
            assert cut.A | cut.B == {1, 2}

    def test_maximal_input_unchanged(self):
        s = build_example("int")
        assert complete_to_maximal(s) is s

    def test_nat_example_unchanged_in_truncated_mode(self):
        s = build_example("nat")
        assert s.R == (FULL,) * 6 and s.C == (EMPTY,) * 6
        assert complete_to_maximal(s, "truncated") is s

    def test_non_extended_input(self):
        s = constant_system(IndexTemplate.of("int", 3), lambda i, j: i < j, lambda i: True, lambda i: True)
        with pytest.raises(InvalidInputError):
            complete_to_maximal(s)

    def test_properties_on_random_inputs(self):
        rng = np.random.default_rng(9)
        for _ in range(40):
            s = random_extended_system(rng, int(rng.integers(1, 9)), int(rng.integers(0, 7)))
            out, rounds = complete_to_maximal(s, return_rounds=True)
            assert rounds >= 1
            assert out.extends(s)
            assert check_extended(out).passed
            assert all(finitely_maximal_at(out, x) for _, _, x in sample_points(out))
            assert complete_to_maximal(out) is out


class TestTemplateAndJson:
    def test_labels_must_increase(self):
        with pytest.raises(DomainError):
            IndexTemplate("int", (2, 1))

    def test_system_round_trip(self):
        for kind in ("nat", "int", "wo", "cantor", "mixed"):
            s = build_example(kind)
            back = ExtTriSystem.from_json(s.to_json())
            assert back == s
