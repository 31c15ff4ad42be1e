from fractions import Fraction as F

import numpy as np
import pytest

from trialg.borel import EMPTY, BorelSet
from trialg.errors import CapacityError, DomainError, InsufficientDataError, ParameterError, UnsupportedOperatorError
from trialg.generators import random_factor_instance, random_grid_set, random_linking_instance
from trialg.lemmas import interval_family, linking_select, row_column_factors, sub_sum_select
from trialg.nestlab import BlockOperator, Link, Marker, ModelSpace, cell_profile, project


def _meets(s, t, K):
    return any(max(s, iv.lo) < min(t, iv.hi) for iv in K.intervals)


class TestIntervalFamily:
    def test_point_like_cell(self):
        K = BorelSet.interval(F(1, 2), F(5, 8))
        fam = interval_family(K, 8)
        got = {(w.p, w.q) for w in fam.windows}
        around_half = {(p, q) for q in range(2, 9) for p in range(1, q) if F(p - 1, q) < F(1, 2) < F(p + 1, q)}
        assert around_half <= got
        assert all(_meets(w.s, w.t, K) for w in fam.windows)

    def test_brute_force_enumeration(self):
        K = BorelSet.interval(F(1, 4), F(3, 4))
        fam = interval_family(K, 16)
        expected = [(p, q) for q in range(2, 17) for p in range(1, q) if _meets(F(p - 1, q), F(p + 1, q), K)]
        assert [(w.p, w.q) for w in fam.windows] == expected
        assert len(fam.containment[1]) >= 3
        for n, w in enumerate(fam.windows):
            assert n in fam.containment[n]
            brute = {m for m, v in enumerate(fam.windows) if w.s <= v.s and v.t <= w.t}
            assert fam.containment[n] == brute

    def test_widths_nonincreasing(self):
        fam = interval_family(BorelSet([(0, F(1, 8)), (F(5, 8), F(3, 4))]), 12)
        widths = [w.width for w in fam.windows]
        assert widths == sorted(widths, reverse=True)

    def test_grid_points_covered(self):
        rng = np.random.default_rng(4)
        for m in (4, 8):
            K = random_grid_set(rng, m)
            fam = interval_family(K, 2 * m)
            for iv in K.intervals:
                for x in np.arange(iv.lo * 4 * m, iv.hi * 4 * m):
                    pt = F(int(x), 4 * m) + F(1, 8 * m)
                    assert any(pt in w for w in fam.windows)

    def test_errors(self):
        with pytest.raises(DomainError):
            interval_family(EMPTY, 8)
        with pytest.raises(DomainError):
            interval_family(BorelSet.interval(0, F(1, 2)), 1)


def _check_selection(A, sel, alpha):
    mats = [np.asarray(a, dtype=complex) for a in A]
    for n, (k, P, Q, cert) in enumerate(zip(sel.k, sel.P, sel.Q, sel.certificates)):
        assert cert.holds()
        err = np.linalg.norm(mats[k] - P @ mats[k] @ Q, 2)
        assert abs(err - cert.checks["approximation"]) <= 1e-9
        assert err <= alpha[n]
    for a in range(len(sel.P)):
        for b in range(a + 1, len(sel.P)):
            assert np.abs(sel.P[a] @ sel.P[b]).max() < 1e-9
            assert np.abs(sel.Q[a] @ sel.Q[b]).max() < 1e-9
    total = sum(mats[k] for k in sel.k)
    assert np.linalg.norm(total, 2) <= max(np.linalg.norm(mats[k], 2) for k in sel.k) + sum(alpha[: len(sel.k)]) + 1e-9


class TestSubSum:
    def test_orthogonal_rank_one(self):
        n = 6
        I = np.eye(n)
        A = [np.outer(I[i], I[(i + 1) % n]) for i in range(n)]
        alpha = [2.0 ** -(i + 2) for i in range(n)]
        sel = sub_sum_select(A, alpha)
        assert sel.k == tuple(range(n))
        assert sel.partial_sum_norms[-1] == pytest.approx(1)
        _check_selection(A, sel, alpha)

    def _shared(self):
        n = 10
        I = np.eye(n)
        u = I[0]
        return [0.5 * np.outer(u, u) + 2.0 ** -i * np.outer(I[i], I[i]) for i in range(1, n)]

    def test_shared_component_breaks_small_thresholds(self):
        A = self._shared()
        with pytest.raises(InsufficientDataError, match="step 2"):
            sub_sum_select(A, [0.1 * 2.0 ** -i for i in range(4)])

    def test_shared_component_absorbed_by_large_thresholds(self):
        A = self._shared()
        # step 2 reserves the shared direction, step 3 finds it outside the room left
        alpha = [2.5, 1.5, 1.2]
        sel = sub_sum_select(A, alpha)
        _check_selection(A, sel, alpha)
        split = sel.certificates[2]
        assert split.checks["outside_room"] == pytest.approx(0.5)
        assert split.checks["outside_room"] < split.bounds["outside_room"]

    def test_subset_constraint(self):
        n = 10
        I = np.eye(n)
        A = [np.outer(I[i], I[i]) for i in range(n)]
        alpha = [2.0 ** -i for i in range(3)]
        evens = [set(range(0, n, 2))] * 3
        sel = sub_sum_select(A, alpha, evens)
        assert all(k % 2 == 0 for k in sel.k)
        _check_selection(A, sel, alpha)

    def test_bad_alpha(self):
        with pytest.raises(ParameterError):
            sub_sum_select([np.eye(2)], [0.0])


class TestLinking:
    def test_orthogonal_pieces(self):
        n = 5
        I = np.eye(n)
        P = [np.outer(I[i], I[i]) for i in range(n)]
        D = [2 * p for p in P]
        sel, D_sum = linking_select(P, P, D, 1.0, 0.5)
        assert sel.k == tuple(range(n))
        for k in sel.k:
            assert np.linalg.norm(P[k] @ D_sum @ P[k], 2) == pytest.approx(2)

    def test_precondition_names_index(self):
        n = 5
        I = np.eye(n)
        P = [np.outer(I[i], I[i]) for i in range(n)]
        D = [2 * p for p in P]
        D[3] = 0.5 * P[3]
        with pytest.raises(ParameterError, match="index 3"):
            linking_select(P, P, D, 1.0, 0.5)

    def test_random_instances(self):
        rng = np.random.default_rng(21)
        for _ in range(5):
            A, B, D = random_linking_instance(rng)
            sel, D_sum = linking_select(A, B, D, 1.0, 0.5)
            assert sel.k
            for k in sel.k:
                assert np.linalg.norm(A[k] @ D_sum @ B[k], 2) > 0.5
            assert all(c.holds() for c in sel.certificates)

    def test_block_operators_in_and_out(self):
        sp = ModelSpace(2, 1, 1)
        E = [project(sp, Marker(BorelSet.interval(F(q - 1, 2), F(q, 2)), 1, 1)) for q in (1, 2)]
        D = [E[0] * 3, E[1] * 3]
        sel, D_sum = linking_select(E, E, D, 1.0, 0.5)
        assert isinstance(D_sum, BlockOperator)
        assert np.allclose(D_sum.dense, 3 * np.eye(2))


class TestRowColumnFactors:
    def test_unit_links_per_window(self):
        sp = ModelSpace(8, 2, 1)
        K = BorelSet.interval(F(1, 4), F(1, 2))
        X = BlockOperator.from_links(sp, [Link((q, 2, 1), (q, 1, 1), 1) for q in (3, 4)])
        A, B = row_column_factors(X, K, 1, 2, 1.0)
        assert (A @ X @ B).exactly_equals(project(sp, Marker(K, 1, 2)))
        off = [q for q in range(1, 9) if q not in (3, 4)]
        assert not cell_profile(B)[np.array(off) - 1].any()

    def test_empty_K(self):
        sp = ModelSpace(4, 2, 1)
        X = BlockOperator.from_links(sp, [Link((1, 2, 1), (1, 1, 1), 1)])
        A, B = row_column_factors(X, EMPTY, 1, 2, 1.0)
        assert not A.links and not B.links
        assert not A.dense.any() and not B.dense.any()

    def test_missing_link(self):
        sp = ModelSpace(8, 2, 1)
        K = BorelSet.interval(F(1, 4), F(1, 2))
        X = BlockOperator.from_links(sp, [Link((3, 2, 1), (3, 1, 1), 1)])
        with pytest.raises(CapacityError, match=r"window \[3/8, 1/2\)"):
            row_column_factors(X, K, 1, 2, 1.0)

    def test_dense_operator_rejected(self):
        sp = ModelSpace(2, 1, 1)
        with pytest.raises(UnsupportedOperatorError):
            row_column_factors(BlockOperator(sp, np.eye(2)), BorelSet.interval(0, F(1, 2)), 1, 1, 1.0)

    def test_random_instances(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            X, K, i, j = random_factor_instance(rng)
            A, B = row_column_factors(X, K, i, j, 1.0)
            assert (A @ X @ B).exactly_equals(project(X.space, Marker(K, i, j)))
            assert A.is_symbolic and B.is_symbolic
