"""Observation operators and the information matrix K = H^T R^-1 H."""

import numpy as np
import pytest

from hybridcond.errors import (
    DimensionMismatch,
    IncompatibleObservationCount,
    NonPositiveVariance,
    TooManyObservations,
)
from hybridcond.observation import (
    ObservationSetup,
    build_H,
    build_K,
    build_R,
    single_time_setup,
)


class TestBuildH:
    def test_variant1_first_points(self):
        H = build_H(1, 4, 2)
        assert np.array_equal(H.matrix, np.array([[1, 0, 0, 0], [0, 1, 0, 0]], dtype=float))

    def test_variant2_strided_columns(self):
        # rows observe columns n/p, 2n/p (1-based), i.e. columns 2 and 4
        H = build_H(2, 4, 2)
        expect = np.zeros((2, 4))
        expect[0, 1] = 1.0
        expect[1, 3] = 1.0
        assert np.array_equal(H.matrix, expect)

    def test_variant3_rows_average_five_points(self):
        H = build_H(3, 20, 4)
        assert np.allclose(H.matrix.sum(axis=1), 1.0)
        for row in H.matrix:
            cols = np.nonzero(row)[0]
            assert len(cols) == 5
            assert np.allclose(row[cols], 0.2)

    def test_variant3_wraparound(self):
        # last centre is column n (1-based) = index n-1, so offsets wrap
        H = build_H(3, 10, 2)
        assert set(np.nonzero(H.matrix[1])[0]) == {7, 8, 9, 0, 1}

    def test_variant4_distinct_unit_columns_and_determinism(self):
        H1 = build_H(4, 30, 10, seed=5)
        H2 = build_H(4, 30, 10, seed=5)
        H3 = build_H(4, 30, 10, seed=6)
        assert np.array_equal(H1.matrix, H2.matrix)
        assert not np.array_equal(H1.matrix, H3.matrix)
        cols = np.argmax(H1.matrix, axis=1)
        assert len(set(cols.tolist())) == 10
        assert np.allclose(H1.matrix.sum(axis=1), 1.0)

    @pytest.mark.parametrize("variant", [1, 2, 4])
    def test_selection_rows_have_single_unit_entry(self, variant):
        H = build_H(variant, 24, 6, seed=9)
        assert np.all(np.sum(H.matrix == 1.0, axis=1) == 1)
        assert np.all(np.sum(H.matrix != 0.0, axis=1) == 1)

    def test_divisibility_errors(self):
        with pytest.raises(IncompatibleObservationCount):
            build_H(2, 10, 3)
        with pytest.raises(IncompatibleObservationCount):
            build_H(3, 10, 3)
        with pytest.raises(IncompatibleObservationCount):
            build_H(3, 4, 2)  # wrap-around would collide columns

    def test_too_many_observations(self):
        with pytest.raises(TooManyObservations):
            build_H(1, 5, 6)


class TestBuildR:
    def test_identity(self):
        assert np.array_equal(build_R(3, 1.0), np.eye(3))

    def test_scaled(self):
        R = build_R(4, 0.25)
        assert np.allclose(np.diag(R), 0.25)
        assert np.allclose(R, R.T)
        w = np.linalg.eigvalsh(R)
        assert w[-1] / w[0] == pytest.approx(1.0)

    def test_rejects_nonpositive(self):
        with pytest.raises(NonPositiveVariance):
            build_R(3, 0.0)


class TestBuildK:
    def test_selection_diagonal(self):
        H = build_H(1, 6, 2)
        K = build_K(single_time_setup(H, 1.0))
        assert np.array_equal(K, np.diag([1.0, 1.0, 0, 0, 0, 0]))

    @pytest.mark.parametrize("variant", [1, 2, 4])
    @pytest.mark.parametrize("sigma2", [1.0, 0.25])
    def test_selection_lambda1_is_inverse_variance(self, variant, sigma2):
        H = build_H(variant, 40, 8, seed=3)
        K = build_K(single_time_setup(H, sigma2))
        lam1 = np.linalg.eigvalsh(K)[-1]
        assert lam1 == pytest.approx(1.0 / sigma2, rel=1e-12)

    def test_two_time_setup_with_doubling_propagator(self):
        # H both identity, M_1 = 2I, R = I: K = I + 4I = 5I
        n = 4
        H = np.eye(n)
        R = np.eye(n)
        setup = ObservationSetup(
            operators=((H, R), (H, R)),
            propagators=(np.eye(n), 2.0 * np.eye(n)),
        )
        assert np.allclose(build_K(setup), 5.0 * np.eye(n))

    def test_symmetric_psd_all_variants(self):
        for variant in (1, 2, 3, 4):
            H = build_H(variant, 40, 10, seed=7)
            K = build_K(single_time_setup(H, 0.5))
            assert np.allclose(K, K.T)
            w = np.linalg.eigvalsh(K)
            assert w[0] >= -1e-12 * w[-1]

    def test_lambda1_equal_for_selection_variants(self):
        lams = {}
        for variant in (1, 2, 4):
            H = build_H(variant, 60, 12, seed=11)
            K = build_K(single_time_setup(H, 0.7))
            lams[variant] = np.linalg.eigvalsh(K)[-1]
        vals = list(lams.values())
        assert max(vals) - min(vals) < 1e-12 * max(vals)

    def test_five_point_lambda1_not_larger_than_selection(self):
        n, p, sigma2 = 60, 12, 1.0
        K1 = build_K(single_time_setup(build_H(1, n, p), sigma2))
        K3 = build_K(single_time_setup(build_H(3, n, p), sigma2))
        lam1 = np.linalg.eigvalsh(K1)[-1]
        lam3 = np.linalg.eigvalsh(K3)[-1]
        assert lam3 <= lam1 + 1e-12

    def test_rank_bounded_by_p(self):
        for variant in (1, 2, 3, 4):
            H = build_H(variant, 50, 10, seed=2)
            K = build_K(single_time_setup(H, 1.0))
            w = np.linalg.eigvalsh(K)
            assert np.sum(w > 1e-10 * w[-1]) <= 10

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            ObservationSetup(operators=((np.eye(3), np.eye(2)),))
        with pytest.raises(DimensionMismatch):
            ObservationSetup(
                operators=((np.eye(3), np.eye(3)),),
                propagators=(np.eye(4),),
            )
