import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from ddfeedback import numerics

import oracles

# Frozen oracle values, computed with mpmath at 50+ decimal digits (tail
# probabilities via erfc in extended precision, erfinv by bisection on erf).
Q_AT_1 = 0.15865525393145705141
LOG_Q = {
    0.5: -1.1759117615936186089,
    2.0: -3.7831843336820319488,
    5.0: -15.064998393988725736,
    10.0: -53.231285150512470578,
    20.0: -203.91715537109726394,
    38.0: -726.5572160188201301,
    -5.0: -2.8665161296376359338e-7,
}
MILLS = {
    -5.0: 1.4867199409049057124e-6,
    0.0: 0.79788456080286535588,
    5.0: 5.1865039671258421156,
    30.0: 30.033259667433677037,
    38.0: 38.026279466575868988,
    100.0: 100.00999800099926071,
}
ERFINV_HALF = 0.47693627620446987338


class TestQFunction:
    def test_zero(self):
        assert numerics.q_function(0.0) == pytest.approx(0.5, abs=1e-15)

    def test_tail_limits(self):
        assert numerics.q_function(60.0) >= 0.0
        assert numerics.q_function(60.0) < 1e-300
        assert numerics.q_function(-60.0) == pytest.approx(1.0, abs=1e-15)

    def test_at_one_vs_quadrature_oracle(self):
        assert numerics.q_function(1.0) == pytest.approx(Q_AT_1, abs=1e-12)

    def test_monotone_decreasing(self):
        xs = np.linspace(-8, 8, 101)
        qs = numerics.q_function(xs)
        assert np.all(np.diff(qs) < 0)


class TestLogQStable:
    def test_zero(self):
        assert numerics.log_q_stable(0.0) == pytest.approx(np.log(0.5), abs=1e-14)

    @pytest.mark.parametrize("x,expected", sorted(LOG_Q.items()))
    def test_frozen_oracle_values(self, x, expected):
        got = numerics.log_q_stable(x)
        assert got == pytest.approx(expected, rel=1e-10)

    def test_against_mp_oracle_on_grid(self):
        xs = np.linspace(-38, 38, 77)
        got = numerics.log_q_stable(xs)
        want = np.array([oracles.log_q_mp(x) for x in xs])
        # relative where the value is away from 0, absolute near lnQ ~ 0
        err = np.abs(got - want) / np.maximum(np.abs(want), 1e-6)
        assert err.max() < 1e-10

    def test_monotone_decreasing(self):
        xs = np.linspace(-38, 38, 300)
        assert np.all(np.diff(numerics.log_q_stable(xs)) < 0)


class TestInverseMillsRatio:
    def test_at_zero(self):
        assert numerics.inverse_mills_ratio(0.0) == pytest.approx(
            np.sqrt(2 / np.pi), abs=1e-14
        )

    def test_left_tail_limit(self):
        assert numerics.inverse_mills_ratio(-200.0) == 0.0

    @pytest.mark.parametrize("x,expected", sorted(MILLS.items()))
    def test_frozen_oracle_values(self, x, expected):
        assert numerics.inverse_mills_ratio(x) == pytest.approx(expected, rel=1e-9)

    def test_against_mp_oracle_on_grid(self):
        xs = np.concatenate([np.linspace(-38, 38, 77), [29.9, 30.1, 31.0, 200.0]])
        got = numerics.inverse_mills_ratio(xs)
        want = np.array([oracles.mills_ratio_mp(x) for x in xs])
        err = np.abs(got - want) / np.maximum(np.abs(want), 1e-300)
        assert err.max() < 1e-9

    def test_branch_seam_is_smooth(self):
        # the asymptotic series takes over just above 30
        below = numerics.inverse_mills_ratio(30.0 - 1e-9)
        above = numerics.inverse_mills_ratio(30.0 + 1e-9)
        assert abs(above - below) < 1e-7


class TestErfinv:
    def test_zero(self):
        assert numerics.erfinv(0.0) == 0.0

    def test_round_trip(self):
        from scipy.special import erf

        assert numerics.erfinv(float(erf(0.7))) == pytest.approx(0.7, abs=1e-10)

    def test_half_vs_bisection_oracle(self):
        assert numerics.erfinv(0.5) == pytest.approx(ERFINV_HALF, abs=1e-12)

    @pytest.mark.parametrize("bad", [1.0, -1.0, 1.5, -2.0])
    def test_domain_error(self, bad):
        with pytest.raises(ValueError):
            numerics.erfinv(bad)


class TestSpectralNormSq:
    def test_identity(self):
        assert numerics.spectral_norm_sq(np.eye(4)) == pytest.approx(1.0, rel=1e-10)

    def test_diag(self):
        assert numerics.spectral_norm_sq(np.diag([3.0, 1.0])) == pytest.approx(
            9.0, rel=1e-10
        )

    def test_random_rect_vs_svd_oracle(self):
        rng = np.random.default_rng(7)
        a = rng.standard_normal((5, 7))
        want = np.linalg.svd(a, compute_uv=False)[0] ** 2
        assert numerics.spectral_norm_sq(a) == pytest.approx(want, rel=1e-6)

    def test_ones_orthogonal_to_top_eigenvector(self):
        # all-ones start is exactly orthogonal to the dominant direction here;
        # the extra deterministic starts must still find sigma_max^2 = 4
        a = np.array([[1.0, -1.0], [-1.0, 1.0]])
        assert numerics.spectral_norm_sq(a) == pytest.approx(4.0, rel=1e-8)

    def test_zero_matrix(self):
        assert numerics.spectral_norm_sq(np.zeros((3, 2))) == 0.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            numerics.spectral_norm_sq(np.zeros((0, 3)))


class TestPseudoInverseApply:
    def test_identity(self):
        b = np.arange(6.0).reshape(3, 2)
        out = numerics.pseudo_inverse_apply(np.eye(3), b)
        np.testing.assert_allclose(out, b, atol=1e-14)

    def test_overdetermined_consistent(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((9, 4)) + 1j * rng.standard_normal((9, 4))
        x = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
        out = numerics.pseudo_inverse_apply(a, a @ x)
        np.testing.assert_allclose(out, x, atol=1e-10)

    def test_residual_orthogonality_tall(self):
        rng = np.random.default_rng(4)
        a = rng.standard_normal((10, 3))
        b = rng.standard_normal((10, 2))
        out = numerics.pseudo_inverse_apply(a, b)
        resid = b - a @ out
        assert np.abs(a.conj().T @ resid).max() < 1e-8

    def test_wide_min_norm(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((3, 8))
        b = rng.standard_normal(3)
        out = numerics.pseudo_inverse_apply(a, b)
        np.testing.assert_allclose(a @ out, b, atol=1e-10)
        np.testing.assert_allclose(out, np.linalg.pinv(a) @ b, atol=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            numerics.pseudo_inverse_apply(np.eye(3), np.ones((4, 1)))

    def test_singular_falls_back_with_warning(self):
        a = np.zeros((4, 2))
        a[:, 0] = 1.0  # second column identically zero: rank deficient
        b = np.ones(4)
        with pytest.warns(numerics.PseudoInverseFallbackWarning):
            out = numerics.pseudo_inverse_apply(a, b)
        assert np.all(np.isfinite(out))

    def test_right_pinv(self):
        rng = np.random.default_rng(6)
        a = rng.standard_normal((8, 3)) + 1j * rng.standard_normal((8, 3))
        b = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
        out = numerics.apply_right_pinv(b, a)
        np.testing.assert_allclose(out, b @ np.linalg.pinv(a), atol=1e-10)


class TestKronVecUnvec:
    def test_vec_column_major(self):
        a = np.array([[1.0, 3.0], [2.0, 4.0]])
        np.testing.assert_array_equal(numerics.vec(a), [1.0, 2.0, 3.0, 4.0])

    def test_kron_block_diagonal(self):
        a = np.arange(4.0).reshape(2, 2) + 1.0
        k = numerics.kron(np.eye(2), a)
        np.testing.assert_array_equal(k[:2, :2], a)
        np.testing.assert_array_equal(k[2:, 2:], a)
        np.testing.assert_array_equal(k[:2, 2:], np.zeros((2, 2)))

    def test_vectorization_identity(self):
        rng = np.random.default_rng(11)
        a = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        g = rng.standard_normal((4, 5)) + 1j * rng.standard_normal((4, 5))
        b = rng.standard_normal((6, 5)) + 1j * rng.standard_normal((6, 5))
        lhs = numerics.vec(a @ g @ b.conj().T)
        rhs = numerics.kron(b.conj().T.T, a) @ numerics.vec(g)
        assert np.abs(lhs - rhs).max() < 1e-10

    def test_unvec_size_check(self):
        with pytest.raises(ValueError):
            numerics.unvec(np.zeros(5), 2, 3)


# ---------------------------------------------------------------------------
# invariant suites


@pytest.mark.properties
@given(st.floats(min_value=-38, max_value=38, allow_nan=False))
def test_property_q_symmetry(x):
    assert numerics.q_function(x) + numerics.q_function(-x) == pytest.approx(
        1.0, abs=1e-12
    )


@pytest.mark.properties
@given(st.floats(min_value=-37, max_value=37, allow_nan=False))
def test_property_log_q_consistent_with_q(x):
    q = numerics.q_function(x)
    if q < 1e-300:
        return
    assert np.exp(numerics.log_q_stable(x)) == pytest.approx(q, rel=1e-10)


@pytest.mark.properties
@given(
    hnp.arrays(
        np.float64,
        hnp.array_shapes(min_dims=2, max_dims=2, min_side=1, max_side=20),
        elements=st.floats(min_value=-1e3, max_value=1e3, width=64),
    )
)
def test_property_spectral_norm_matches_svd(a):
    want = float(np.linalg.svd(a, compute_uv=False)[0] ** 2)
    got = numerics.spectral_norm_sq(a)
    assert got == pytest.approx(want, rel=1e-6, abs=1e-9)


@pytest.mark.properties
@given(
    st.integers(min_value=1, max_value=12),
    st.integers(min_value=1, max_value=12),
    st.integers(min_value=0, max_value=2**31 - 1),
)
def test_property_unvec_vec_identity(rows, cols, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    np.testing.assert_array_equal(numerics.unvec(numerics.vec(a), rows, cols), a)
