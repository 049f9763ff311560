import numpy as np
import pytest
from hypothesis import given, strategies as st

from ddfeedback import quantize


class TestLloydTrain:
    def test_identical_samples(self):
        cb = quantize.lloyd_train([3.5] * 10, bits=3)
        np.testing.assert_allclose(cb.levels, 3.5)
        assert cb.distortion_history[-1] == 0.0

    def test_few_distinct_samples_zero_distortion(self):
        cb = quantize.lloyd_train([0.0, 0.0, 1.0, 7.0, 7.0, -2.0], bits=2)
        recon = quantize.sq_reconstruct(cb, quantize.sq_apply(cb, [0.0, 1.0, 7.0, -2.0]))
        np.testing.assert_allclose(recon, [0.0, 1.0, 7.0, -2.0], atol=1e-12)
        assert cb.distortion_history[-1] == 0.0

    def test_two_clusters(self):
        cb = quantize.lloyd_train([-1.0, -1.0, 1.0, 1.0], bits=1)
        np.testing.assert_allclose(cb.levels, [-1.0, 1.0])
        np.testing.assert_allclose(cb.thresholds, [0.0])

    def test_distortion_monotone(self):
        rng = np.random.default_rng(0)
        samples = np.concatenate([rng.normal(-3, 1, 500), rng.normal(2, 0.2, 500)])
        cb = quantize.lloyd_train(samples, bits=3)
        hist = np.asarray(cb.distortion_history)
        assert np.all(np.diff(hist) <= 0)

    def test_beats_best_constant(self):
        rng = np.random.default_rng(1)
        samples = rng.standard_t(3, size=400)
        for bits in (1, 2, 4):
            cb = quantize.lloyd_train(samples, bits)
            recon = quantize.sq_reconstruct(cb, quantize.sq_apply(cb, samples))
            assert np.mean((samples - recon) ** 2) <= np.var(samples) + 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            quantize.lloyd_train([], bits=2)
        with pytest.raises(ValueError):
            quantize.lloyd_train([1.0], bits=0)
        with pytest.raises(ValueError):
            quantize.lloyd_train([1.0], bits=17)

    def test_codebook_shape(self):
        cb = quantize.lloyd_train(np.linspace(0, 1, 100), bits=4)
        assert cb.num_levels == 16
        assert cb.thresholds.shape == (15,)
        assert np.all(np.diff(cb.levels) >= 0)


class TestScalarApply:
    def setup_method(self):
        self.cb = quantize.ScalarCodebook([-2.0, 0.0, 3.0], [-1.0, 1.5])

    def test_nearest_level(self):
        idx = quantize.sq_apply(self.cb, [-5.0, -1.2, 0.4, 2.9])
        np.testing.assert_array_equal(idx, [0, 0, 1, 2])

    def test_threshold_goes_to_upper_cell(self):
        assert quantize.sq_apply(self.cb, -1.0) == 1
        assert quantize.sq_apply(self.cb, 1.5) == 2

    def test_levels_self_quantize(self):
        idx = quantize.sq_apply(self.cb, self.cb.levels)
        recon = quantize.sq_reconstruct(self.cb, idx)
        np.testing.assert_array_equal(recon, self.cb.levels)

    def test_duplicate_levels_canonical_index(self):
        cb = quantize.ScalarCodebook([0.0, 0.0, 1.0], [0.0, 0.5])
        assert quantize.sq_apply(cb, 0.0) == 0
        np.testing.assert_allclose(quantize.sq_reconstruct(cb, [0, 1, 2]), [0, 0, 1])

    def test_index_range_check(self):
        with pytest.raises(ValueError):
            quantize.sq_reconstruct(self.cb, [3])
        with pytest.raises(ValueError):
            quantize.sq_reconstruct(self.cb, [-1])

    def test_codebook_validation(self):
        with pytest.raises(ValueError):
            quantize.ScalarCodebook([1.0, 0.0], [0.5])
        with pytest.raises(ValueError):
            quantize.ScalarCodebook([0.0, 1.0], [2.0])
        with pytest.raises(ValueError):
            quantize.ScalarCodebook([0.0, 1.0], [0.2, 0.8])


class TestPskVq:
    def test_equal_phases_map_to_zero_symbol(self):
        h = np.exp(1j * 0.7) * np.ones(6)
        np.testing.assert_array_equal(quantize.psk_vq(h, bits=3), 0)

    def test_tie_breaks_to_lower_index(self):
        # relative phase exactly midway between symbols 0 and 1 for QPSK
        h = np.array([1.0, 1.0 + 1.0j])
        assert quantize.psk_vq(h, bits=2)[0] == 0

    def test_codeword_self_quantizes(self):
        rng = np.random.default_rng(2)
        idx = rng.integers(0, 8, size=7)
        w = quantize.psk_reconstruct(idx, bits=3)
        h = 2.3 * np.exp(1j * 1.1) * w  # arbitrary gain and global phase
        np.testing.assert_array_equal(quantize.psk_vq(h, bits=3), idx)
        # perfect alignment: gain equals the full channel power
        w_hat = quantize.psk_reconstruct(quantize.psk_vq(h, bits=3), bits=3)
        gain = np.abs(h.conj() @ w_hat) ** 2 / np.linalg.norm(w_hat) ** 2
        assert gain == pytest.approx(np.linalg.norm(h) ** 2, rel=1e-12)

    def test_reconstruction_unit_modulus(self):
        w = quantize.psk_reconstruct([3, 0, 5], bits=3)
        np.testing.assert_allclose(np.abs(w), 1.0, atol=1e-15)
        assert w[0] == 1.0 + 0j

    def test_validation(self):
        with pytest.raises(ValueError):
            quantize.psk_vq(np.zeros(4, dtype=complex), bits=2)
        with pytest.raises(ValueError):
            quantize.psk_vq(np.array([1.0 + 0j]), bits=2)
        with pytest.raises(ValueError):
            quantize.psk_reconstruct([4], bits=2)


class TestSignQuantize:
    def setup_method(self):
        self.rng = np.random.default_rng(3)
        self.p = self.rng.standard_normal((10, 4)) + 1j * self.rng.standard_normal(
            (10, 4)
        )
        self.y = self.rng.standard_normal(10) + 1j * self.rng.standard_normal(10)

    def test_length_and_alphabet(self):
        b = quantize.sign_quantize(self.p, self.y)
        assert b.bits.shape == (8,)
        assert b.num_measurements == 4
        assert set(np.unique(b.bits)) <= {-1.0, 1.0}

    def test_zero_maps_to_plus_one(self):
        b = quantize.sign_quantize(np.eye(2, dtype=complex), np.zeros(2, dtype=complex))
        np.testing.assert_array_equal(b.bits, 1.0)

    def test_stacking_order(self):
        p = np.eye(2, dtype=complex)
        y = np.array([1.0 - 2.0j, -3.0 + 4.0j])
        b = quantize.sign_quantize(p, y)
        np.testing.assert_array_equal(b.real_bits, [1.0, -1.0])
        np.testing.assert_array_equal(b.imag_bits, [-1.0, 1.0])

    def test_scale_invariance(self):
        b1 = quantize.sign_quantize(self.p, self.y)
        b2 = quantize.sign_quantize(self.p, 17.5 * self.y)
        np.testing.assert_array_equal(b1.bits, b2.bits)

    def test_negation_flips(self):
        b1 = quantize.sign_quantize(self.p, self.y)
        b2 = quantize.sign_quantize(self.p, -self.y)
        np.testing.assert_array_equal(b2.bits, -b1.bits)

    def test_dimension_check(self):
        with pytest.raises(ValueError):
            quantize.sign_quantize(self.p, self.y[:-1])


# ---------------------------------------------------------------------------
# invariant suites


@pytest.mark.properties
@given(
    st.lists(st.floats(min_value=-1e6, max_value=1e6), min_size=1, max_size=200),
    st.integers(min_value=1, max_value=5),
)
def test_property_lloyd_distortion_monotone(samples, bits):
    cb = quantize.lloyd_train(samples, bits)
    hist = np.asarray(cb.distortion_history)
    assert np.all(np.diff(hist) <= 1e-12 * np.maximum(hist[:-1], 1.0))


@pytest.mark.properties
@given(
    st.lists(
        st.floats(min_value=-100, max_value=100), min_size=2, max_size=50
    ),
    st.integers(min_value=1, max_value=3),
)
def test_property_reconstruction_is_projection(samples, bits):
    cb = quantize.lloyd_train(samples, bits)
    values = np.asarray(samples)
    once = quantize.sq_reconstruct(cb, quantize.sq_apply(cb, values))
    twice = quantize.sq_reconstruct(cb, quantize.sq_apply(cb, once))
    np.testing.assert_array_equal(once, twice)


@pytest.mark.properties
@given(st.integers(min_value=0, max_value=2**31 - 1), st.floats(min_value=0.01, max_value=1e4))
def test_property_sign_bits_scale_invariant(seed, scale):
    rng = np.random.default_rng(seed)
    p = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    y = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    b1 = quantize.sign_quantize(p, y)
    b2 = quantize.sign_quantize(p, scale * y)
    np.testing.assert_array_equal(b1.bits, b2.bits)


@pytest.mark.properties
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_property_psk_round_trip(seed):
    rng = np.random.default_rng(seed)
    bits = int(rng.integers(1, 5))
    m = int(rng.integers(2, 10))
    idx = rng.integers(0, 2**bits, size=m - 1)
    w = quantize.psk_reconstruct(idx, bits)
    np.testing.assert_array_equal(quantize.psk_vq(w, bits), idx)
