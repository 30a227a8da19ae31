import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from config import Config
from models.errors import DomainError
from models.spectrum import ConeLabel, Spectrum
from numerics.symfun import (cone_margin, in_gamma_k, lemma_shift, newton_maclaurin_gap, quotient_21,
                             quotient_21_gradient, sample_gamma2, sigma_k, sigma_k_enumerate,
                             sigma_k_partial, sigma_table)
from utils.rng import make_rng


def spectra(min_n=2, max_n=8, bound=3.0):
    return st.integers(min_n, max_n).flatmap(
        lambda n: arrays(np.float64, n, elements=st.floats(-bound, bound, allow_nan=False, allow_subnormal=False)))


def abs_scale(lam, k):
    return sigma_k(np.abs(lam), k)


class TestSpectrum:

    def test_rejects_short_vectors(self):
        with pytest.raises(DomainError):
            Spectrum([1.0])

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            Spectrum([1.0, np.nan])

    def test_values_are_read_only(self):
        s = Spectrum([1.0, 2.0])
        with pytest.raises(ValueError):
            s.values[0] = 3.0

    def test_cone_label_range(self):
        assert str(ConeLabel(2, 3)) == "Gamma_2(R^3)"
        with pytest.raises(DomainError):
            ConeLabel(4, 3)


class TestSigmaK:

    @pytest.mark.parametrize("lam, k, expected", [
        ((1, 1, 1), 2, 3.0),
        ((2, 1, 1), 2, 5.0),
        ((2, 1, 1), 0, 1.0),
        ((2, 1, 1), 3, 2.0),
    ])
    def test_examples(self, lam, k, expected):
        assert sigma_k(lam, k) == expected

    @pytest.mark.parametrize("k", [-1, 4])
    def test_index_out_of_range(self, k):
        with pytest.raises(DomainError):
            sigma_k((1, 2, 3), k)

    @settings(deadline=None)
    @given(lam=spectra(), data=st.data())
    def test_matches_subset_enumeration(self, lam, data):
        k = data.draw(st.integers(0, lam.size))
        assert abs(sigma_k(lam, k) - sigma_k_enumerate(lam, k)) <= 1e-13 * abs_scale(lam, k) + 1e-300

    @settings(deadline=None)
    @given(lam=spectra(max_n=10), data=st.data())
    def test_permutation_invariance(self, lam, data):
        k = data.draw(st.integers(0, lam.size))
        perm = data.draw(st.permutations(range(lam.size)))
        assert abs(sigma_k(lam[list(perm)], k) - sigma_k(lam, k)) <= 1e-12 * abs_scale(lam, k) + 1e-300

    @settings(deadline=None)
    @given(lam=spectra(max_n=10), t=st.floats(0.1, 10.0), data=st.data())
    def test_homogeneity(self, lam, t, data):
        k = data.draw(st.integers(0, lam.size))
        assert abs(sigma_k(t * lam, k) - t ** k * sigma_k(lam, k)) <= 1e-12 * t ** k * abs_scale(lam, k) + 1e-300

    def test_table_matches_scalar_evaluation(self, rng):
        lam = rng.standard_normal((50, 6))
        table = sigma_table(lam, 6)
        for row, values in zip(table, lam):
            assert_allclose(row, [sigma_k(values, k) for k in range(7)], rtol=0, atol=0)


class TestSigmaKPartial:

    def test_examples(self):
        assert sigma_k_partial((1, 1, 1), 2, 1) == 2.0
        # entry 0 deleted leaves (1, 1)
        assert sigma_k_partial((2, 1, 1), 2, 0) == 2.0
        assert sigma_k_partial((2, 1, 1), 2, 1) == 3.0

    def test_index_out_of_range(self):
        with pytest.raises(DomainError):
            sigma_k_partial((1, 1, 1), 2, 3)
        with pytest.raises(DomainError):
            sigma_k_partial((1, 1, 1), 0, 0)

    def test_matches_central_differences(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 9))
            lam = rng.uniform(-2.0, 2.0, n)
            k = int(rng.integers(1, n + 1))
            for i in range(n):
                step = Config.FD_RELATIVE_STEP * (1.0 + abs(lam[i]))
                plus, minus = lam.copy(), lam.copy()
                plus[i] += step
                minus[i] -= step
                fd = (sigma_k(plus, k) - sigma_k(minus, k)) / (2 * step)
                exact = sigma_k_partial(lam, k, i)
                scale = sigma_k(np.abs(np.delete(lam, i)), k - 1)
                assert abs(fd - exact) <= 1e-6 * max(scale, 1.0)


class TestCones:

    @pytest.mark.parametrize("lam, k, expected", [
        ((1, 1, 1), 3, True),
        ((1, 1, 0), 2, True),
        ((1, 1, -0.5), 2, False),
        ((1, 1, 0), 3, False),
    ])
    def test_membership(self, lam, k, expected):
        assert in_gamma_k(lam, k) is expected

    def test_margin_sign_matches_membership(self):
        assert cone_margin((1, 1, 0), 2) == 1.0
        assert cone_margin((1, 1, -0.5), 2) == 0.0

    @settings(deadline=None)
    @given(lam=spectra(max_n=6), data=st.data())
    def test_cone_nesting(self, lam, data):
        k = data.draw(st.integers(1, lam.size))
        if in_gamma_k(lam, k):
            assert all(in_gamma_k(lam, l) for l in range(1, k))


class TestNewtonMaclaurin:

    def test_examples(self):
        assert newton_maclaurin_gap((1, 1, 1)) == pytest.approx(0.0, abs=1e-12)
        assert newton_maclaurin_gap((2, 1, 1)) == pytest.approx(1.0 / 3.0, rel=1e-12)

    @settings(deadline=None)
    @given(lam=spectra(max_n=10, bound=10.0))
    def test_gap_is_nonnegative(self, lam):
        assert newton_maclaurin_gap(lam) >= -1e-12 * (1.0 + lam.sum() ** 2)


class TestQuotient:

    def test_examples(self):
        assert quotient_21((1, 1, 1)) == 1.0
        assert quotient_21((2, 1, 1)) == 1.25

    def test_undefined_without_positive_trace(self):
        with pytest.raises(DomainError):
            quotient_21((1, -1, 0))
        with pytest.raises(DomainError):
            quotient_21_gradient((-1, -1, 0))

    def test_homogeneity(self):
        assert quotient_21((4, 2, 2)) == 2 * quotient_21((2, 1, 1))

    def test_gradient_at_ones(self):
        assert_allclose(quotient_21_gradient((1, 1, 1)), [1 / 3, 1 / 3, 1 / 3], rtol=1e-15)

    def test_gradient_identities_on_gamma2(self, rng):
        for n in range(2, 9):
            for lam in sample_gamma2(rng, n, 100):
                grad = quotient_21_gradient(lam)
                assert grad.min() > 0
                assert float(lam @ grad) == pytest.approx(quotient_21(lam), rel=1e-12, abs=1e-14)
                for i in range(n):
                    step = Config.FD_RELATIVE_STEP * (1.0 + abs(lam[i]))
                    plus, minus = lam.copy(), lam.copy()
                    plus[i] += step
                    minus[i] -= step
                    fd = (quotient_21(plus) - quotient_21(minus)) / (2 * step)
                    assert fd == pytest.approx(grad[i], rel=1e-6, abs=1e-9)


class TestLemmaShift:

    def test_ones_in_three_dimensions(self):
        mu = lemma_shift((1, 1, 1))
        assert_allclose(mu.values, [0.5, 0.5, 0.5], rtol=1e-15)
        assert sigma_k(mu, 2) == pytest.approx(0.75, rel=1e-15)

    def test_two_one_one(self):
        mu = lemma_shift((2, 1, 1))
        assert_allclose(mu.values, [11 / 8, 3 / 8, 3 / 8], rtol=1e-15)
        assert sigma_k(mu, 2) == pytest.approx(75 / 64, rel=1e-14)
        assert sigma_k(mu, 2) == pytest.approx(0.75 * 1.25 ** 2, rel=1e-14)

    @pytest.mark.parametrize("n", range(2, 11))
    def test_all_ones_closed_form(self, n):
        mu = lemma_shift(np.ones(n))
        assert_allclose(mu.values, 0.5 * np.ones(n), rtol=1e-14)
        assert sigma_k(mu, 2) == pytest.approx(n * (n - 1) / 8, rel=1e-13)

    @pytest.mark.parametrize("lam", [(1, 1, -0.5), (-1, -1, -1), (1, -2)])
    def test_rejects_closed_cone_and_outside(self, lam):
        with pytest.raises(DomainError):
            lemma_shift(lam)

    @pytest.mark.parametrize("n", [2, 3, 5, 10])
    def test_identities_on_samples(self, n):
        rng = make_rng(n)
        for lam in sample_gamma2(rng, n, 500):
            s1, s2 = sigma_k(lam, 1), sigma_k(lam, 2)
            q = s2 / s1
            mu = lemma_shift(lam)
            assert abs(sigma_k(mu, 2) - n / (2 * (n - 1)) * q ** 2) <= 1e-12 * (1 + s1 ** 2)
            assert sigma_k(mu, 1) >= (0.5 - 1e-12) * s1
            assert in_gamma_k(mu, 2)


class TestSampling:

    def test_samples_lie_in_gamma2_box(self):
        samples = sample_gamma2(make_rng(1), 4, 1000)
        assert samples.shape == (1000, 4)
        assert samples.min() >= Config.GAMMA2_SAMPLE_LOW
        assert samples.max() < Config.GAMMA2_SAMPLE_HIGH
        assert all(in_gamma_k(lam, 2) for lam in samples)

    def test_same_seed_same_stream(self):
        assert np.array_equal(sample_gamma2(make_rng(5), 3, 200), sample_gamma2(make_rng(5), 3, 200))

    def test_empty_request(self):
        rng = make_rng(5)
        assert sample_gamma2(rng, 3, 0).shape == (0, 3)
        assert np.array_equal(rng.random(4), make_rng(5).random(4))
