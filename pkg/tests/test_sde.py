import numpy as np
import pytest

from bargp import (
    KernelHyperparams,
    matern_psd,
    sde_coefficients,
    sde_representation,
    white_noise_density,
)


class TestSdeCoefficients:
    def test_m1_example(self):
        assert np.allclose(sde_coefficients(1, 2.0).a, [2.0], rtol=0)

    def test_m2_example(self):
        assert np.allclose(sde_coefficients(2, 1.0).a, [1.0, 2.0], rtol=0)

    def test_m2_half_rate(self):
        assert np.allclose(sde_coefficients(2, 0.5).a, [0.25, 1.0], rtol=0)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            sde_coefficients(0, 1.0)
        with pytest.raises(ValueError):
            sde_coefficients(1, 0.0)
        with pytest.raises(ValueError):
            sde_coefficients(1, -2.0)


class TestWhiteNoiseDensity:
    def test_m1_unit(self):
        psi = KernelHyperparams.from_rate(1, 1.0, 1.0)
        assert white_noise_density(psi) == pytest.approx(2.0, rel=1e-12)

    def test_m2_unit(self):
        psi = KernelHyperparams.from_rate(2, 1.0, 1.0)
        assert white_noise_density(psi) == pytest.approx(4.0, rel=1e-12)

    def test_m1_scaled(self):
        psi = KernelHyperparams.from_rate(1, 2.0, 3.0)
        assert white_noise_density(psi) == pytest.approx(24.0, rel=1e-12)

    def test_matches_low_order_closed_forms(self):
        # general formula against 2 sigma^2 lam and 4 sigma^2 lam^3
        rng = np.random.default_rng(3)
        for _ in range(20):
            sigma = rng.uniform(0.1, 3.0)
            lam = rng.uniform(0.1, 5.0)
            psi1 = KernelHyperparams.from_rate(1, sigma, lam)
            psi2 = KernelHyperparams.from_rate(2, sigma, lam)
            assert white_noise_density(psi1) == pytest.approx(2 * sigma**2 * lam, rel=1e-12)
            assert white_noise_density(psi2) == pytest.approx(4 * sigma**2 * lam**3, rel=1e-12)


class TestPsdMatching:
    @pytest.mark.parametrize("m", [1, 2])
    def test_transfer_function_spectrum_matches_kernel_psd(self, m):
        # |H(i w)|^2 varsigma^2 must reproduce the Matern PSD, H = (lam + i w)^-m
        psi = KernelHyperparams(m=m, sigma=1.4, length_scale=0.8)
        rep = sde_representation(psi)
        for w in np.arange(0.0, 10.0 + 1e-12, 0.1):
            H = (psi.lam + 1j * w) ** (-m)
            lhs = abs(H) ** 2 * rep.varsigma2
            assert lhs == pytest.approx(matern_psd(float(w), psi), rel=1e-9)

    def test_representation_populates_both_parts(self):
        psi = KernelHyperparams.from_rate(2, 1.0, 1.0)
        rep = sde_representation(psi)
        assert rep.varsigma2 == pytest.approx(4.0, rel=1e-12)
        assert np.allclose(rep.a, [1.0, 2.0])
        assert sde_coefficients(2, 1.0).varsigma2 is None
