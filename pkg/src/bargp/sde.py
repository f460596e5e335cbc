"""Continuous-time SDE representation of a half-integer Matern process.

An order-m Matern process is the stationary solution of

    d^m f / dt^m + sum_n a_n d^n f / dt^n = w(t),

where w is white noise with spectral density varsigma^2. The coefficients
come from matching the transfer-function spectrum (lam + i w)^(-m) against
the Matern power spectral density; the leading coefficient a_m is always 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import KernelHyperparams, gamma_half_integer

__all__ = [
    "SdeCoefficients",
    "sde_coefficients",
    "white_noise_density",
    "sde_representation",
]


@dataclass(frozen=True)
class SdeCoefficients:
    """Coefficients a_0..a_{m-1} (lowest order first) and noise density.

    varsigma2 is None when only the drift side has been derived; use
    sde_representation to populate both parts from kernel hyperparameters.
    """

    m: int
    a: np.ndarray
    varsigma2: float | None = None

    def __post_init__(self) -> None:
        a = np.array(self.a, dtype=float, copy=True).reshape(-1)
        if a.size != self.m:
            raise ValueError(f"expected {self.m} coefficients, got {a.size}")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)
        if self.varsigma2 is not None and not self.varsigma2 > 0:
            raise ValueError(f"varsigma2 must be positive, got {self.varsigma2}")


def sde_coefficients(m: int, lam: float) -> SdeCoefficients:
    """Drift coefficients a_n = C(m, n) lam^(m - n) for n = 0..m-1."""
    if int(m) != m or m < 1:
        raise ValueError(f"order m must be a positive integer, got {m}")
    if not (math.isfinite(lam) and lam > 0):
        raise ValueError(f"lam must be positive and finite, got {lam}")
    a = np.array([math.comb(m, n) * lam ** (m - n) for n in range(m)])
    return SdeCoefficients(m=int(m), a=a)


def white_noise_density(psi: KernelHyperparams) -> float:
    """Spectral density of the driving white noise.

    varsigma^2 = sigma^2 lam^(2 nu) 2 sqrt(pi) Gamma(nu + 1/2) / Gamma(nu),
    which reduces to 2 sigma^2 lam for m = 1 and 4 sigma^2 lam^3 for m = 2.
    """
    nu = psi.nu
    const = 2.0 * math.sqrt(math.pi) * gamma_half_integer(nu + 0.5) / gamma_half_integer(nu)
    return psi.sigma**2 * psi.lam ** (2.0 * nu) * const


def sde_representation(psi: KernelHyperparams) -> SdeCoefficients:
    """Full SDE representation (drift coefficients and noise density) of psi."""
    drift = sde_coefficients(psi.m, psi.lam)
    return SdeCoefficients(m=drift.m, a=drift.a, varsigma2=white_noise_density(psi))
