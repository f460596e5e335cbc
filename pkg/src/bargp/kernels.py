"""Matern covariance functions, Gram matrices, and spectral densities.

Only half-integer smoothness is supported: nu = m - 1/2 for integer m >= 1,
the family whose sample paths satisfy a finite-order linear stochastic
differential equation. For these orders the covariance has closed
exponential-polynomial forms, so no Bessel-function evaluation is needed
anywhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "KernelHyperparams",
    "TimeSeries",
    "gamma_half_integer",
    "matern_cov",
    "gram_matrix",
    "matern_psd",
]

# Closed covariance forms are implemented for these smoothness indices.
SUPPORTED_ORDERS = (1, 2, 3)


def gamma_half_integer(x: float) -> float:
    """Gamma(x) for positive x on the half-integer grid {1/2, 1, 3/2, ...}.

    Uses Gamma(1/2) = sqrt(pi) and the recurrence Gamma(x + 1) = x Gamma(x),
    so no general Gamma implementation is required.
    """
    twice = round(2.0 * x)
    if twice <= 0 or abs(2.0 * x - twice) > 1e-9:
        raise ValueError(f"expected a positive multiple of 1/2, got {x}")
    if twice % 2 == 0:
        return float(math.factorial(twice // 2 - 1))
    value = math.sqrt(math.pi)
    for k in range((twice - 1) // 2):
        value *= 0.5 + k
    return value


@dataclass(frozen=True)
class KernelHyperparams:
    """Matern hyperparameter triple: smoothness index, magnitude, length scale.

    Parameters
    ----------
    m : int
        Smoothness index; the smoothness is nu = m - 1/2.
    sigma : float
        Magnitude (signal units), strictly positive.
    length_scale : float
        Length scale (time units), strictly positive.

    The inverse-time rate lam = sqrt(2 nu) / length_scale is derived, never
    stored, so lam * length_scale == sqrt(2 m - 1) holds by construction.
    """

    m: int
    sigma: float
    length_scale: float

    def __post_init__(self) -> None:
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"smoothness index m must be a positive integer, got {self.m}")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")
        if not (math.isfinite(self.length_scale) and self.length_scale > 0):
            raise ValueError(f"length_scale must be positive and finite, got {self.length_scale}")

    @property
    def nu(self) -> float:
        return self.m - 0.5

    @property
    def lam(self) -> float:
        return math.sqrt(2.0 * self.m - 1.0) / self.length_scale

    @classmethod
    def from_rate(cls, m: int, sigma: float, lam: float) -> "KernelHyperparams":
        """Construct from the rate parameterization (m, sigma, lam)."""
        if not (math.isfinite(lam) and lam > 0):
            raise ValueError(f"lam must be positive and finite, got {lam}")
        return cls(m=m, sigma=sigma, length_scale=math.sqrt(2.0 * m - 1.0) / lam)


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled observations: t_k = t0 + (k - 1) * delta, k = 1..N.

    The uniform grid is a hard requirement of the discretization; data on
    irregular grids must be resampled before entering this package.
    """

    t0: float
    delta: float
    values: np.ndarray

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta) and self.delta > 0):
            raise ValueError(f"delta must be positive and finite, got {self.delta}")
        vals = np.array(self.values, dtype=float, copy=True).reshape(-1)
        if vals.size < 1:
            raise ValueError("a time series needs at least one observation")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.size

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.delta * np.arange(self.values.size)


def _correlation(u: np.ndarray, m: int) -> np.ndarray:
    """Unit-variance Matern correlation as a function of u = lam * |h|."""
    if m == 1:
        poly = 1.0
    elif m == 2:
        poly = 1.0 + u
    elif m == 3:
        poly = 1.0 + u + u * u / 3.0
    else:
        raise ValueError(f"closed-form covariance implemented for m in {SUPPORTED_ORDERS}, got {m}")
    return poly * np.exp(-u)


def matern_cov(h, psi: KernelHyperparams):
    """Matern covariance at nonnegative time lag(s) h.

    Evaluates the half-integer closed forms, e.g. sigma^2 exp(-h/l) for m = 1
    and sigma^2 (1 + sqrt(3) h / l) exp(-sqrt(3) h / l) for m = 2.
    """
    h_arr = np.asarray(h, dtype=float)
    if np.any(h_arr < 0):
        raise ValueError("time lag h must be nonnegative")
    out = psi.sigma**2 * _correlation(psi.lam * h_arr, psi.m)
    return float(out) if np.isscalar(h) or h_arr.ndim == 0 else out


def gram_matrix(times, psi: KernelHyperparams) -> np.ndarray:
    """Dense covariance matrix K[i, j] = matern_cov(|t_i - t_j|, psi).

    times may be a TimeSeries or any 1-D array of sample locations.
    """
    if isinstance(times, TimeSeries):
        times = times.times
    t = np.asarray(times, dtype=float).reshape(-1)
    if t.size < 1:
        raise ValueError("need at least one time point")
    habs = np.abs(t[:, None] - t[None, :])
    return psi.sigma**2 * _correlation(psi.lam * habs, psi.m)


def matern_psd(omega, psi: KernelHyperparams):
    """Power spectral density of the Matern covariance at angular frequency omega.

    S(w) = sigma^2 * 2 sqrt(pi) Gamma(nu + 1/2) / Gamma(nu)
           * lam^(2 nu) * (lam^2 + w^2)^(-(nu + 1/2))
    """
    w = np.asarray(omega, dtype=float)
    nu = psi.nu
    lam = psi.lam
    const = 2.0 * math.sqrt(math.pi) * gamma_half_integer(nu + 0.5) / gamma_half_integer(nu)
    out = psi.sigma**2 * const * lam ** (2.0 * nu) * (lam**2 + w**2) ** (-(nu + 0.5))
    return float(out) if np.isscalar(omega) or w.ndim == 0 else out
