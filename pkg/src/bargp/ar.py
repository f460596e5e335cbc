"""Forward finite-difference discretization of the Matern SDE to an AR process.

On a uniform grid with step delta, the order-m SDE becomes

    f_{k+m} = sum_{n=0}^{m-1} theta_n f_{k+n} + delta^m w_k,

with AR coefficients theta obtained by expanding the finite-difference
stencils and collecting coefficients of the lagged samples, and a noise
precision tau = 1 / (delta^(2m+1) varsigma^2) for the aggregated innovation.

Coefficients are exposed newest-first: theta[0] multiplies the most recent
observation, matching the observation-buffer layout used by the filter and
the residual pairing used by the nonlinear least-squares reversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .kernels import KernelHyperparams, TimeSeries
from .sde import white_noise_density

__all__ = [
    "ArSubstitution",
    "ar_coefficients",
    "ar_coefficient_derivatives",
    "noise_precision",
    "forward_substitute",
    "simulate_ar",
]


@dataclass(frozen=True)
class ArSubstitution:
    """AR coefficients (newest-first) and innovation precision at step delta."""

    m: int
    theta: np.ndarray
    tau: float
    delta: float

    def __post_init__(self) -> None:
        theta = np.array(self.theta, dtype=float, copy=True).reshape(-1)
        if theta.size != self.m:
            raise ValueError(f"expected {self.m} AR coefficients, got {theta.size}")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        if not self.tau > 0:
            raise ValueError(f"noise precision tau must be positive, got {self.tau}")
        if not (math.isfinite(self.delta) and self.delta > 0):
            raise ValueError(f"delta must be positive and finite, got {self.delta}")


@lru_cache(maxsize=None)
def _theta_polynomials(m: int) -> tuple[tuple[int, ...], ...]:
    """Integer table c with theta_j = sum_p c[j][p] (lam delta)^p, oldest-first j.

    Built by expanding the discretized equation stencil by stencil. The
    order-m stencil carries the forward-difference signs (-1)^(m-j); the
    lower-order stencils enter with alternating signs anchored positive at
    the oldest sample, (-1)^j. This pairing is the one the m = 1 and m = 2
    closed forms (1 - lam delta) and (2 + 2 lam delta, -1 - 2 lam delta -
    lam^2 delta^2) assume, and the least-squares reversion inverts exactly
    these polynomials.
    """
    c = [[0] * (m + 1) for _ in range(m)]
    for j in range(m):
        c[j][0] = -((-1) ** (m - j)) * math.comb(m, j)
        for n in range(j, m):
            # a_n delta^(m-n) = C(m, n) (lam delta)^(m-n)
            c[j][m - n] -= (-1) ** j * math.comb(m, n) * math.comb(n, j)
    return tuple(tuple(row) for row in c)


def ar_coefficients(m: int, lam: float, delta: float) -> np.ndarray:
    """AR coefficients theta (newest-first) for rate lam and step delta."""
    if int(m) != m or m < 1:
        raise ValueError(f"order m must be a positive integer, got {m}")
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    x = lam * delta
    table = _theta_polynomials(int(m))
    theta = []
    for row in table:
        value = 0.0
        xp = 1.0
        for coef in row:
            if coef:
                value += coef * xp
            xp *= x
        theta.append(value)
    return np.array(theta[::-1])


def ar_coefficient_derivatives(m: int, lam: float, delta: float) -> np.ndarray:
    """d theta / d lam (newest-first), used by the reversion's analytic gradient."""
    x = lam * delta
    table = _theta_polynomials(int(m))
    grad = []
    for row in table:
        value = 0.0
        for p, coef in enumerate(row):
            if coef and p > 0:
                value += coef * p * x ** (p - 1)
        grad.append(value * delta)
    return np.array(grad[::-1])


def noise_precision(psi: KernelHyperparams, delta: float) -> float:
    """Innovation precision tau = 1 / (delta^(2m+1) varsigma^2)."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return 1.0 / (delta ** (2 * psi.m + 1) * white_noise_density(psi))


def forward_substitute(psi: KernelHyperparams, delta: float) -> ArSubstitution:
    """Map kernel hyperparameters to the AR parameterization at step delta."""
    if not (math.isfinite(delta) and delta > 0):
        raise ValueError(f"delta must be positive and finite, got {delta}")
    theta = ar_coefficients(psi.m, psi.lam, delta)
    tau = noise_precision(psi, delta)
    return ArSubstitution(m=psi.m, theta=theta, tau=tau, delta=delta)


def simulate_ar(
    sub: ArSubstitution,
    n: int,
    seed,
    init=None,
    t0: float = 0.0,
) -> TimeSeries:
    """Simulate n samples of the AR recursion with innovation variance 1/tau.

    1/tau equals delta^(2m) * varsigma^2 * delta, the variance of the
    aggregated per-step noise term, so simulation and inference share one
    parameterization. The first m samples are the initial values (zeros
    unless given), after which the recursion runs with independent Gaussian
    innovations. Output is deterministic for a fixed integer seed; a numpy
    Generator may be passed instead to continue an existing stream.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"sample count n must be a positive integer, got {n}")
    m = sub.m
    if init is None:
        init = np.zeros(m)
    init = np.asarray(init, dtype=float).reshape(-1)
    if init.size != m:
        raise ValueError(f"expected {m} initial values, got {init.size}")

    values = np.empty(int(n))
    head = min(m, int(n))
    values[:head] = init[:head]
    if n > m:
        rng = np.random.default_rng(seed)
        scale = 0.0 if math.isinf(sub.tau) else 1.0 / math.sqrt(sub.tau)
        eps = rng.normal(0.0, scale, int(n) - m)
        theta = sub.theta
        for k in range(m, int(n)):
            acc = eps[k - m]
            for i in range(m):
                acc += theta[i] * values[k - 1 - i]
            values[k] = acc
    return TimeSeries(t0=t0, delta=sub.delta, values=values)
