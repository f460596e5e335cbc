"""Recursive conjugate Bayesian estimation of AR coefficients and precision.

The model is y_{k+1} | buffer, theta, tau ~ N(theta' ybar_k, 1/tau) with a
compound Normal-Gamma prior

    p(theta, tau) = N(theta | mu, (tau Lambda)^-1) Gamma(tau | alpha, beta),

which is conjugate, so each observation updates the belief in closed form:

    Lambda' = ybar ybar' + Lambda
    mu'     = Lambda'^-1 (ybar y + Lambda mu)
    alpha'  = alpha + 1/2
    beta'   = beta + (y^2 - mu'' Lambda' mu' + mu' Lambda mu) / 2

One pass over N observations therefore costs O(N m^3) at worst; the mean
update exploits the rank-one structure of ybar ybar' through a single
symmetric solve against the previous precision matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import TimeSeries

__all__ = [
    "FilterNumericsError",
    "NormalGammaBelief",
    "ObservationBuffer",
    "default_prior",
    "ng_update",
    "log_predictive",
    "fit_bar",
    "map_estimates",
]


class FilterNumericsError(RuntimeError):
    """The recursion hit a numerically invalid state (singular Lambda, beta <= 0)."""


@dataclass(frozen=True)
class NormalGammaBelief:
    """Posterior state (mu, Lambda, alpha, beta) of the Normal-Gamma filter."""

    mu: np.ndarray
    Lambda: np.ndarray
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        mu = np.array(self.mu, dtype=float, copy=True).reshape(-1)
        lam = np.array(self.Lambda, dtype=float, copy=True)
        if lam.shape != (mu.size, mu.size):
            raise ValueError(f"Lambda must be {mu.size}x{mu.size}, got {lam.shape}")
        if not np.allclose(lam, lam.T, rtol=1e-8, atol=1e-12):
            raise ValueError("Lambda must be symmetric")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        mu.setflags(write=False)
        lam.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "Lambda", lam)

    @property
    def m(self) -> int:
        return self.mu.size


@dataclass(frozen=True)
class ObservationBuffer:
    """Newest-first window of the last m observations, zero-padded at start."""

    m: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=float, copy=True).reshape(-1)
        if entries.size != self.m:
            raise ValueError(f"expected {self.m} buffer entries, got {entries.size}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def zeros(cls, m: int) -> "ObservationBuffer":
        return cls(m=m, entries=np.zeros(m))

    def push(self, y: float) -> "ObservationBuffer":
        """New buffer with y as the most recent entry."""
        shifted = np.empty(self.m)
        shifted[0] = y
        shifted[1:] = self.entries[:-1]
        return ObservationBuffer(m=self.m, entries=shifted)


def default_prior(m: int) -> NormalGammaBelief:
    """Weakly informative prior: mu = 0, Lambda = 1e-3 I, alpha = 2, beta = 0.1."""
    return NormalGammaBelief(mu=np.zeros(m), Lambda=1e-3 * np.eye(m), alpha=2.0, beta=0.1)


def _update_raw(mu, lam, alpha, beta, ybar, y_next):
    """The conjugate update on plain arrays; shared by ng_update and fit_bar."""
    try:
        u = np.linalg.solve(lam, ybar)
    except np.linalg.LinAlgError as exc:
        raise FilterNumericsError("precision matrix is numerically singular") from exc
    s = float(ybar @ u)
    resid = float(y_next) - float(mu @ ybar)
    mu_new = mu + u * (resid / (1.0 + s))

    lam_new = lam + np.outer(ybar, ybar)
    lam_new = 0.5 * (lam_new + lam_new.T)

    alpha_new = alpha + 0.5
    beta_new = beta + 0.5 * (
        float(y_next) ** 2 - float(mu_new @ lam_new @ mu_new) + float(mu @ lam @ mu)
    )
    if not beta_new > 0:
        raise FilterNumericsError(f"rate parameter became non-positive: {beta_new}")
    return mu_new, lam_new, alpha_new, beta_new


def ng_update(belief: NormalGammaBelief, buffer: ObservationBuffer, y_next: float) -> NormalGammaBelief:
    """One conjugate update of the belief with observation y_next.

    The input belief is never mutated. Raises FilterNumericsError if the
    precision matrix is numerically singular (impossible for a positive
    definite prior, checked defensively) or if the updated beta is not
    strictly positive.
    """
    mu, lam, alpha, beta = _update_raw(
        belief.mu, belief.Lambda, belief.alpha, belief.beta, buffer.entries, y_next
    )
    return NormalGammaBelief(mu=mu, Lambda=lam, alpha=alpha, beta=beta)


def _log_predictive_raw(mu, lam, alpha, beta, ybar, y_next) -> float:
    u = np.linalg.solve(lam, ybar)
    s = float(ybar @ u)
    loc = float(mu @ ybar)
    df = 2.0 * alpha
    var = beta * (1.0 + s) / alpha
    z2 = (float(y_next) - loc) ** 2 / (df * var)
    return (
        math.lgamma(0.5 * (df + 1.0))
        - math.lgamma(0.5 * df)
        - 0.5 * math.log(df * math.pi * var)
        - 0.5 * (df + 1.0) * math.log1p(z2)
    )


def log_predictive(belief: NormalGammaBelief, buffer: ObservationBuffer, y_next: float) -> float:
    """log p(y_next | buffer, belief), a Student-t density; diagnostic only.

    Summing these across a fit gives the log evidence of the AR model; the
    conjugate update itself never needs the normalizer.
    """
    return _log_predictive_raw(
        belief.mu, belief.Lambda, belief.alpha, belief.beta, buffer.entries, y_next
    )


def _fold(values: np.ndarray, m: int, prior: NormalGammaBelief, with_log_evidence: bool):
    # Raw-array loop: one validated belief per fit, not one per observation.
    mu, lam = prior.mu, prior.Lambda
    alpha, beta = prior.alpha, prior.beta
    ybar = np.zeros(m)
    log_evidence = 0.0
    for y in values:
        if with_log_evidence:
            log_evidence += _log_predictive_raw(mu, lam, alpha, beta, ybar, y)
        mu, lam, alpha, beta = _update_raw(mu, lam, alpha, beta, ybar, y)
        ybar = np.concatenate(([y], ybar[:-1]))
    if len(values) == 0:
        return (prior, log_evidence) if with_log_evidence else prior
    belief = NormalGammaBelief(mu=mu, Lambda=lam, alpha=alpha, beta=beta)
    return (belief, log_evidence) if with_log_evidence else belief


def fit_bar(
    series: TimeSeries,
    m: int,
    prior: NormalGammaBelief | None = None,
    *,
    with_log_evidence: bool = False,
):
    """Fold ng_update over the series left to right from a zero buffer.

    Returns the final belief, or (belief, log_evidence) when requested.
    The default prior is `default_prior(m)`.
    """
    if prior is None:
        prior = default_prior(m)
    if prior.m != m:
        raise ValueError(f"prior dimension {prior.m} does not match m={m}")
    return _fold(series.values, m, prior, with_log_evidence)


def map_estimates(belief: NormalGammaBelief) -> tuple[np.ndarray, float]:
    """MAP estimates (mu, (alpha - 1) / beta) of the AR coefficients and precision."""
    if not belief.alpha > 1:
        raise ValueError(f"Gamma mode undefined for alpha <= 1, got alpha={belief.alpha}")
    return belief.mu.copy(), (belief.alpha - 1.0) / belief.beta
