"""Noise-free GP prediction, log marginal likelihood, and the MML baseline.

The likelihood is noise-free, so Gram matrices are regularized with a small
relative jitter before factorization: starting at 1e-10 sigma^2 and
escalating tenfold up to 1e-4 sigma^2, after which factorization failure is
raised. Marginal-likelihood maximization runs a quasi-Newton (L-BFGS-B) in
(log sigma, log length_scale) with analytic gradients and a 1000-iteration
cap; each objective evaluation refactorizes the N x N Gram matrix, so the
baseline costs O(L N^3) overall.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve
from scipy.optimize import minimize

from .kernels import KernelHyperparams, TimeSeries, _correlation, gram_matrix

__all__ = [
    "FactorizationError",
    "PredictiveResult",
    "MmlOptions",
    "MmlResult",
    "log_marginal_likelihood",
    "log_marginal_likelihood_gradient",
    "mml_fit",
    "gp_predict",
    "rmse",
]

_JITTER_SCHEDULE = tuple(1e-10 * 10.0**k for k in range(7))  # 1e-10 .. 1e-4, relative


class FactorizationError(RuntimeError):
    """Gram matrix could not be factorized within the jitter escalation policy."""


@dataclass(frozen=True)
class PredictiveResult:
    """Predictive mean and covariance at test times, with RMSE when targets are known."""

    mean: np.ndarray
    cov: np.ndarray
    rmse: float | None = None


@dataclass(frozen=True)
class MmlOptions:
    max_iterations: int = 1000
    gradient_tolerance: float = 1e-5


@dataclass(frozen=True)
class MmlResult:
    """Best iterate of the marginal-likelihood maximization plus diagnostics."""

    psi: KernelHyperparams
    log_marginal: float
    converged: bool
    iterations: int


def _chol_with_jitter(K: np.ndarray, sigma2: float) -> np.ndarray:
    """Lower Cholesky factor of K + jitter * sigma^2 * I under the escalation policy."""
    eye = np.eye(K.shape[0])
    for jitter in _JITTER_SCHEDULE:
        try:
            return np.linalg.cholesky(K + (jitter * sigma2) * eye)
        except np.linalg.LinAlgError:
            continue
    raise FactorizationError(
        f"Cholesky failed for all jitters up to {_JITTER_SCHEDULE[-1]:g} * sigma^2"
    )


def log_marginal_likelihood(series: TimeSeries, psi: KernelHyperparams) -> float:
    """log p(y | t; psi) = -y' K^-1 y / 2 - log|K| / 2 - (N/2) log 2 pi."""
    y = series.values
    K = gram_matrix(series.times, psi)
    L = _chol_with_jitter(K, psi.sigma**2)
    alpha = cho_solve((L, True), y)
    return float(
        -0.5 * y @ alpha - np.sum(np.log(np.diag(L))) - 0.5 * y.size * math.log(2.0 * math.pi)
    )


def _correlation_and_logl_derivative(u: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit-variance correlation C(u) and dC/d(log l) at u = lam * |h|."""
    e = np.exp(-u)
    if m == 1:
        return e, u * e
    if m == 2:
        return (1.0 + u) * e, u * u * e
    if m == 3:
        return (1.0 + u + u * u / 3.0) * e, u * u * (1.0 + u) / 3.0 * e
    raise ValueError(f"gradient implemented for m in (1, 2, 3), got {m}")


def _lml_value_and_grad(x: np.ndarray, habs: np.ndarray, y: np.ndarray, m: int):
    """Negative LML and gradient wrt x = (log sigma, log l), jitter included."""
    sigma, ell = math.exp(x[0]), math.exp(x[1])
    lam = math.sqrt(2.0 * m - 1.0) / ell
    corr, dcorr = _correlation_and_logl_derivative(lam * habs, m)
    sigma2 = sigma * sigma
    K = sigma2 * corr
    L = _chol_with_jitter(K, sigma2)
    alpha = cho_solve((L, True), y)
    K_inv = cho_solve((L, True), np.eye(y.size))

    lml = -0.5 * y @ alpha - np.sum(np.log(np.diag(L))) - 0.5 * y.size * math.log(2.0 * math.pi)
    # The jittered matrix scales exactly as sigma^2, so dK/d(log sigma) = 2 K
    # and the trace identity collapses: g_sigma = alpha' y - N.
    g_sigma = float(alpha @ y) - y.size
    dK_ell = sigma2 * dcorr
    g_ell = 0.5 * float(alpha @ dK_ell @ alpha) - 0.5 * float(np.sum(K_inv * dK_ell))
    return -float(lml), -np.array([g_sigma, g_ell])


def log_marginal_likelihood_gradient(series: TimeSeries, psi: KernelHyperparams) -> np.ndarray:
    """Gradient of the log marginal likelihood wrt (log sigma, log length_scale)."""
    habs = np.abs(series.times[:, None] - series.times[None, :])
    x = np.array([math.log(psi.sigma), math.log(psi.length_scale)])
    _, neg_grad = _lml_value_and_grad(x, habs, series.values, psi.m)
    return -neg_grad


def mml_fit(
    series: TimeSeries,
    m: int,
    init: KernelHyperparams | None = None,
    opts: MmlOptions | None = None,
) -> MmlResult:
    """Maximize the log marginal likelihood over (log sigma, log length_scale).

    Starts at sigma = l = 1 unless an init is given, and always returns the
    best iterate seen, flagged non-converged when the optimizer gave up.
    """
    if len(series) < 2:
        raise ValueError("marginal-likelihood fitting needs at least two observations")
    if opts is None:
        opts = MmlOptions()
    if init is None:
        init = KernelHyperparams(m=m, sigma=1.0, length_scale=1.0)
    if init.m != m:
        raise ValueError(f"init has m={init.m}, expected {m}")

    habs = np.abs(series.times[:, None] - series.times[None, :])
    y = series.values
    best = {"f": math.inf, "x": None}

    def objective(x: np.ndarray):
        try:
            f, g = _lml_value_and_grad(x, habs, y, m)
        except FactorizationError:
            return math.inf, np.zeros(2)
        if f < best["f"]:
            best["f"], best["x"] = f, x.copy()
        return f, g

    x0 = np.array([math.log(init.sigma), math.log(init.length_scale)])
    res = minimize(
        objective,
        x0,
        jac=True,
        method="L-BFGS-B",
        bounds=[(-20.0, 20.0), (-20.0, 20.0)],
        options={"maxiter": opts.max_iterations, "gtol": opts.gradient_tolerance, "ftol": 1e-12},
    )
    x_best = best["x"] if best["x"] is not None else res.x
    f_best, g_best = _lml_value_and_grad(x_best, habs, y, m)
    projected = g_best.copy()
    projected[(x_best <= -20.0) & (projected > 0)] = 0.0
    projected[(x_best >= 20.0) & (projected < 0)] = 0.0
    converged = bool(res.success) and float(np.max(np.abs(projected))) <= opts.gradient_tolerance
    psi = KernelHyperparams(m=m, sigma=math.exp(x_best[0]), length_scale=math.exp(x_best[1]))
    return MmlResult(psi=psi, log_marginal=-f_best, converged=converged, iterations=int(res.nit))


def gp_predict(
    train: TimeSeries,
    test_times,
    psi: KernelHyperparams,
    test_values=None,
) -> PredictiveResult:
    """Noise-free GP conditioning of the Matern prior on the training series.

    mean = Ks' (K + jitter I)^-1 y,  cov = Kss - Ks' (K + jitter I)^-1 Ks.
    When test targets are supplied, the RMSE of the predictive mean against
    them is filled in.
    """
    t_train = train.times
    t_test = np.asarray(test_times, dtype=float).reshape(-1)
    K = gram_matrix(t_train, psi)
    L = _chol_with_jitter(K, psi.sigma**2)
    habs_cross = np.abs(t_train[:, None] - t_test[None, :])
    Ks = psi.sigma**2 * _correlation(psi.lam * habs_cross, psi.m)
    Kss = gram_matrix(t_test, psi)

    mean = Ks.T @ cho_solve((L, True), train.values)
    cov = Kss - Ks.T @ cho_solve((L, True), Ks)
    cov = 0.5 * (cov + cov.T)
    err = None if test_values is None else rmse(mean, test_values)
    return PredictiveResult(mean=mean, cov=cov, rmse=err)


def rmse(pred_mean, targets) -> float:
    """Root mean square deviation between two equal-length vectors."""
    p = np.asarray(pred_mean, dtype=float).reshape(-1)
    t = np.asarray(targets, dtype=float).reshape(-1)
    if p.size != t.size:
        raise ValueError(f"length mismatch: {p.size} vs {t.size}")
    if p.size < 1:
        raise ValueError("need at least one element")
    return float(np.sqrt(np.mean((p - t) ** 2)))
