"""Map MAP estimates of the AR parameterization back to kernel hyperparameters.

For m = 1 the substitution is linear and inverts exactly:

    lam = (1 - theta0) / delta,
    sigma^2 = beta / (2 (alpha - 1) (1 - theta0) delta^2).

For m >= 2 the substitution is an overdetermined polynomial system with, in
general, no real solution, so the reversion is posed as nonlinear least
squares over psi = (lam, sigma) in the positive orthant: minimize the sum of
squared deviations of every substitution polynomial from its MAP estimate.
The optimization runs in log-parameters with a logarithmic barrier on the
original scale and deterministic low-discrepancy multistarts; its cost
scales with the kernel order m, not with the number of observations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .ar import ar_coefficient_derivatives, ar_coefficients
from .kernels import KernelHyperparams, gamma_half_integer

__all__ = [
    "InfeasibleReversionError",
    "ReversionResult",
    "NlsOptions",
    "revert_exact_m1",
    "nls_objective",
    "revert_nls",
]

# Box for the log-parameters; generous, it only stops runaway line searches.
_LOG_BOUNDS = (-20.0, 20.0)


class InfeasibleReversionError(RuntimeError):
    """The MAP estimates admit no positive hyperparameters (or no start converged)."""


@dataclass(frozen=True)
class ReversionResult:
    """Reverted hyperparameters plus diagnostics of the solve that produced them."""

    psi: KernelHyperparams
    objective_value: float
    converged: bool
    iterations: int


@dataclass(frozen=True)
class NlsOptions:
    max_iterations: int = 1000
    gradient_tolerance: float = 1e-8
    multistart_count: int = 8
    barrier_weight_schedule: tuple[float, ...] = (1e-2, 1e-5, 1e-8, 1e-11)
    rescale_tau_residual: bool = False

    def __post_init__(self) -> None:
        if self.max_iterations < 1 or self.multistart_count < 1:
            raise ValueError("iteration and multistart counts must be positive")
        if not self.gradient_tolerance > 0:
            raise ValueError("gradient_tolerance must be positive")
        weights = tuple(float(w) for w in self.barrier_weight_schedule)
        if not weights or any(w <= 0 for w in weights):
            raise ValueError("barrier_weight_schedule must be a nonempty positive sequence")
        if any(b >= a for a, b in zip(weights, weights[1:])):
            raise ValueError("barrier_weight_schedule must be decreasing")
        object.__setattr__(self, "barrier_weight_schedule", weights)


def revert_exact_m1(
    theta0: float,
    alpha: float,
    beta: float,
    delta: float,
    clamp_lambda: float | None = None,
) -> ReversionResult:
    """Exact reversion for the order-1 kernel.

    Requires theta0 < 1 (else the implied rate is non-positive) and
    alpha > 1 (else the Gamma mode is undefined). A non-stationary estimate
    theta0 >= 1 is reported as infeasible unless clamp_lambda is given, in
    which case the rate is clamped to that positive floor instead.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if not alpha > 1:
        raise InfeasibleReversionError(f"alpha must exceed 1 for a MAP precision, got {alpha}")
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")

    lam = (1.0 - theta0) / delta
    if lam <= 0:
        if clamp_lambda is None:
            raise InfeasibleReversionError(
                f"theta0={theta0} >= 1 implies a non-positive rate; no valid reversion"
            )
        if not clamp_lambda > 0:
            raise ValueError(f"clamp_lambda must be positive, got {clamp_lambda}")
        lam = clamp_lambda
        sigma2 = beta / (2.0 * (alpha - 1.0) * lam * delta**3)
    else:
        lam = max(lam, clamp_lambda) if clamp_lambda is not None else lam
        sigma2 = beta / (2.0 * (alpha - 1.0) * (1.0 - theta0) * delta**2)
    psi = KernelHyperparams.from_rate(1, math.sqrt(sigma2), lam)
    return ReversionResult(psi=psi, objective_value=0.0, converged=True, iterations=0)


def _noise_constant(m: int) -> float:
    """c_m in varsigma^2 = c_m sigma^2 lam^(2m-1)."""
    nu = m - 0.5
    return 2.0 * math.sqrt(math.pi) * gamma_half_integer(nu + 0.5) / gamma_half_integer(nu)


def nls_objective(
    lam: float,
    sigma: float,
    theta_map: np.ndarray,
    tau_map: float,
    m: int,
    delta: float,
    rescale_tau_residual: bool = False,
) -> tuple[float, np.ndarray]:
    """Sum of squared substitution residuals and its gradient wrt (lam, sigma).

    Residuals are (theta_map_n - theta_n(lam)) for each AR coefficient plus
    (tau_map - tau(lam, sigma)); all enter unweighted unless the tau residual
    is rescaled by delta^(2m+1) to tame its delta^-(2m+1) magnitude.
    """
    theta_map = np.asarray(theta_map, dtype=float).reshape(-1)
    theta = ar_coefficients(m, lam, delta)
    dtheta = ar_coefficient_derivatives(m, lam, delta)
    r_theta = theta_map - theta

    tau = 1.0 / (delta ** (2 * m + 1) * _noise_constant(m) * sigma**2 * lam ** (2 * m - 1))
    dtau_dlam = -(2 * m - 1) * tau / lam
    dtau_dsigma = -2.0 * tau / sigma
    r_tau = tau_map - tau
    w_tau = delta ** (2 * (2 * m + 1)) if rescale_tau_residual else 1.0

    value = float(r_theta @ r_theta) + w_tau * r_tau**2
    grad_lam = -2.0 * float(r_theta @ dtheta) - 2.0 * w_tau * r_tau * dtau_dlam
    grad_sigma = -2.0 * w_tau * r_tau * dtau_dsigma
    return value, np.array([grad_lam, grad_sigma])


def _halton(index: int, base: int) -> float:
    value, f = 0.0, 1.0
    while index > 0:
        f /= base
        value += f * (index % base)
        index //= base
    return value


def _multistart_log_rates(count: int) -> list[float]:
    """Fixed low-discrepancy (Halton, base 2) start points for log lam in [-2, 2]."""
    return [-2.0 + 4.0 * _halton(i + 1, 2) for i in range(count)]


def _profiled_sigma(lam: float, tau_map: float, m: int, delta: float) -> float:
    """The sigma that zeroes the precision residual at the given rate."""
    return math.sqrt(1.0 / (delta ** (2 * m + 1) * _noise_constant(m) * tau_map * lam ** (2 * m - 1)))


def revert_nls(
    belief_map: tuple[np.ndarray, float],
    m: int,
    delta: float,
    opts: NlsOptions | None = None,
) -> ReversionResult:
    """Approximate reversion by positivity-constrained nonlinear least squares.

    belief_map is the (theta, tau) MAP pair. Because sigma enters only the
    precision residual and can always zero it, every global minimizer of the
    full objective has tau(lam, sigma) = tau_map exactly; the magnitude is
    therefore profiled out in closed form and the quasi-Newton descent with
    the logarithmic barrier runs over log lam alone, which also keeps the
    delta^-(2m+1) magnitude of the precision residual out of the rate's
    gradient. Multistarts come from a fixed low-discrepancy set; the best
    final objective wins, ties broken by lowest start index. A non-converged
    best start is returned with converged=False rather than raised; only the
    case where every start fails to produce a finite objective raises
    InfeasibleReversionError.
    """
    if opts is None:
        opts = NlsOptions()
    theta_map, tau_map = belief_map
    theta_map = np.asarray(theta_map, dtype=float).reshape(-1)
    if int(m) != m or m < 2:
        raise ValueError(f"nonlinear reversion applies to m >= 2, got {m}")
    if theta_map.size != m:
        raise ValueError(f"expected {m} MAP coefficients, got {theta_map.size}")
    if not tau_map > 0:
        raise ValueError(f"tau MAP estimate must be positive, got {tau_map}")
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")

    # Uniform scaling of the stage objective; it leaves the minimizer (and the
    # barrier bias w / curvature) untouched but lifts the tiny residual values
    # out of the solver's absolute progress floor. The least-squares values
    # reported to callers stay unscaled.
    scale = delta**-4

    def profiled_objective(x: np.ndarray, weight: float) -> tuple[float, np.ndarray]:
        lam = math.exp(x[0])
        r = theta_map - ar_coefficients(m, lam, delta)
        grad_lam = -2.0 * float(r @ ar_coefficient_derivatives(m, lam, delta))
        value = scale * (float(r @ r) - weight * x[0])
        return value, np.array([scale * (grad_lam * lam - weight)])

    candidates = []
    for start_index, x0 in enumerate(_multistart_log_rates(opts.multistart_count)):
        x = np.array([x0])
        iterations = 0
        success = False
        for weight in opts.barrier_weight_schedule:
            # Each stage must resolve the gradient well below its own barrier
            # weight, or it would stop immediately at the previous stage's bias.
            stage_gtol = scale * min(opts.gradient_tolerance, 1e-2 * weight)
            res = minimize(
                profiled_objective,
                x,
                args=(weight,),
                jac=True,
                method="L-BFGS-B",
                bounds=[_LOG_BOUNDS],
                options={
                    "maxiter": opts.max_iterations,
                    "gtol": stage_gtol,
                    "ftol": 1e-16,
                },
            )
            x = res.x
            iterations += int(res.nit)
            success = bool(res.success)
        lam = math.exp(x[0])
        sigma = _profiled_sigma(lam, tau_map, m, delta)
        value, _ = nls_objective(lam, sigma, theta_map, tau_map, m, delta, opts.rescale_tau_residual)
        if math.isfinite(value):
            candidates.append((value, start_index, lam, sigma, success, iterations))

    if not candidates:
        raise InfeasibleReversionError("all multistarts diverged")
    value, _, lam, sigma, success, iterations = min(candidates, key=lambda c: (c[0], c[1]))
    psi = KernelHyperparams.from_rate(int(m), sigma, lam)
    return ReversionResult(psi=psi, objective_value=value, converged=success, iterations=iterations)
