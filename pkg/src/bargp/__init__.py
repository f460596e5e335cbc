"""Matern-kernel GP hyperparameter estimation by recursive Bayesian autoregression.

The estimation pipeline (BAR) discretizes the kernel's stochastic
differential equation to an autoregressive process, runs an exact conjugate
Normal-Gamma filter over the observations, and reverts the MAP estimates to
kernel hyperparameters. A marginal-likelihood baseline (MML), the noise-free
GP predictive distribution, and benchmark tooling complete the package.
"""

from .ar import (
    ArSubstitution,
    ar_coefficients,
    forward_substitute,
    noise_precision,
    simulate_ar,
)
from .filtering import (
    FilterNumericsError,
    NormalGammaBelief,
    ObservationBuffer,
    default_prior,
    fit_bar,
    log_predictive,
    map_estimates,
    ng_update,
)
from .kernels import (
    KernelHyperparams,
    TimeSeries,
    gamma_half_integer,
    gram_matrix,
    matern_cov,
    matern_psd,
)
from .regression import (
    FactorizationError,
    MmlOptions,
    MmlResult,
    PredictiveResult,
    gp_predict,
    log_marginal_likelihood,
    log_marginal_likelihood_gradient,
    mml_fit,
    rmse,
)
from .reversion import (
    InfeasibleReversionError,
    NlsOptions,
    ReversionResult,
    nls_objective,
    revert_exact_m1,
    revert_nls,
)
from .sde import SdeCoefficients, sde_coefficients, sde_representation, white_noise_density
from .simulate import SimConfig, generate_realization, generate_train_test, load_csv

__version__ = "0.1.0"

__all__ = [
    "ArSubstitution",
    "FactorizationError",
    "FilterNumericsError",
    "InfeasibleReversionError",
    "KernelHyperparams",
    "MmlOptions",
    "MmlResult",
    "NlsOptions",
    "NormalGammaBelief",
    "ObservationBuffer",
    "PredictiveResult",
    "ReversionResult",
    "SdeCoefficients",
    "SimConfig",
    "TimeSeries",
    "ar_coefficients",
    "default_prior",
    "fit_bar",
    "forward_substitute",
    "gamma_half_integer",
    "generate_realization",
    "generate_train_test",
    "gp_predict",
    "gram_matrix",
    "load_csv",
    "log_marginal_likelihood",
    "log_marginal_likelihood_gradient",
    "log_predictive",
    "map_estimates",
    "matern_cov",
    "matern_psd",
    "mml_fit",
    "ng_update",
    "nls_objective",
    "noise_precision",
    "revert_exact_m1",
    "revert_nls",
    "rmse",
    "sde_coefficients",
    "sde_representation",
    "simulate_ar",
    "white_noise_density",
]
