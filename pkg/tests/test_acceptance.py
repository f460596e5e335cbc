"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Criteria are property-based plus qualitative reproduction of the benchmark
figure shapes; every tolerance is pinned here. Run with `pytest
tests/test_acceptance.py -v -s` to see the per-criterion lines immediately.
"""

import functools
import math
import time

import numpy as np
import pytest

from bargp import (
    ArSubstitution,
    KernelHyperparams,
    TimeSeries,
    default_prior,
    fit_bar,
    forward_substitute,
    gp_predict,
    gram_matrix,
    log_marginal_likelihood,
    log_marginal_likelihood_gradient,
    matern_psd,
    nls_objective,
    revert_exact_m1,
    revert_nls,
    sde_representation,
    simulate_ar,
)
from bargp.cli import bench_rmse, bench_runtime, loglog_slope

from test_filtering import batch_posterior


def criterion(name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"ACCEPTANCE {name}: FAIL")
                raise
            print(f"ACCEPTANCE {name}: PASS")

        return wrapper

    return decorate


def reversion_sweep(count, seed):
    rng = np.random.default_rng(seed)
    deltas = (0.01, 0.1, 0.5)
    return [(rng.uniform(0.2, 5.0), rng.uniform(0.1, 3.0), deltas[i % 3]) for i in range(count)]


@criterion("exact-reversion-roundtrip-m1")
def test_exact_reversion_roundtrip_m1():
    start = time.perf_counter()
    for lam, sigma, delta in reversion_sweep(100, seed=101):
        psi = KernelHyperparams.from_rate(1, sigma, lam)
        sub = forward_substitute(psi, delta)
        result = revert_exact_m1(sub.theta[0], alpha=2.0, beta=1.0 / sub.tau, delta=delta)
        assert abs(result.psi.lam - lam) <= 1e-12 * lam
        assert abs(result.psi.sigma - sigma) <= 1e-12 * sigma
    assert time.perf_counter() - start < 1.0


@criterion("nls-reversion-roundtrip-m2")
def test_nls_reversion_roundtrip_m2():
    start = time.perf_counter()
    for lam, sigma, delta in reversion_sweep(100, seed=101):
        psi = KernelHyperparams.from_rate(2, sigma, lam)
        sub = forward_substitute(psi, delta)
        result = revert_nls((np.asarray(sub.theta), sub.tau), 2, delta)
        assert abs(result.psi.lam - lam) <= 1e-6 * lam
        assert abs(result.psi.sigma - sigma) <= 1e-4 * sigma
    assert time.perf_counter() - start < 30.0


@criterion("conjugacy-sequential-equals-batch")
def test_conjugacy_sequential_equals_batch():
    rng = np.random.default_rng(202)
    for case in range(100):
        m = 1 + case % 2
        n = int(rng.integers(1, 501))
        theta = [0.9, 0.0][:m] if m == 1 else [1.6, -0.7]
        sub = ArSubstitution(m=m, theta=theta, tau=50.0, delta=0.1)
        series = simulate_ar(sub, n, seed=int(rng.integers(1_000_000)))
        prior = default_prior(m)
        belief = fit_bar(series, m, prior)
        mu_b, lam_b, alpha_b, beta_b = batch_posterior(series.values, m, prior)
        assert np.allclose(belief.mu, mu_b, rtol=1e-10, atol=1e-14)
        assert np.allclose(belief.Lambda, lam_b, rtol=1e-10, atol=1e-14)
        assert math.isclose(belief.alpha, alpha_b, rel_tol=1e-12)
        assert math.isclose(belief.beta, beta_b, rel_tol=1e-10)


@criterion("psd-matching")
def test_psd_matching():
    rng = np.random.default_rng(303)
    omegas = np.linspace(0.0, 10.0, 100)
    for _ in range(20):
        sigma = rng.uniform(0.1, 3.0)
        lam = rng.uniform(0.2, 5.0)
        for m in (1, 2):
            psi = KernelHyperparams.from_rate(m, sigma, lam)
            varsigma2 = sde_representation(psi).varsigma2
            H = (lam + 1j * omegas) ** (-m)
            spectrum = np.abs(H) ** 2 * varsigma2
            reference = matern_psd(omegas, psi)
            assert np.all(np.abs(spectrum - reference) <= 1e-9 * reference)


@criterion("posterior-consistency")
def test_posterior_consistency():
    sub = ArSubstitution(m=1, theta=[0.8], tau=100.0, delta=0.1)
    mu_errors, tau_errors = [], []
    for seed in range(20):
        series = simulate_ar(sub, 5000, seed=404 + seed)
        belief = fit_bar(series, 1)
        mu_errors.append(abs(belief.mu[0] - 0.8))
        tau_map = (belief.alpha - 1.0) / belief.beta
        tau_errors.append(abs(tau_map - 100.0) / 100.0)
    assert float(np.median(mu_errors)) < 0.05
    assert float(np.median(tau_errors)) < 0.20


@criterion("runtime-scaling")
def test_runtime_scaling():
    start = time.perf_counter()
    n_list = [2**k for k in range(2, 11)]
    records = bench_runtime(m=1, n_list=n_list, repeats=10, seed=505)
    medians = {}
    for record in records:
        medians.setdefault((record.method, record.n_points), []).append(record.runtime_seconds)
    medians = {key: float(np.median(times)) for key, times in medians.items()}

    # Scaling exponents are estimated on the asymptotic half of the grid
    # (N >= 64): below that, both curves sit on the fixed per-fit overhead
    # floor of the optimizer and the filter, which carries no information
    # about how cost grows with N.
    tail = [n for n in n_list if n >= 64]
    bar_slope = loglog_slope(tail, [medians[("BAR", n)] for n in tail])
    mml_slope = loglog_slope(tail, [medians[("MML", n)] for n in tail])
    ratio = medians[("MML", 1024)] / medians[("BAR", 1024)]
    print(
        f"  runtime-scaling details: BAR slope {bar_slope:.2f}, MML slope {mml_slope:.2f}, "
        f"N=1024 MML/BAR ratio {ratio:.0f}x"
    )
    assert 0.7 <= bar_slope <= 1.3
    assert mml_slope >= 1.8
    assert ratio >= 10.0
    assert time.perf_counter() - start < 600.0


@criterion("rmse-accuracy")
def test_rmse_accuracy():
    records = bench_rmse(m=1, n=100, repeats=20, seed=0)
    bar = [r.rmse for r in records if r.method == "BAR" and r.rmse is not None]
    mml = [r.rmse for r in records if r.method == "MML" and r.rmse is not None]
    assert len(bar) == 20 and len(mml) == 20
    print(f"  rmse-accuracy details: mean BAR {np.mean(bar):.4f}, mean MML {np.mean(mml):.4f}")
    assert float(np.mean(bar)) <= float(np.mean(mml))


@criterion("gradient-checks")
def test_gradient_checks():
    rng = np.random.default_rng(606)

    # nonlinear least-squares objective wrt (lam, sigma)
    target_psi = KernelHyperparams.from_rate(2, 0.9, 1.2)
    sub = forward_substitute(target_psi, 0.1)
    for _ in range(50):
        lam = rng.uniform(0.3, 4.0)
        sigma = rng.uniform(0.2, 2.5)
        _, grad = nls_objective(lam, sigma, sub.theta, sub.tau, 2, 0.1)
        fd = np.empty(2)
        for i in range(2):
            h = 1e-6 * max(1.0, (lam, sigma)[i])
            d = np.array([h if i == 0 else 0.0, h if i == 1 else 0.0])
            up, _ = nls_objective(lam + d[0], sigma + d[1], sub.theta, sub.tau, 2, 0.1)
            dn, _ = nls_objective(lam - d[0], sigma - d[1], sub.theta, sub.tau, 2, 0.1)
            fd[i] = (up - dn) / (2 * h)
        scale = max(np.abs(fd).max(), 1e-12)
        assert np.all(np.abs(grad - fd) <= 1e-5 * scale)

    # log marginal likelihood wrt (log sigma, log length_scale)
    times = np.arange(24) * 0.15
    psi_draw = KernelHyperparams(m=1, sigma=1.0, length_scale=1.0)
    L = np.linalg.cholesky(gram_matrix(times, psi_draw) + 1e-12 * np.eye(24))
    for k in range(50):
        series = TimeSeries(0.0, 0.15, L @ np.random.default_rng(k).standard_normal(24))
        m = 1 + k % 2
        psi = KernelHyperparams(
            m=m, sigma=rng.uniform(0.3, 2.0), length_scale=rng.uniform(0.3, 2.0)
        )
        grad = log_marginal_likelihood_gradient(series, psi)
        eps = 1e-6
        fd = np.empty(2)
        for i in range(2):
            factor = math.exp(eps)
            up = KernelHyperparams(
                m=m,
                sigma=psi.sigma * (factor if i == 0 else 1.0),
                length_scale=psi.length_scale * (factor if i == 1 else 1.0),
            )
            dn = KernelHyperparams(
                m=m,
                sigma=psi.sigma / (factor if i == 0 else 1.0),
                length_scale=psi.length_scale / (factor if i == 1 else 1.0),
            )
            fd[i] = (log_marginal_likelihood(series, up) - log_marginal_likelihood(series, dn)) / (
                2 * eps
            )
        scale = max(np.abs(fd).max(), 1e-8)
        assert np.all(np.abs(grad - fd) <= 1e-5 * scale)


@criterion("noise-free-interpolation")
def test_noise_free_interpolation():
    rng = np.random.default_rng(707)
    for m in (1, 2):
        psi = KernelHyperparams(m=m, sigma=1.1, length_scale=0.9)
        times = np.arange(80) * 0.1
        L = np.linalg.cholesky(gram_matrix(times, psi) + 1e-12 * np.eye(80))
        values = L @ rng.standard_normal(80)
        train = TimeSeries(0.0, 0.1, values)
        predicted = gp_predict(train, train.times, psi).mean
        assert np.linalg.norm(predicted - values) < 1e-6 * np.linalg.norm(values)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
