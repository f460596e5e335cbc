"""Command-line driver: simulate, fit, bench-runtime, bench-rmse.

Benchmark records are written as versioned CSV (schema below) so the
plotting layer can consume them without recomputation. Timing uses the
monotonic clock, discards one warm-up fit per (method, N), and pins each
timed fit to a single BLAS thread so the O(N) vs O(N^3) comparison stays
honest. All randomness derives from --seed; reruns are byte-identical up to
the runtime columns.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
import time
from dataclasses import dataclass

import numpy as np

from .filtering import FilterNumericsError, default_prior, fit_bar, map_estimates
from .kernels import KernelHyperparams, TimeSeries
from .regression import FactorizationError, MmlOptions, MmlResult, gp_predict, mml_fit
from .reversion import (
    InfeasibleReversionError,
    NlsOptions,
    ReversionResult,
    revert_exact_m1,
    revert_nls,
)
from .simulate import SimConfig, generate_realization, generate_train_test, load_csv

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover - present in the supported environment
    threadpool_limits = None

__all__ = [
    "BenchRecord",
    "SCHEMA_LINE",
    "BENCH_COLUMNS",
    "run_bar",
    "run_mml",
    "bench_runtime",
    "bench_rmse",
    "write_bench_csv",
    "loglog_slope",
    "main",
]

SCHEMA_LINE = "# schema=1"
BENCH_COLUMNS = ("method", "m", "n_points", "seed", "runtime_seconds", "rmse", "converged")


@dataclass(frozen=True)
class BenchRecord:
    method: str  # "BAR" or "MML"
    m: int
    n_points: int
    seed: int
    runtime_seconds: float
    rmse: float | None
    converged: bool

    def __post_init__(self) -> None:
        if self.method not in ("BAR", "MML"):
            raise ValueError(f"method must be BAR or MML, got {self.method!r}")
        if not self.runtime_seconds > 0:
            raise ValueError(f"runtime must be positive, got {self.runtime_seconds}")

    def to_row(self) -> str:
        rmse = "" if self.rmse is None else repr(self.rmse)
        return ",".join(
            [
                self.method,
                str(self.m),
                str(self.n_points),
                str(self.seed),
                repr(self.runtime_seconds),
                rmse,
                "true" if self.converged else "false",
            ]
        )


def write_bench_csv(records, stream) -> None:
    stream.write(SCHEMA_LINE + "\n")
    stream.write(",".join(BENCH_COLUMNS) + "\n")
    for record in records:
        stream.write(record.to_row() + "\n")


def _single_thread():
    if threadpool_limits is not None:
        return threadpool_limits(limits=1)
    return contextlib.nullcontext()


def run_bar(
    series: TimeSeries,
    m: int,
    prior=None,
    nls_opts: NlsOptions | None = None,
    clamp_lambda: float | None = None,
) -> ReversionResult:
    """Full estimation pipeline: filter, take MAP estimates, revert."""
    belief = fit_bar(series, m, prior)
    theta_map, tau_map = map_estimates(belief)
    if m == 1:
        return revert_exact_m1(theta_map[0], belief.alpha, belief.beta, series.delta, clamp_lambda)
    return revert_nls((theta_map, tau_map), m, series.delta, nls_opts)


def run_mml(series: TimeSeries, m: int, init=None, opts: MmlOptions | None = None) -> MmlResult:
    return mml_fit(series, m, init=init, opts=opts)


def loglog_slope(ns, runtimes) -> float:
    """Least-squares slope of log runtime against log N."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(runtimes, dtype=float))
    x = x - x.mean()
    return float((x @ (y - y.mean())) / (x @ x))


def _record_seed(base_seed: int, block: int, repeat: int) -> int:
    return base_seed + 100_000 * block + repeat


def bench_runtime(m: int, n_list, repeats: int, seed: int, delta: float = 0.1) -> list[BenchRecord]:
    """Time BAR (filter + reversion) and MML end-to-end per realization.

    Data generation and I/O are excluded from the timed region; one warm-up
    fit per (method, N) is discarded. Individual fit failures are recorded
    with converged=false and the run continues.
    """
    records = []
    for block, n in enumerate(n_list):
        for repeat in range(repeats):
            rec_seed = _record_seed(seed, block, repeat)
            series, _ = generate_realization(SimConfig(m=m, n_points=n, delta=delta, seed=rec_seed))
            with _single_thread():
                if repeat == 0:  # warm-up, not recorded
                    for fn in (lambda: run_bar(series, m), lambda: run_mml(series, m)):
                        try:
                            fn()
                        except (InfeasibleReversionError, FilterNumericsError, FactorizationError):
                            pass
                t0 = time.perf_counter()
                try:
                    bar_ok = run_bar(series, m).converged
                except (InfeasibleReversionError, FilterNumericsError):
                    bar_ok = False
                bar_time = time.perf_counter() - t0

                t0 = time.perf_counter()
                try:
                    mml_ok = run_mml(series, m).converged
                except (FactorizationError, ValueError):
                    mml_ok = False
                mml_time = time.perf_counter() - t0
            records.append(BenchRecord("BAR", m, n, rec_seed, bar_time, None, bar_ok))
            records.append(BenchRecord("MML", m, n, rec_seed, mml_time, None, mml_ok))
    return records


def bench_rmse(m: int, n: int, repeats: int, seed: int, delta: float = 0.1) -> list[BenchRecord]:
    """Paired accuracy benchmark: fit both methods on the same train series,
    predict on the held-out continuation, record RMSE and runtime."""
    records = []
    for repeat in range(repeats):
        rec_seed = _record_seed(seed, 0, repeat)
        train, test, _ = generate_train_test(SimConfig(m=m, n_points=n, delta=delta, seed=rec_seed))
        with _single_thread():
            if repeat == 0:
                try:
                    run_bar(train, m)
                    run_mml(train, m)
                except (InfeasibleReversionError, FilterNumericsError, FactorizationError):
                    pass
            t0 = time.perf_counter()
            try:
                bar = run_bar(train, m)
                bar_psi, bar_ok = bar.psi, bar.converged
            except (InfeasibleReversionError, FilterNumericsError):
                bar_psi, bar_ok = None, False
            bar_time = time.perf_counter() - t0

            t0 = time.perf_counter()
            try:
                mml = run_mml(train, m)
                mml_psi, mml_ok = mml.psi, mml.converged
            except (FactorizationError, ValueError):
                mml_psi, mml_ok = None, False
            mml_time = time.perf_counter() - t0

        bar_rmse = None
        if bar_psi is not None:
            bar_rmse = gp_predict(train, test.times, bar_psi, test.values).rmse
        mml_rmse = None
        if mml_psi is not None:
            mml_rmse = gp_predict(train, test.times, mml_psi, test.values).rmse
        records.append(BenchRecord("BAR", m, n, rec_seed, bar_time, bar_rmse, bar_ok))
        records.append(BenchRecord("MML", m, n, rec_seed, mml_time, mml_rmse, mml_ok))
    return records


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _n_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bargp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="write one synthetic realization as CSV")
    sim.add_argument("--m", type=_positive_int, default=1)
    sim.add_argument("--n", type=_positive_int, required=True)
    sim.add_argument("--delta", type=float, default=0.1)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--amplitude", type=float, default=1.0)
    sim.add_argument("--out", default=None)

    fit = sub.add_parser("fit", help="fit hyperparameters to a CSV series")
    fit.add_argument("input", help="CSV file with a header row")
    fit.add_argument("--method", choices=("bar", "mml"), required=True)
    fit.add_argument("--m", type=_positive_int, default=1)
    fit.add_argument("--delta", type=float, default=0.1)
    fit.add_argument("--column", default="y")
    fit.add_argument("--init-sigma", type=float, default=1.0)
    fit.add_argument("--init-length", type=float, default=1.0)
    fit.add_argument("--prior-precision", type=float, default=1e-3)
    fit.add_argument("--prior-alpha", type=float, default=2.0)
    fit.add_argument("--prior-beta", type=float, default=0.1)
    fit.add_argument("--clamp-lambda", type=float, default=None)

    brt = sub.add_parser("bench-runtime", help="runtime-vs-N benchmark CSV")
    brt.add_argument("--m", type=_positive_int, default=1)
    brt.add_argument("--n-list", type=_n_list, default=[2**k for k in range(2, 11)])
    brt.add_argument("--repeats", type=_positive_int, default=10)
    brt.add_argument("--delta", type=float, default=0.1)
    brt.add_argument("--seed", type=int, default=0)
    brt.add_argument("--out", default=None)

    brm = sub.add_parser("bench-rmse", help="paired RMSE-vs-runtime benchmark CSV")
    brm.add_argument("--m", type=_positive_int, default=1)
    brm.add_argument("--n", type=_positive_int, default=100)
    brm.add_argument("--repeats", type=_positive_int, default=20)
    brm.add_argument("--delta", type=float, default=0.1)
    brm.add_argument("--seed", type=int, default=0)
    brm.add_argument("--out", default=None)
    return parser


@contextlib.contextmanager
def _out_stream(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _cmd_simulate(args) -> int:
    cfg = SimConfig(
        m=args.m,
        n_points=args.n,
        delta=args.delta,
        sinusoid_amplitude=args.amplitude,
        seed=args.seed,
    )
    series, (lam, tau) = generate_realization(cfg)
    with _out_stream(args.out) as fh:
        fh.write(f"# lambda={lam!r} tau={tau!r} m={args.m} delta={args.delta!r} seed={args.seed}\n")
        fh.write("t,y\n")
        for t, y in zip(series.times, series.values):
            fh.write(f"{float(t)!r},{float(y)!r}\n")
    return 0


def _print_kv(**kwargs) -> None:
    for key, value in kwargs.items():
        if isinstance(value, bool):
            value = "true" if value else "false"
        print(f"{key}={value}")


def _cmd_fit(args) -> int:
    try:
        series = load_csv(args.input, args.column, args.delta)
    except (OSError, ValueError) as exc:
        print(f"error={exc}", file=sys.stderr)
        return 1

    if args.method == "mml":
        init = KernelHyperparams(m=args.m, sigma=args.init_sigma, length_scale=args.init_length)
        t0 = time.perf_counter()
        try:
            result = run_mml(series, args.m, init=init)
        except (FactorizationError, ValueError) as exc:
            print(f"error={exc}", file=sys.stderr)
            return 1
        elapsed = time.perf_counter() - t0
        _print_kv(
            method="mml",
            m=args.m,
            sigma=result.psi.sigma,
            length_scale=result.psi.length_scale,
            **{"lambda": result.psi.lam},
            log_marginal=result.log_marginal,
            iterations=result.iterations,
            runtime_seconds=elapsed,
            converged=result.converged,
        )
        return 0 if result.converged else 1

    prior = default_prior(args.m)
    prior = type(prior)(
        mu=prior.mu,
        Lambda=args.prior_precision * np.eye(args.m),
        alpha=args.prior_alpha,
        beta=args.prior_beta,
    )
    t0 = time.perf_counter()
    try:
        belief = fit_bar(series, args.m, prior)
        theta_map, tau_map = map_estimates(belief)
    except (FilterNumericsError, ValueError) as exc:
        print(f"error={exc}", file=sys.stderr)
        return 1
    try:
        if args.m == 1:
            result = revert_exact_m1(
                theta_map[0], belief.alpha, belief.beta, series.delta, args.clamp_lambda
            )
        else:
            result = revert_nls((theta_map, tau_map), args.m, series.delta)
    except InfeasibleReversionError as exc:
        elapsed = time.perf_counter() - t0
        _print_kv(
            method="bar",
            m=args.m,
            theta_map=",".join(repr(v) for v in theta_map),
            tau_map=tau_map,
            runtime_seconds=elapsed,
            converged=False,
        )
        print(f"error={exc}", file=sys.stderr)
        return 1
    elapsed = time.perf_counter() - t0
    _print_kv(
        method="bar",
        m=args.m,
        sigma=result.psi.sigma,
        length_scale=result.psi.length_scale,
        **{"lambda": result.psi.lam},
        theta_map=",".join(repr(v) for v in theta_map),
        tau_map=tau_map,
        objective_value=result.objective_value,
        iterations=result.iterations,
        runtime_seconds=elapsed,
        converged=result.converged,
    )
    return 0 if result.converged else 1


def _cmd_bench(records, out) -> int:
    with _out_stream(out) as fh:
        write_bench_csv(records, fh)
    return 0 if all(record.converged for record in records) else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "fit":
        return _cmd_fit(args)
    if args.command == "bench-runtime":
        return _cmd_bench(
            bench_runtime(args.m, args.n_list, args.repeats, args.seed, args.delta), args.out
        )
    if args.command == "bench-rmse":
        return _cmd_bench(bench_rmse(args.m, args.n, args.repeats, args.seed, args.delta), args.out)
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
