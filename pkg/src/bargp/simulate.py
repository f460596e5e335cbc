"""Synthetic data generation and CSV ingestion.

Realizations follow the simulation protocol used throughout the benchmark
experiments: the rate lam is drawn from Beta(10, 4), the noise precision tau
from Gamma(shape=10, rate=1), and the AR recursion at step delta = 0.1 is
driven around a deterministic sinusoid mean with frequency uniform on (0, 2)
and phase uniform on (0, pi). The sinusoid is added to the AR realization;
that choice is isolated here so it can be swapped if desired.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .ar import ArSubstitution, ar_coefficients, simulate_ar
from .kernels import TimeSeries

__all__ = [
    "SimConfig",
    "generate_realization",
    "generate_train_test",
    "load_csv",
]


@dataclass(frozen=True)
class SimConfig:
    """Configuration of one synthetic realization.

    lambda_dist holds the two Beta shape parameters (the second is sometimes
    called a rate; Beta has no conventional rate, so it is read as the second
    shape). tau_dist is (shape, rate) of a Gamma distribution.
    """

    m: int
    n_points: int
    delta: float = 0.1
    lambda_dist: tuple[float, float] = (10.0, 4.0)
    tau_dist: tuple[float, float] = (10.0, 1.0)
    freq_range: tuple[float, float] = (0.0, 2.0)
    phase_range: tuple[float, float] = (0.0, math.pi)
    sinusoid_amplitude: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.m < 1 or self.n_points < 1:
            raise ValueError("m and n_points must be positive")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        for lo, hi in (self.freq_range, self.phase_range):
            if not lo <= hi:
                raise ValueError("ranges must be nonempty")


def _sample_system(cfg: SimConfig, rng: np.random.Generator):
    """Draw (lam, tau, freq, phase) in a fixed order for reproducibility."""
    lam = rng.beta(*cfg.lambda_dist)
    shape, rate = cfg.tau_dist
    tau = rng.gamma(shape, 1.0 / rate)
    freq = rng.uniform(*cfg.freq_range)
    phase = rng.uniform(*cfg.phase_range)
    return lam, tau, freq, phase


def _realize(cfg: SimConfig, n: int, rng: np.random.Generator, lam, tau, freq, phase) -> TimeSeries:
    sub = ArSubstitution(m=cfg.m, theta=ar_coefficients(cfg.m, lam, cfg.delta), tau=tau, delta=cfg.delta)
    base = simulate_ar(sub, n, rng)
    values = base.values + cfg.sinusoid_amplitude * np.sin(2.0 * math.pi * freq * base.times + phase)
    return TimeSeries(t0=base.t0, delta=cfg.delta, values=values)


def generate_realization(cfg: SimConfig) -> tuple[TimeSeries, tuple[float, float]]:
    """One realization and its ground-truth (lam, tau). Deterministic per seed."""
    rng = np.random.default_rng(cfg.seed)
    lam, tau, freq, phase = _sample_system(cfg, rng)
    return _realize(cfg, cfg.n_points, rng, lam, tau, freq, phase), (lam, tau)


def generate_train_test(cfg: SimConfig) -> tuple[TimeSeries, TimeSeries, tuple[float, float]]:
    """Consecutive train/test split of one realization sharing ground truth.

    A single realization of 2 * n_points samples is simulated and split in
    half, so the test grid continues the training grid in time, mirroring
    the windowed train/test protocol of the real-data experiments.
    """
    rng = np.random.default_rng(cfg.seed)
    lam, tau, freq, phase = _sample_system(cfg, rng)
    full = _realize(cfg, 2 * cfg.n_points, rng, lam, tau, freq, phase)
    n = cfg.n_points
    train = TimeSeries(t0=full.t0, delta=cfg.delta, values=full.values[:n])
    test = TimeSeries(t0=full.t0 + n * cfg.delta, delta=cfg.delta, values=full.values[n:])
    return train, test, (lam, tau)


def load_csv(path, column, delta: float, t0: float = 0.0) -> TimeSeries:
    """Read one numeric column of a headered CSV file into a TimeSeries.

    column may be a header name or a zero-based index. Lines starting with
    '#' are comments and skipped. Any row that fails to parse is an error
    (reported with its row number), never silently dropped.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            lines = [line for line in fh if not line.startswith("#")]
    except FileNotFoundError:
        raise FileNotFoundError(f"no such CSV file: {path}") from None

    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None:
        raise ValueError(f"{path}: file has no header row")
    header = [name.strip() for name in header]

    if isinstance(column, int) or (isinstance(column, str) and column.isdigit()):
        index = int(column)
        if not 0 <= index < len(header):
            raise ValueError(f"{path}: column index {index} out of range; columns are {header}")
    else:
        try:
            index = header.index(column)
        except ValueError:
            raise ValueError(f"{path}: no column named {column!r}; available columns: {header}") from None

    values = []
    for row_number, row in enumerate(reader, start=2):
        if not row:
            continue
        try:
            values.append(float(row[index]))
        except (IndexError, ValueError):
            cell = row[index] if index < len(row) else "<missing>"
            raise ValueError(f"{path}: row {row_number}: could not parse {cell!r} as a number") from None
    if not values:
        raise ValueError(f"{path}: no data rows")
    return TimeSeries(t0=t0, delta=delta, values=np.array(values))
