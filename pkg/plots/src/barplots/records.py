"""Reading and validation of schema=1 benchmark CSV files.

The file contract, produced by the bargp CLI: first line `# schema=1`,
second line the header `method,m,n_points,seed,runtime_seconds,rmse,converged`,
then one record per line with an empty rmse field when no accuracy was
measured. This module only parses; all science stays upstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

__all__ = ["SchemaError", "PlotRecord", "EXPECTED_SCHEMA", "EXPECTED_COLUMNS", "read_bench_csv"]

EXPECTED_SCHEMA = "# schema=1"
EXPECTED_COLUMNS = ("method", "m", "n_points", "seed", "runtime_seconds", "rmse", "converged")


class SchemaError(ValueError):
    """The input file is not a schema=1 benchmark CSV."""


@dataclass(frozen=True)
class PlotRecord:
    method: str
    m: int
    n_points: int
    seed: int
    runtime_seconds: float
    rmse: float | None
    converged: bool


def read_bench_csv(path) -> list[PlotRecord]:
    """Parse a schema=1 benchmark CSV into records, validating the envelope."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        raise FileNotFoundError(f"no such benchmark CSV: {path}") from None
    if not lines or lines[0].strip() != EXPECTED_SCHEMA:
        raise SchemaError(f"{path}: expected first line {EXPECTED_SCHEMA!r}")
    if len(lines) < 2 or tuple(lines[1].strip().split(",")) != EXPECTED_COLUMNS:
        raise SchemaError(f"{path}: expected header {','.join(EXPECTED_COLUMNS)!r}")

    records = []
    for number, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(EXPECTED_COLUMNS):
            raise SchemaError(f"{path}: line {number}: expected {len(EXPECTED_COLUMNS)} fields")
        method, m, n_points, seed, runtime, rmse, converged = parts
        try:
            records.append(
                PlotRecord(
                    method=method,
                    m=int(m),
                    n_points=int(n_points),
                    seed=int(seed),
                    runtime_seconds=float(runtime),
                    rmse=None if rmse == "" else float(rmse),
                    converged=converged.strip().lower() == "true",
                )
            )
        except ValueError:
            raise SchemaError(f"{path}: line {number}: malformed record {line!r}") from None
    return records
