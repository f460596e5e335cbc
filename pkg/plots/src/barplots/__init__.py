"""Figure rendering for bargp benchmark CSV files."""

from .figures import KINDS, FigureSpec, plot_rmse_vs_runtime, plot_runtime_vs_n, render
from .records import EXPECTED_COLUMNS, EXPECTED_SCHEMA, PlotRecord, SchemaError, read_bench_csv

__version__ = "0.1.0"

__all__ = [
    "EXPECTED_COLUMNS",
    "EXPECTED_SCHEMA",
    "FigureSpec",
    "KINDS",
    "PlotRecord",
    "SchemaError",
    "plot_rmse_vs_runtime",
    "plot_runtime_vs_n",
    "read_bench_csv",
    "render",
]
