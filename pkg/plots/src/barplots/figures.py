"""Figure rendering from benchmark records.

Two figure kinds mirror the benchmark experiments: runtime against training
set size (per-record dots plus a per-method average line on log-log axes)
and RMSE against runtime (one marker style per method, hollow markers for
non-converged fits). Output is deterministic for a fixed input and spec:
fixed figure geometry, fixed style, no timestamps.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .records import PlotRecord, read_bench_csv

__all__ = ["FigureSpec", "KINDS", "plot_runtime_vs_n", "plot_rmse_vs_runtime", "render"]

KINDS = ("runtime_vs_n", "rmse_vs_runtime")

_METHOD_STYLE = {
    "BAR": dict(color="#1f77b4", marker="o"),
    "MML": dict(color="#d62728", marker="s"),
}
_FALLBACK_STYLE = dict(color="#7f7f7f", marker="^")
_FIGSIZE = (6.4, 4.8)
_DPI = 100


@dataclass(frozen=True)
class FigureSpec:
    """What to plot: input CSV, figure kind, output path, and axis scaling."""

    input_csv: Path
    kind: str
    output_path: Path
    log_axes: tuple[bool, bool] | None = None  # None picks the kind's default

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        object.__setattr__(self, "input_csv", Path(self.input_csv))
        object.__setattr__(self, "output_path", Path(self.output_path))

    def axes_scaling(self) -> tuple[bool, bool]:
        if self.log_axes is not None:
            return self.log_axes
        return (True, True) if self.kind == "runtime_vs_n" else (True, False)


def _style(method: str) -> dict:
    return _METHOD_STYLE.get(method, _FALLBACK_STYLE)


def _methods(records) -> list[str]:
    return sorted({record.method for record in records})


def _apply_scaling(ax, log_axes) -> None:
    if log_axes[0]:
        ax.set_xscale("log")
    if log_axes[1]:
        ax.set_yscale("log")


def _render_runtime_vs_n(records, log_axes):
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    for method in _methods(records):
        style = _style(method)
        mine = [r for r in records if r.method == method]
        ax.scatter(
            [r.n_points for r in mine],
            [r.runtime_seconds for r in mine],
            s=12,
            alpha=0.45,
            color=style["color"],
            marker=style["marker"],
        )
        sizes = sorted({r.n_points for r in mine})
        averages = [
            sum(r.runtime_seconds for r in mine if r.n_points == n)
            / sum(1 for r in mine if r.n_points == n)
            for n in sizes
        ]
        ax.plot(sizes, averages, color=style["color"], label=method)
    _apply_scaling(ax, log_axes)
    ax.set_xlabel("training data points N")
    ax.set_ylabel("runtime (s)")
    ax.legend()
    fig.tight_layout()
    return fig


def _render_rmse_vs_runtime(records, log_axes):
    with_rmse = [r for r in records if r.rmse is not None]
    if not with_rmse:
        raise ValueError("no records carry an RMSE value; need a bench-rmse CSV")
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    for method in _methods(with_rmse):
        style = _style(method)
        for converged in (True, False):
            mine = [r for r in with_rmse if r.method == method and r.converged == converged]
            if not mine:
                continue
            ax.scatter(
                [r.runtime_seconds for r in mine],
                [r.rmse for r in mine],
                s=28,
                marker=style["marker"],
                facecolors=style["color"] if converged else "none",
                edgecolors=style["color"],
                label=method if converged else f"{method} (not converged)",
            )
    _apply_scaling(ax, log_axes)
    ax.set_xlabel("runtime (s)")
    ax.set_ylabel("RMSE")
    ax.legend()
    fig.tight_layout()
    return fig


def render(spec: FigureSpec):
    """Build the figure for a spec without touching the filesystem output."""
    records = read_bench_csv(spec.input_csv)
    if not records:
        raise ValueError(f"{spec.input_csv}: no records to plot")
    if spec.kind == "runtime_vs_n":
        return _render_runtime_vs_n(records, spec.axes_scaling())
    return _render_rmse_vs_runtime(records, spec.axes_scaling())


def _save(fig, output_path: Path) -> Path:
    output_path = Path(output_path)
    fig.savefig(output_path)
    plt.close(fig)
    return output_path


def plot_runtime_vs_n(spec: FigureSpec) -> Path:
    """Render the runtime-vs-N figure to spec.output_path."""
    if spec.kind != "runtime_vs_n":
        raise ValueError(f"spec kind is {spec.kind!r}")
    return _save(render(spec), spec.output_path)


def plot_rmse_vs_runtime(spec: FigureSpec) -> Path:
    """Render the RMSE-vs-runtime figure to spec.output_path."""
    if spec.kind != "rmse_vs_runtime":
        raise ValueError(f"spec kind is {spec.kind!r}")
    return _save(render(spec), spec.output_path)
