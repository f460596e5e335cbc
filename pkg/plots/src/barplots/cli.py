"""CLI: plot --kind {runtime_vs_n|rmse_vs_runtime} --in file.csv --out fig.png"""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureSpec, plot_rmse_vs_runtime, plot_runtime_vs_n
from .records import SchemaError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plot", description=__doc__)
    parser.add_argument("--kind", choices=KINDS, required=True)
    parser.add_argument("--in", dest="input_csv", required=True, metavar="FILE.csv")
    parser.add_argument("--out", dest="output_path", required=True, metavar="FIG.png")
    parser.add_argument(
        "--log-x", action=argparse.BooleanOptionalAction, default=None,
        help="override the kind's default x-axis scaling",
    )
    parser.add_argument(
        "--log-y", action=argparse.BooleanOptionalAction, default=None,
        help="override the kind's default y-axis scaling",
    )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    log_axes = None
    if args.log_x is not None or args.log_y is not None:
        default = (True, True) if args.kind == "runtime_vs_n" else (True, False)
        log_axes = (
            default[0] if args.log_x is None else args.log_x,
            default[1] if args.log_y is None else args.log_y,
        )
    spec = FigureSpec(
        input_csv=args.input_csv,
        kind=args.kind,
        output_path=args.output_path,
        log_axes=log_axes,
    )
    try:
        if args.kind == "runtime_vs_n":
            plot_runtime_vs_n(spec)
        else:
            plot_rmse_vs_runtime(spec)
    except (SchemaError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
