"""Command-line figure rendering from fedspec metrics CSVs."""

from __future__ import annotations

import argparse
import sys

from .figures import PlotSpec, learning_curve, participation_bar


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fedspec-plot",
        description="Render learning-curve and participation figures from metrics CSVs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    curve = sub.add_parser("curve", help="reward-vs-episode learning curves")
    curve.add_argument("--in", dest="inputs", nargs="+", required=True, help="metrics CSV files")
    curve.add_argument("--window", type=int, default=100, help="centered smoothing window")
    curve.add_argument("--out", required=True, help="output PNG path")

    part = sub.add_parser("participation", help="reward vs number of participating users")
    part.add_argument(
        "--in", dest="inputs", nargs="+", required=True, help="sweep CSVs named u<k>.csv"
    )
    part.add_argument("--window", type=int, default=500, help="trailing window (episodes)")
    part.add_argument("--out", required=True, help="output PNG path")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = PlotSpec(
            input_paths=tuple(args.inputs),
            smoothing_window=args.window,
            output_path=args.out,
            figure_kind="learning_curve" if args.command == "curve" else "participation_bar",
        )
        if args.command == "curve":
            learning_curve(spec)
        else:
            participation_bar(spec)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"fedspec-plot: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
