"""Entry points: render_grid, render_curves, render_hist."""

import argparse
import sys

from .render import render_curves, render_grid, render_hist
from .schemas import SchemaError


def _float_list(text: str):
    return [float(part) for part in text.split(",") if part.strip()]


def _run(action, *args) -> int:
    try:
        action(*args)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main_grid(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_grid",
        description="Rejection-rate heatmap with optional isoline overlays",
    )
    parser.add_argument("grid_csv")
    parser.add_argument("out_png")
    parser.add_argument("--isolines", type=_float_list, default=[],
                        help="comma-separated k_tot or alpha values")
    args = parser.parse_args(argv)
    return _run(render_grid, args.grid_csv, args.out_png, args.isolines)


def main_curves(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_curves",
        description="Rejection rate vs series length, one curve per scaling",
    )
    parser.add_argument("grid_csv")
    parser.add_argument("out_png")
    args = parser.parse_args(argv)
    return _run(render_curves, args.grid_csv, args.out_png)


def main_hist(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_hist",
        description="Normalized-tau histogram with standard normal overlay",
    )
    parser.add_argument("hist_csv")
    parser.add_argument("out_png")
    args = parser.parse_args(argv)
    return _run(render_hist, args.hist_csv, args.out_png)


if __name__ == "__main__":
    sys.exit(main_grid())
