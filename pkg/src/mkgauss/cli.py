"""Command-line front end.

Subcommands: tau, variance, grid, hist, asymptotic, prop1, criterion,
casestudy.  Scalar results are printed as JSON on standard output; grids,
histograms and case-study tables are written as CSV files.
"""

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict

import numpy as np

from .asymptotics import QuadratureConfig, prop1_sum
from .case_study import read_station_csv, run_case_study, write_case_study_csv
from .criteria import decide_ar1, decide_sma
from .errors import ParameterError
from .mann_kendall import normalized_tau, tau, var_tau_exact
from .montecarlo import (
    GridConfig,
    report_asymptotics,
    run_grid,
    tau_histogram,
    write_grid_csv,
    write_histogram_csv,
)
from .processes import AcfSpec, Ar1Params, ArmaParams, SmaParams

_METHODS = {"n3": "stationary_n3", "n4": "naive_n4"}


def parse_acf(text: str) -> AcfSpec:
    """Parse ar1:<k> | sma:<q> | arma:<k>,<q> | iid."""
    head, _, tail = text.partition(":")
    head = head.strip()
    try:
        if head == "iid":
            return AcfSpec.iid()
        if head == "ar1":
            return AcfSpec.ar1(float(tail))
        if head == "sma":
            return AcfSpec.sma(int(tail))
        if head == "arma":
            k_txt, q_txt = tail.split(",")
            return AcfSpec.arma(float(k_txt), int(q_txt))
    except (ValueError, TypeError) as exc:
        raise ParameterError(f"bad ACF spec {text!r}: {exc}") from exc
    raise ParameterError(f"unknown ACF spec {text!r}")


def parse_process(text: str):
    """Parse ar1:<k>,<n> | sma:<q>,<n> | arma:<k>,<q>,<n>."""
    head, _, tail = text.partition(":")
    head = head.strip()
    try:
        parts = tail.split(",")
        if head == "ar1":
            return Ar1Params(k=float(parts[0]), n=int(parts[1]))
        if head == "sma":
            return SmaParams(q=int(parts[0]), n=int(parts[1]))
        if head == "arma":
            return ArmaParams(k=float(parts[0]), q=int(parts[1]), n=int(parts[2]))
    except (ValueError, IndexError) as exc:
        raise ParameterError(f"bad process spec {text!r}: {exc}") from exc
    raise ParameterError(f"unknown process spec {text!r}")


def _read_value_column(path) -> np.ndarray:
    """Series values from a CSV with a `value` column (header required)."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or "value" not in reader.fieldnames:
            raise ParameterError(
                f"input CSV must have a 'value' column, got {reader.fieldnames}"
            )
        values = [float(row["value"]) for row in reader]
    return np.asarray(values)


def _int_list(text: str):
    return [int(part) for part in text.split(",") if part.strip()]


def _float_list(text: str):
    return [float(part) for part in text.split(",") if part.strip()]


def _emit(payload) -> None:
    print(json.dumps(payload, indent=2))


# =============================================================================
# Subcommand handlers
# =============================================================================

def _cmd_tau(args) -> None:
    values = _read_value_column(args.input)
    result = tau(values)
    acf = parse_acf(args.acf)
    variance = var_tau_exact(acf, result.n)
    payload = {
        "n": result.n,
        "tau": result.tau,
        "s": result.s,
        "n_pairs": result.n_pairs,
        "acf": acf.describe(),
        "variance": variance.variance,
        "normalized_tau": normalized_tau(values, acf),
    }
    _emit(payload)


def _cmd_variance(args) -> None:
    acf = parse_acf(args.acf)
    result = var_tau_exact(acf, args.n, method=_METHODS[args.method])
    _emit({
        "variance": result.variance,
        "n": result.n,
        "acf": acf.describe(),
        "method": result.method,
    })


def _cmd_grid(args) -> None:
    cfg = GridConfig(
        n_values=tuple(_int_list(args.n)),
        param_values=tuple(_float_list(args.param)),
        taus_per_test=args.taus,
        pvalues_per_cell=args.pvals,
        level=args.level,
        master_seed=args.seed,
    )
    result = run_grid(args.kind, cfg, workers=args.workers)
    write_grid_csv(result, args.out)
    failed = [row for row in result.rows if row.error]
    _emit({"cells": len(result.rows), "failed": len(failed), "out": args.out})


def _cmd_hist(args) -> None:
    process = parse_process(args.process)
    result = tau_histogram(process, args.count, args.seed)
    write_histogram_csv(result, args.out)
    _emit({"total": result.total, "binned": int(result.counts.sum()), "out": args.out})


def _cmd_asymptotic(args) -> None:
    cfg = QuadratureConfig(subdivisions=args.nodes)
    report = report_asymptotics([args.spec], cfg)
    _emit(report["entries"][0])


def _cmd_prop1(args) -> None:
    value = prop1_sum(args.n)
    _emit({
        "n": args.n,
        "value": value,
        "target": math.pi / 6,
        "abs_error": abs(value - math.pi / 6),
    })


def _cmd_criterion(args) -> None:
    if args.kind == "ar1":
        if args.k is None or args.n is None:
            raise ParameterError("criterion --kind ar1 needs --k and --n")
        report = decide_ar1(args.k, args.n)
    else:
        if args.q is None or args.N is None:
            raise ParameterError("criterion --kind sma needs --q and --N")
        if args.N < args.q:
            raise ParameterError("need N >= q (N is the raw series length)")
        report = decide_sma(args.q, args.N - args.q + 1)
        report.inputs["N"] = args.N
    _emit(asdict(report))


def _cmd_casestudy(args) -> None:
    records = read_station_csv(args.input)
    batch = run_case_study(records)
    write_case_study_csv(batch, args.out)
    _emit({
        "rows": len(batch.rows),
        "errors": [list(item) for item in batch.errors],
        "out": args.out,
    })


# =============================================================================
# Parser
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mkgauss",
        description="Mann-Kendall tau, exact variance, and Gaussian-validity tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tau", help="tau, variance and normalized tau of a series CSV")
    p.add_argument("--input", required=True, help="CSV with a 'value' column")
    p.add_argument("--acf", default="iid",
                   help="ar1:<k> | sma:<q> | arma:<k>,<q> | iid (default iid)")
    p.set_defaults(func=_cmd_tau)

    p = sub.add_parser("variance", help="exact variance of tau for an ACF")
    p.add_argument("--acf", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("n3", "n4"), default="n3")
    p.set_defaults(func=_cmd_variance)

    p = sub.add_parser("grid", help="Shapiro-Wilk rejection-rate grid to CSV")
    p.add_argument("--kind", choices=("ar1", "sma"), required=True)
    p.add_argument("--n", required=True, help="comma-separated series lengths")
    p.add_argument("--param", required=True, help="comma-separated k or q values")
    p.add_argument("--taus", type=int, default=100)
    p.add_argument("--pvals", type=int, default=200)
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("hist", help="normalized-tau histogram to CSV")
    p.add_argument("--process", required=True,
                   help="ar1:<k>,<n> | sma:<q>,<n> | arma:<k>,<q>,<n>")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_hist)

    p = sub.add_parser("asymptotic", help="limit variance values and bounds")
    p.add_argument("--spec", required=True, help="ar1:<k_tot> | sma:<a>")
    p.add_argument("--nodes", type=int, default=64)
    p.set_defaults(func=_cmd_asymptotic)

    p = sub.add_parser("prop1", help="exact arcsin-sum identity value")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_prop1)

    p = sub.add_parser("criterion", help="Gaussian-approximation decision")
    p.add_argument("--kind", choices=("ar1", "sma"), required=True)
    p.add_argument("--k", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--N", type=int)
    p.set_defaults(func=_cmd_criterion)

    p = sub.add_parser("casestudy", help="station screening CSV to CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_casestudy)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
