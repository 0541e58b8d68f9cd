#!/usr/bin/env python3
"""Produce the rejection-rate grids, isoline curves, and tau histograms.

Writes CSVs consumed by the figure renderer:

  <out>/ar1_grid.csv        heatmap data over (n, k)
  <out>/sma_grid.csv        heatmap data over (n, q)
  <out>/ar1_curves.csv      rate vs n along constant-k_tot lines
  <out>/sma_curves.csv      rate vs raw length N along constant-alpha lines
  <out>/hist_ar1_<k_tot>.csv   normalized-tau histograms at n = 50
  <out>/hist_sma_<alpha>.csv   normalized-tau histograms at N = 100

Scales: --scale tiny (seconds, for smoke runs), desk (minutes, default),
paper (hours: 10^4 p-values per cell).
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from mkgauss import (
    GridConfig,
    GridResult,
    GridRow,
    SmaParams,
    Ar1Params,
    run_grid,
    tau_histogram,
    write_grid_csv,
    write_histogram_csv,
)
from mkgauss.seeding import derive_seed

SCALES = {
    # n values, k count, p-values per cell, taus per test, histogram count
    "tiny": dict(n_step=30, k_count=6, pvals=40, taus=50, hist_count=2000),
    "desk": dict(n_step=10, k_count=12, pvals=200, taus=100, hist_count=10_000),
    "paper": dict(n_step=5, k_count=20, pvals=10_000, taus=100, hist_count=10_000),
}

AR1_KTOT_CURVES = (1e-20, 1e-8, 1e-6, 1e-4, 1e-2, 0.7)
SMA_ALPHA_CURVES = (0.1, 0.2, 0.3, 0.4)


def heatmap_grids(out: Path, preset, seed: int, workers: int) -> None:
    n_values = tuple(range(5, 101, preset["n_step"]))
    k_values = tuple(np.geomspace(0.23, 0.99, preset["k_count"]).round(6))
    cfg = GridConfig(n_values=n_values, param_values=k_values,
                     taus_per_test=preset["taus"], pvalues_per_cell=preset["pvals"],
                     master_seed=derive_seed(seed, 1))
    write_grid_csv(run_grid("ar1", cfg, workers=workers), out / "ar1_grid.csv")

    n_values = tuple(range(5, 151, preset["n_step"]))
    q_values = tuple(float(q) for q in range(5, 51, max(45 // preset["k_count"], 1)))
    cfg = GridConfig(n_values=n_values, param_values=q_values,
                     taus_per_test=preset["taus"], pvalues_per_cell=preset["pvals"],
                     master_seed=derive_seed(seed, 2))
    write_grid_csv(run_grid("sma", cfg, workers=workers), out / "sma_grid.csv")


def curve_grids(out: Path, preset, seed: int, workers: int) -> None:
    # one single-cell grid per isoline point, collected into one CSV per kind
    rows = []
    n_values = tuple(range(10, 101, preset["n_step"]))
    for i, k_tot in enumerate(AR1_KTOT_CURVES):
        for j, n in enumerate(n_values):
            k = k_tot ** (1.0 / (n - 1))
            cfg = GridConfig(n_values=(n,), param_values=(k,),
                             taus_per_test=preset["taus"],
                             pvalues_per_cell=preset["pvals"],
                             master_seed=derive_seed(seed, 3, i, j))
            rows.extend(run_grid("ar1", cfg, workers=workers).rows)
    write_grid_csv(GridResult(rows=tuple(rows)), out / "ar1_curves.csv")

    rows = []
    raw_lengths = tuple(range(20, 151, preset["n_step"]))
    for i, alpha in enumerate(SMA_ALPHA_CURVES):
        for j, raw_n in enumerate(raw_lengths):
            q = round(alpha * raw_n)
            n = raw_n - q + 1
            if q < 1 or n < 5:
                continue
            cfg = GridConfig(n_values=(n,), param_values=(float(q),),
                             taus_per_test=preset["taus"],
                             pvalues_per_cell=preset["pvals"],
                             master_seed=derive_seed(seed, 4, i, j))
            rows.extend(run_grid("sma", cfg, workers=workers).rows)
    write_grid_csv(GridResult(rows=tuple(rows)), out / "sma_curves.csv")


def histograms(out: Path, preset, seed: int) -> None:
    n = 50
    for k_tot in AR1_KTOT_CURVES:
        k = k_tot ** (1.0 / (n - 1))
        hist = tau_histogram(Ar1Params(k, n), preset["hist_count"],
                             derive_seed(seed, 5, hash(k_tot) & 0xFFFF))
        write_histogram_csv(hist, out / f"hist_ar1_{k_tot:g}.csv")
    raw_n = 100
    for alpha in SMA_ALPHA_CURVES:
        q = round(alpha * raw_n)
        hist = tau_histogram(SmaParams(q, raw_n - q + 1), preset["hist_count"],
                             derive_seed(seed, 6, q))
        write_histogram_csv(hist, out / f"hist_sma_{alpha:g}.csv")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scale", choices=sorted(SCALES), default="desk")
    parser.add_argument("--out", default="results")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--skip-heatmaps", action="store_true")
    args = parser.parse_args(argv)

    preset = SCALES[args.scale]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if not args.skip_heatmaps:
        heatmap_grids(out, preset, args.seed, args.workers)
        print(f"wrote {out}/ar1_grid.csv, {out}/sma_grid.csv")
    curve_grids(out, preset, args.seed, args.workers)
    print(f"wrote {out}/ar1_curves.csv, {out}/sma_curves.csv")
    histograms(out, preset, args.seed)
    print(f"wrote histograms into {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
