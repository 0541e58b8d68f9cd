"""Synthetic CSV builders matching the producer schemas."""

import csv

import numpy as np
import pytest


@pytest.fixture
def write_grid_csv(tmp_path):
    def _write(rows, name="grid.csv"):
        path = tmp_path / name
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["kind", "n", "param", "scaling", "rejection_rate",
                             "taus", "pvals", "cell_seed", "error"])
            for row in rows:
                writer.writerow(row)
        return path
    return _write


@pytest.fixture
def ar1_grid_rows():
    rows = []
    for n in (10, 20, 40, 80):
        for k in (0.3, 0.5, 0.7, 0.9):
            scaling = k ** (n - 1)
            rate = min(0.9, 0.05 + 2.0 * scaling ** 0.25)
            rows.append(["ar1", n, repr(k), repr(scaling), repr(rate),
                         100, 200, 12345, ""])
    return rows


@pytest.fixture
def write_hist_csv(tmp_path):
    def _write(counts, total, lo=-4.0, hi=4.0, name="hist.csv"):
        counts = np.asarray(counts)
        edges = np.linspace(lo, hi, counts.size + 1)
        path = tmp_path / name
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["bin_left", "bin_right", "count", "total"])
            for left, right, count in zip(edges[:-1], edges[1:], counts):
                writer.writerow([repr(float(left)), repr(float(right)),
                                 int(count), int(total)])
        return path
    return _write


@pytest.fixture
def gaussian_counts():
    edges = np.linspace(-4, 4, 61)
    centers = (edges[:-1] + edges[1:]) / 2
    density = np.exp(-centers**2 / 2)
    counts = np.round(10_000 * density / density.sum()).astype(int)
    return counts
