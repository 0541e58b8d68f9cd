"""CSV readers for the grid and histogram schemas, with column-level errors."""

import csv
from dataclasses import dataclass

import numpy as np

GRID_COLUMNS = (
    "kind", "n", "param", "scaling", "rejection_rate", "taus", "pvals",
    "cell_seed", "error",
)
HIST_COLUMNS = ("bin_left", "bin_right", "count", "total")


class SchemaError(ValueError):
    """Input CSV does not match the declared schema."""


@dataclass(frozen=True)
class GridData:
    kind: str
    n: np.ndarray
    param: np.ndarray
    scaling: np.ndarray
    rejection_rate: np.ndarray


@dataclass(frozen=True)
class HistData:
    bin_left: np.ndarray
    bin_right: np.ndarray
    count: np.ndarray
    total: int


def _check_columns(fieldnames, required, path) -> None:
    have = tuple(fieldnames or ())
    missing = [c for c in required if c not in have]
    if missing:
        raise SchemaError(
            f"{path}: missing column(s) {missing}; expected {list(required)}, got {list(have)}"
        )


def read_grid_csv(path) -> GridData:
    """Read kind,n,param,scaling,rejection_rate,... rows; failed cells dropped."""
    rows = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        _check_columns(reader.fieldnames, GRID_COLUMNS, path)
        for line, row in enumerate(reader, start=2):
            if row["error"]:
                continue
            try:
                rows.append((row["kind"], int(row["n"]), float(row["param"]),
                             float(row["scaling"]), float(row["rejection_rate"])))
            except ValueError as exc:
                raise SchemaError(f"{path}:{line}: unparsable numeric field: {exc}")
    if not rows:
        raise SchemaError(f"{path}: no usable rows")
    kinds = {r[0] for r in rows}
    if len(kinds) != 1:
        raise SchemaError(f"{path}: mixed grid kinds {sorted(kinds)}")
    return GridData(
        kind=rows[0][0],
        n=np.array([r[1] for r in rows]),
        param=np.array([r[2] for r in rows]),
        scaling=np.array([r[3] for r in rows]),
        rejection_rate=np.array([r[4] for r in rows]),
    )


def read_hist_csv(path) -> HistData:
    """Read bin_left,bin_right,count,total rows."""
    left, right, count, totals = [], [], [], []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        _check_columns(reader.fieldnames, HIST_COLUMNS, path)
        for line, row in enumerate(reader, start=2):
            try:
                left.append(float(row["bin_left"]))
                right.append(float(row["bin_right"]))
                count.append(int(row["count"]))
                totals.append(int(row["total"]))
            except ValueError as exc:
                raise SchemaError(f"{path}:{line}: unparsable numeric field: {exc}")
    if not left:
        raise SchemaError(f"{path}: no usable rows")
    if len(set(totals)) != 1:
        raise SchemaError(f"{path}: inconsistent total column")
    return HistData(
        bin_left=np.array(left), bin_right=np.array(right),
        count=np.array(count), total=totals[0],
    )
