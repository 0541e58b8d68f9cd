"""Monte-Carlo rejection-rate grids, tau histograms, and asymptotic reports.

For every grid cell (series length n, process parameter k or q) the harness
draws ``pvalues_per_cell`` Shapiro-Wilk p-values, each computed from
``taus_per_test`` fresh tau values, and records the fraction rejected at the
configured level.  Seeds fan out deterministically:

    cell seed      = derive_seed(master_seed, row_index, column_index)
    replicate seed = derive_seed(cell_seed, replicate_index)
    series seed    = derive_seed(replicate_seed, tau_index)

so any scheduling (including multi-process execution) reproduces identical
results, and the output CSV is byte-identical for a given configuration.
"""

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .asymptotics import (
    QuadratureConfig,
    ar1_lower_bound,
    prop1_sum,
    sma_limit_value,
    var_limit_quadrature,
)
from .criteria import alpha as alpha_of
from .criteria import k_tot as k_tot_of
from .errors import ParameterError
from .mann_kendall import tau_batch, var_tau_exact
from .processes import (
    acf_for_process,
    Ar1Params,
    ArmaParams,
    LimitRhoSpec,
    ProcessParams,
    process_batch,
    SmaParams,
)
from .seeding import derive_seed
from .shapiro_wilk import rejection_rate, shapiro_wilk

__all__ = [
    "GridConfig",
    "GridRow",
    "GridResult",
    "HistogramResult",
    "IsolinePoint",
    "empirical_tau_sample",
    "run_grid",
    "isoline_data",
    "tau_histogram",
    "report_asymptotics",
    "write_grid_csv",
    "write_histogram_csv",
]


@dataclass(frozen=True)
class GridConfig:
    """Axes and sampling depth of a rejection-rate grid."""
    n_values: Tuple[int, ...]
    param_values: Tuple[float, ...]
    taus_per_test: int = 100
    pvalues_per_cell: int = 200
    level: float = 0.05
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "param_values", tuple(float(p) for p in self.param_values))
        if not self.n_values or not self.param_values:
            raise ParameterError("grid axes must be non-empty")
        if self.taus_per_test < 3:
            raise ParameterError("taus_per_test must be >= 3 (Shapiro-Wilk minimum)")
        if self.pvalues_per_cell < 1:
            raise ParameterError("pvalues_per_cell must be >= 1")
        if not (0.0 < self.level < 1.0):
            raise ParameterError(f"level must be in (0, 1), got {self.level}")


@dataclass(frozen=True)
class GridRow:
    """One grid cell: rates plus the seed that reproduces it."""
    kind: str
    n: int
    param: float
    scaling: float
    rejection_rate: float
    taus: int
    pvals: int
    cell_seed: int
    error: str = ""


@dataclass(frozen=True)
class GridResult:
    rows: Tuple[GridRow, ...]


@dataclass(frozen=True)
class IsolinePoint:
    """A (scaling, n, param) triple on a constant-scaling line.

    ``param`` is None when no valid parameter exists for that (scaling, n)
    cell (for example a window order below 1).
    """
    scaling: float
    n: int
    param: Optional[float]


@dataclass(frozen=True)
class HistogramResult:
    """Binned counts of normalized tau values over [-4, 4]."""
    bin_edges: np.ndarray
    counts: np.ndarray
    total: int


def _params_for(kind: str, n: int, param: float) -> ProcessParams:
    if kind == "ar1":
        return Ar1Params(k=param, n=n)
    if kind == "sma":
        q = int(round(param))
        if abs(q - param) > 1e-9:
            raise ParameterError(f"sma window order must be an integer, got {param}")
        return SmaParams(q=q, n=n)
    raise ParameterError(f"unknown grid kind {kind!r}")


def _scaling_for(kind: str, n: int, param: float) -> float:
    if kind == "ar1":
        return k_tot_of(param, n) if n >= 2 else param
    return alpha_of(int(round(param)), n)


def empirical_tau_sample(process: ProcessParams, count: int, seed: int) -> np.ndarray:
    """`count` tau values from independent seeded realizations of a process.

    Series i uses seed derive_seed(seed, i); results are deterministic and
    independent of batching.
    """
    if count < 1:
        raise ParameterError(f"count must be >= 1, got {count}")
    taus = np.empty(count)
    chunk = 2000
    for lo in range(0, count, chunk):
        hi = min(lo + chunk, count)
        seeds = [derive_seed(seed, i) for i in range(lo, hi)]
        rows = process_batch(process, seeds)
        taus[lo:hi] = tau_batch(rows)
    return taus


def _compute_cell(kind: str, n: int, param: float, taus: int, pvals: int,
                  level: float, cell_seed: int) -> Tuple[float, str]:
    try:
        process = _params_for(kind, n, param)
        p_values = np.empty(pvals)
        for rep in range(pvals):
            sample = empirical_tau_sample(process, taus, derive_seed(cell_seed, rep))
            p_values[rep] = shapiro_wilk(sample).p_value
        return rejection_rate(p_values, level), ""
    except Exception as exc:  # cell failures never abort the grid
        return math.nan, f"{type(exc).__name__}: {exc}"


def run_grid(kind: str, cfg: GridConfig, workers: int = 1) -> GridResult:
    """Rejection-rate grid over the cross product of the two axes.

    Args:
        kind: ``ar1`` (param axis holds lag-1 correlations k) or ``sma``
            (param axis holds integer window orders q).
        cfg: grid configuration.
        workers: number of processes; results are identical for any value.

    Returns:
        GridResult with one row per (n, param) cell, in axis order.
    """
    if kind not in ("ar1", "sma"):
        raise ParameterError(f"unknown grid kind {kind!r}")
    cells = []
    for row_idx, n in enumerate(cfg.n_values):
        for col_idx, param in enumerate(cfg.param_values):
            cell_seed = derive_seed(cfg.master_seed, row_idx, col_idx)
            cells.append((n, param, cell_seed))

    args = [
        (kind, n, param, cfg.taus_per_test, cfg.pvalues_per_cell, cfg.level, cell_seed)
        for (n, param, cell_seed) in cells
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_compute_cell_star, args))
    else:
        outcomes = [_compute_cell_star(a) for a in args]

    rows = []
    for (n, param, cell_seed), (rate, error) in zip(cells, outcomes):
        try:
            scaling = _scaling_for(kind, n, param)
        except ParameterError as exc:
            scaling, rate, error = math.nan, math.nan, f"ParameterError: {exc}"
        rows.append(
            GridRow(kind=kind, n=n, param=param, scaling=scaling,
                    rejection_rate=rate, taus=cfg.taus_per_test,
                    pvals=cfg.pvalues_per_cell, cell_seed=cell_seed, error=error)
        )
    return GridResult(rows=tuple(rows))


def _compute_cell_star(args):
    return _compute_cell(*args)


def isoline_data(kind: str, scaling_values: Sequence[float],
                 n_range: Sequence[int]) -> List[IsolinePoint]:
    """Parameters tracing constant-scaling lines in the (n, param) plane.

    For ``ar1``, param = k_tot^(1/(n-1)); for ``sma``, the window order q
    solving alpha = q/(n+q-1), rounded to the nearest integer.  Cells with
    no valid parameter get param None.
    """
    if kind not in ("ar1", "sma"):
        raise ParameterError(f"unknown isoline kind {kind!r}")
    points: List[IsolinePoint] = []
    for scaling in scaling_values:
        for n in n_range:
            param: Optional[float]
            if kind == "ar1":
                if not (0.0 < scaling < 1.0) or n < 2:
                    param = None
                else:
                    param = float(scaling ** (1.0 / (n - 1)))
            else:
                if not (0.0 < scaling < 1.0) or n < 1:
                    param = None
                else:
                    q = round(scaling * (n - 1) / (1.0 - scaling))
                    param = float(q) if q >= 1 else None
            points.append(IsolinePoint(scaling=float(scaling), n=int(n), param=param))
    return points


def tau_histogram(process: ProcessParams, count: int, seed: int,
                  bins: int = 60, limit: float = 4.0) -> HistogramResult:
    """Histogram of normalized tau (tau / sqrt(exact variance)) over [-4, 4].

    Values outside the binning window are counted in ``total`` but fall in
    no bin, so sum(counts) <= total.
    """
    taus = empirical_tau_sample(process, count, seed)
    acf = acf_for_process(process)
    n = process.n
    scale = math.sqrt(var_tau_exact(acf, n).variance)
    normalized = taus / scale
    edges = np.linspace(-limit, limit, bins + 1)
    counts, _ = np.histogram(normalized, bins=edges)
    return HistogramResult(bin_edges=edges, counts=counts, total=count)


# =============================================================================
# Asymptotic-value reports
# =============================================================================

def _parse_report_spec(text: str):
    head, _, tail = text.partition(":")
    head = head.strip()
    if head == "ar1":
        return ("ar1", float(tail))
    if head == "sma":
        return ("sma", float(tail))
    if head == "prop1":
        return ("prop1", int(tail))
    raise ParameterError(f"unknown asymptotic spec {text!r}")


def report_asymptotics(specs: Sequence[str],
                       cfg: QuadratureConfig = QuadratureConfig()) -> Dict:
    """Bundle asymptotic values for a list of spec strings.

    Accepted entries: ``ar1:<k_tot>`` (limit-variance quadrature plus the
    positive lower bound), ``sma:<a>`` (quadrature plus the closed-form
    value or bound), ``prop1:<n>`` (the exact arcsin-sum identity value).
    Per-entry errors are recorded without aborting the report.
    """
    entries = []
    for text in specs:
        entry: Dict = {"spec": text}
        try:
            kind, value = _parse_report_spec(text)
            if kind == "ar1":
                quad = var_limit_quadrature(LimitRhoSpec.ar1_limit(value), cfg)
                bound = ar1_lower_bound(value, cfg)
                entry.update(
                    kind="ar1", k_tot=value,
                    limit_variance=quad.value,
                    limit_variance_error=quad.estimated_error,
                    lower_bound=bound.value,
                    lower_bound_error=bound.estimated_error,
                )
            elif kind == "sma":
                quad = var_limit_quadrature(LimitRhoSpec.sma_limit(value), cfg)
                closed = sma_limit_value(value)
                entry.update(
                    kind="sma", a=value,
                    limit_variance=quad.value,
                    limit_variance_error=quad.estimated_error,
                    closed_form=closed.value,
                    closed_form_is_lower_bound=closed.is_lower_bound,
                )
            else:
                entry.update(kind="prop1", n=value, value=prop1_sum(value),
                             target=math.pi / 6)
        except Exception as exc:
            entry["error"] = f"{type(exc).__name__}: {exc}"
        entries.append(entry)
    return {"entries": entries}


# =============================================================================
# CSV interfaces
# =============================================================================

def _fmt(value: float) -> str:
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return f"{value:.17g}"


def write_grid_csv(result: GridResult, path) -> None:
    """Grid CSV: kind,n,param,scaling,rejection_rate,taus,pvals,cell_seed,error."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["kind", "n", "param", "scaling", "rejection_rate", "taus", "pvals",
             "cell_seed", "error"]
        )
        for row in result.rows:
            writer.writerow(
                [row.kind, row.n, _fmt(row.param), _fmt(row.scaling),
                 _fmt(row.rejection_rate), row.taus, row.pvals, row.cell_seed,
                 row.error]
            )


def write_histogram_csv(result: HistogramResult, path) -> None:
    """Histogram CSV: bin_left,bin_right,count,total."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["bin_left", "bin_right", "count", "total"])
        for left, right, count in zip(result.bin_edges[:-1], result.bin_edges[1:],
                                      result.counts):
            writer.writerow([_fmt(left), _fmt(right), int(count), result.total])
