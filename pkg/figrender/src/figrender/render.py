"""Figure rendering: heatmaps with isoline overlays, rate curves, histograms.

All computation here is presentational; every number comes from the input
CSVs except the isoline overlays, which are recomputed exactly from the
requested scaling values (param = k_tot^(1/(n-1)) for AR grids, the
alpha = q/(n+q-1) inversion for SMA grids).
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import BoundaryNorm

from .schemas import GridData, HistData, SchemaError, read_grid_csv, read_hist_csv

SIGNIFICANCE_LEVEL = 0.05


# =============================================================================
# Isolines
# =============================================================================

def isoline_params(kind: str, scaling: float, n_values) -> np.ndarray:
    """Parameters tracing a constant-scaling line, recomputed exactly.

    For ``ar1``: k = scaling^(1/(n-1)).  For ``sma``: the (real-valued)
    window order q with scaling = q/(n+q-1).  Entries with no valid
    parameter are NaN.
    """
    n = np.asarray(list(n_values), dtype=float)
    if kind == "ar1":
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(n >= 2, scaling ** (1.0 / np.maximum(n - 1.0, 1.0)), np.nan)
        return out
    if kind == "sma":
        if not (0.0 < scaling < 1.0):
            return np.full(n.shape, np.nan)
        q = scaling * (n - 1.0) / (1.0 - scaling)
        return np.where(q >= 1.0, q, np.nan)
    raise SchemaError(f"unknown grid kind {kind!r}")


def _isoline_label(kind: str, value: float) -> str:
    name = "k_tot" if kind == "ar1" else "alpha"
    return f"{name} = {value:g}"


# =============================================================================
# Heatmap
# =============================================================================

def _pivot(grid: GridData):
    ns = np.unique(grid.n)
    params = np.unique(grid.param)
    matrix = np.full((params.size, ns.size), np.nan)
    col = {v: i for i, v in enumerate(ns)}
    row = {v: i for i, v in enumerate(params)}
    for n, p, rate in zip(grid.n, grid.param, grid.rejection_rate):
        matrix[row[p], col[n]] = rate
    return ns, params, matrix


def _banded_norm(grid: GridData, isolines):
    """Color bands whose thresholds sit between the rejection rates observed
    along each isoline, so constant-scaling lines read as constant color."""
    anchors = []
    for value in isolines:
        if grid.kind == "ar1":
            near = np.abs(np.log(grid.scaling) - math.log(value)) < math.log(10.0) / 2
        else:
            near = np.abs(grid.scaling - value) < 0.05
        if near.any():
            anchors.append(float(np.mean(grid.rejection_rate[near])))
    anchors = sorted(set(anchors))
    if len(anchors) < 2:
        return None
    inner = [(a + b) / 2.0 for a, b in zip(anchors, anchors[1:])]
    boundaries = [0.0] + inner + [1.0]
    cmap = plt.get_cmap("viridis", len(boundaries) - 1)
    return BoundaryNorm(boundaries, cmap.N), cmap


def render_grid(grid_path, out_path, isolines=()) -> None:
    """Heatmap of rejection rates over (n, param) with isoline overlays."""
    grid = read_grid_csv(grid_path)
    ns, params, matrix = _pivot(grid)

    fig, ax = plt.subplots(figsize=(7, 5))
    norm_cmap = _banded_norm(grid, isolines) if isolines else None
    if norm_cmap is not None:
        norm, cmap = norm_cmap
        mesh = ax.pcolormesh(ns, params, matrix, norm=norm, cmap=cmap, shading="nearest")
    else:
        mesh = ax.pcolormesh(ns, params, matrix, vmin=0.0, vmax=1.0,
                             cmap="viridis", shading="nearest")
    fig.colorbar(mesh, ax=ax, label="Shapiro-Wilk rejection rate")

    n_fine = np.linspace(ns.min(), ns.max(), 200)
    for value in isolines:
        overlay = isoline_params(grid.kind, value, n_fine)
        keep = np.isfinite(overlay) & (overlay >= params.min()) & (overlay <= params.max())
        if keep.any():
            ax.plot(n_fine[keep], overlay[keep], color="black", linewidth=1.2)
            idx = np.flatnonzero(keep)[-1]
            ax.annotate(_isoline_label(grid.kind, value),
                        (n_fine[idx], overlay[idx]), fontsize=7,
                        ha="right", va="bottom", color="black")

    ax.set_xlabel("series length n")
    ax.set_ylabel("lag-1 correlation k" if grid.kind == "ar1" else "window order q")
    ax.set_title(f"Rejection rate of normality for {grid.kind} processes")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


# =============================================================================
# Curves
# =============================================================================

def _group_key(kind: str, scaling: float) -> float:
    # scaling values recomputed per cell differ in the last ulps along an
    # isoline; group on a rounded key
    if kind == "ar1":
        return round(math.log10(scaling), 6)
    return round(scaling, 6)


def render_curves(grid_path, out_path) -> None:
    """Rejection rate against series length, one curve per scaling value,
    with the dotted significance line."""
    grid = read_grid_csv(grid_path)
    groups = {}
    for n, param, scaling, rate in zip(grid.n, grid.param, grid.scaling,
                                       grid.rejection_rate):
        x = n if grid.kind == "ar1" else n + param - 1  # sma: raw length N
        groups.setdefault(_group_key(grid.kind, scaling), []).append(
            (x, rate, scaling)
        )

    fig, ax = plt.subplots(figsize=(7, 5))
    for key in sorted(groups):
        points = sorted(groups[key])
        xs = [p[0] for p in points]
        rates = [p[1] for p in points]
        ax.plot(xs, rates, marker="o", markersize=3,
                label=_isoline_label(grid.kind, points[0][2]))
    ax.axhline(SIGNIFICANCE_LEVEL, color="black", linestyle=":",
               label=f"{SIGNIFICANCE_LEVEL:.0%} significance level")
    ax.set_xlabel("series length n" if grid.kind == "ar1" else "raw series length N")
    ax.set_ylabel("Shapiro-Wilk rejection rate")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=7)
    ax.set_title(f"Rejection rate along constant-scaling lines ({grid.kind})")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


# =============================================================================
# Histogram
# =============================================================================

def count_modes(counts, smooth_window: int = 5, min_prominence_frac: float = 0.1) -> int:
    """Number of topographically prominent local maxima in binned counts.

    Counts are smoothed with a centered moving average, then a peak is kept
    when its prominence (height above the deepest valley separating it from
    any higher bin) exceeds the given fraction of the smoothed range.
    """
    counts = np.asarray(counts, dtype=float)
    if smooth_window > 1:
        kernel = np.ones(smooth_window)
        # normalize by the in-window weight so edges are not biased low
        weight = np.convolve(np.ones_like(counts), kernel, mode="same")
        smooth = np.convolve(counts, kernel, mode="same") / weight
    else:
        smooth = counts
    span = smooth.max() - smooth.min()
    if span <= 0.0:
        return 0
    threshold = min_prominence_frac * span

    modes = 0
    for i in range(1, smooth.size - 1):
        if not (smooth[i] > smooth[i - 1] and smooth[i] >= smooth[i + 1]):
            continue
        cols = [c for c in (_col_toward_higher(smooth, i, -1),
                            _col_toward_higher(smooth, i, +1)) if c is not None]
        # key saddle: the least descent needed to reach higher terrain;
        # the global maximum measures against the global minimum
        saddle = max(cols) if cols else float(smooth.min())
        if smooth[i] - saddle >= threshold:
            modes += 1
    return modes


def _col_toward_higher(values, start: int, step: int):
    """Lowest value between `start` and the nearest strictly higher bin on
    one side, or None when that side has no higher bin."""
    lowest = values[start]
    i = start + step
    while 0 <= i < values.size:
        lowest = min(lowest, values[i])
        if values[i] > values[start]:
            return float(lowest)
        i += step
    return None


def render_hist(hist_path, out_path) -> None:
    """Density histogram of the normalized tau with a standard normal overlay."""
    hist = read_hist_csv(hist_path)
    widths = hist.bin_right - hist.bin_left
    density = hist.count / (hist.total * widths)

    fig, ax = plt.subplots(figsize=(5, 4))
    ax.bar(hist.bin_left, density, width=widths, align="edge",
           color="#4878a8", edgecolor="none", label="normalized tau")
    xs = np.linspace(hist.bin_left[0], hist.bin_right[-1], 400)
    ax.plot(xs, np.exp(-xs * xs / 2.0) / math.sqrt(2.0 * math.pi),
            color="black", linewidth=1.2, label="standard normal")
    ax.set_xlabel("tau / sqrt(Var(tau))")
    ax.set_ylabel("density")
    ax.legend(fontsize=8)
    binned = int(hist.count.sum())
    ax.set_title(f"{binned}/{hist.total} samples in window, "
                 f"{count_modes(hist.count)} mode(s)", fontsize=9)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
