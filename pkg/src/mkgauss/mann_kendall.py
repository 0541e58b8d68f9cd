"""Mann-Kendall tau and its exact finite-sample variance under autocorrelation.

The tau statistic is the pair-sign sum S = sum_{i<j} sgn(x_j - x_i) divided
by the number of pairs C(n, 2).  For a stationary Gaussian series with
autocorrelation function rho(d), the variance of tau is exact:

    Var(tau) = C(n,2)^-2 * sum_{i<j} sum_{k<l} (2/pi) arcsin(r)

where r = corr(X_j - X_i, X_l - X_k) follows from Greiner's equality
(Greiner 1909): E[sgn(U) sgn(V)] = (2/pi) arcsin(corr(U, V)) for jointly
Gaussian (U, V).  Stationarity makes r depend only on the index differences,
which reduces the four-fold sum to an O(n^3) enumeration over difference
triples with placement-count weights.

Ties are rejected: the variance formula assumes a tie-free continuous sample,
and silent tie handling would invalidate it.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, NumericError, ParameterError, TieError
from .processes import AcfSpec, acf_lag_array, series_values

__all__ = [
    "TauResult",
    "VarianceResult",
    "tau",
    "tau_fast",
    "tau_batch",
    "pair_diff_corr",
    "var_tau_exact",
    "normalized_tau",
]

# Tolerance for clamping arcsin arguments: accumulation in closed-form ACFs
# can push |corr| marginally above 1; anything worse fails loudly.
CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class TauResult:
    """Mann-Kendall tau with the integer pair-sign sum it came from."""
    tau: float
    s: int
    n: int
    n_pairs: int


@dataclass(frozen=True)
class VarianceResult:
    """Exact finite-n variance of tau for a stationary Gaussian ACF."""
    variance: float
    n: int
    acf: AcfSpec
    method: str


def _check_series(values: np.ndarray) -> None:
    if values.size < 2:
        raise ParameterError(f"need at least 2 samples, got {values.size}")
    if np.unique(values).size < values.size:
        raise TieError("series contains exact ties")


def tau(series) -> TauResult:
    """Mann-Kendall tau by the O(n^2) pairwise definition.

    Args:
        series: TimeSeries or 1-d array-like, tie-free, length >= 2.

    Returns:
        TauResult with tau = S / C(n, 2) in [-1, 1].
    """
    values = series_values(series)
    _check_series(values)
    n = values.size
    s = 0
    for i in range(n - 1):
        s += int(np.sign(values[i + 1:] - values[i]).sum())
    n_pairs = n * (n - 1) // 2
    return TauResult(tau=s / n_pairs, s=s, n=n, n_pairs=n_pairs)


def _merge_count(left, right):
    """Merge two sorted lists, counting pairs (l, r) with l > r."""
    merged = []
    inversions = 0
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            merged.append(right[j])
            j += 1
            inversions += len(left) - i
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged, inversions


def _sort_count(values):
    if len(values) <= 1:
        return list(values), 0
    mid = len(values) // 2
    left, inv_l = _sort_count(values[:mid])
    right, inv_r = _sort_count(values[mid:])
    merged, inv_m = _merge_count(left, right)
    return merged, inv_l + inv_r + inv_m


def tau_fast(series) -> TauResult:
    """Mann-Kendall tau in O(n log n) by merge-sort inversion counting.

    Identical contract and output to :func:`tau`: discordant pairs are the
    inversions of the sequence, so S = C(n, 2) - 2 * inversions.
    """
    values = series_values(series)
    _check_series(values)
    n = values.size
    n_pairs = n * (n - 1) // 2
    _, inversions = _sort_count(values.tolist())
    s = n_pairs - 2 * inversions
    return TauResult(tau=s / n_pairs, s=s, n=n, n_pairs=n_pairs)


def tau_batch(rows: np.ndarray) -> np.ndarray:
    """Tau for each row of a (batch, n) array of tie-free series.

    Vectorized over the batch; used by the Monte-Carlo harness.  Raises
    TieError if any row contains an exact tie.
    """
    rows = np.asarray(rows, dtype=float)
    n = rows.shape[1]
    if n < 2:
        raise ParameterError(f"need at least 2 samples, got {n}")
    iu, ju = np.triu_indices(n, 1)
    s = np.empty(rows.shape[0])
    chunk = max(1, 8_000_000 // len(iu))
    for lo in range(0, rows.shape[0], chunk):
        diffs = rows[lo:lo + chunk, ju] - rows[lo:lo + chunk, iu]
        if np.any(diffs == 0.0):
            raise TieError("series contains exact ties")
        s[lo:lo + chunk] = np.sign(diffs).sum(axis=1)
    return s / len(iu)


def _clamped_arcsin_arg(r: np.ndarray) -> np.ndarray:
    overshoot = np.max(np.abs(r)) - 1.0
    if overshoot > CLAMP_TOL:
        raise NumericError(
            f"pair-difference correlation exceeds 1 by {overshoot:.3e} (> {CLAMP_TOL:g})"
        )
    return np.clip(r, -1.0, 1.0)


def pair_diff_corr(acf: AcfSpec, i: int, j: int, k: int, l: int) -> float:
    """Correlation of the differences (X_j - X_i, X_l - X_k).

    For unit-variance stationary X with autocorrelation rho this is

        [rho(|l-j|) - rho(|l-i|) - rho(|k-j|) + rho(|k-i|)]
        / (2 sqrt(1 - rho(j-i)) sqrt(1 - rho(l-k)))

    Args:
        acf: autocorrelation specification.
        i, j, k, l: time indices with i < j and k < l.

    Returns:
        The correlation, clamped into [-1, 1] within a 1e-9 tolerance.
    """
    if not (i < j and k < l):
        raise ParameterError("need i < j and k < l")
    max_lag = max(abs(l - j), abs(l - i), abs(k - j), abs(k - i), j - i, l - k)
    rho = acf_lag_array(acf, max_lag + 1)
    var_1 = 1.0 - rho[j - i]
    var_2 = 1.0 - rho[l - k]
    if var_1 <= 0.0 or var_2 <= 0.0:
        raise DegeneracyError("unit correlation at positive lag: zero-variance difference")
    num = rho[abs(l - j)] - rho[abs(l - i)] - rho[abs(k - j)] + rho[abs(k - i)]
    r = num / (2.0 * np.sqrt(var_1) * np.sqrt(var_2))
    return float(_clamped_arcsin_arg(np.asarray(r)))


def _prepare_rho(acf: AcfSpec, n: int) -> np.ndarray:
    rho = acf_lag_array(acf, n)
    if np.max(np.abs(rho)) > 1.0 + CLAMP_TOL:
        raise NumericError("autocorrelation values exceed 1 beyond tolerance")
    rho = np.clip(rho, -1.0, 1.0)
    if n > 1 and np.any(rho[1:] >= 1.0):
        raise DegeneracyError("unit correlation at positive lag: variance is degenerate")
    return rho


def _var_naive_n4(rho: np.ndarray, n: int) -> float:
    iu, ju = np.triu_indices(n, 1)
    num = (
        rho[np.abs(ju[None, :] - ju[:, None])]
        - rho[np.abs(ju[None, :] - iu[:, None])]
        - rho[np.abs(iu[None, :] - ju[:, None])]
        + rho[np.abs(iu[None, :] - iu[:, None])]
    )
    sq = np.sqrt(1.0 - rho[ju - iu])
    r = num / (2.0 * sq[:, None] * sq[None, :])
    # identical pairs have correlation exactly 1; pin them so arcsin (whose
    # derivative diverges at 1) cannot amplify last-ulp rounding noise
    np.fill_diagonal(r, 1.0)
    r = _clamped_arcsin_arg(r)
    total = np.sum(np.arcsin(r))
    n_pairs = len(iu)
    return (2.0 / np.pi) * total / n_pairs**2


def _var_stationary_n3(rho: np.ndarray, n: int) -> float:
    """O(n^3) variance sum over difference triples.

    Pairs are canonicalized so the earlier pair starts at 0: patterns
    (0, d1) vs (d2, d2 + e) with d1, e >= 1 and d2 >= 0 can be placed at
    n - span positions (span = max(d1, d2 + e)).  Patterns with d2 > 0
    stand for both orderings of the two pairs, hence weight 2; d2 = 0
    patterns are self-paired under the swap, hence weight 1.
    """
    d1 = np.arange(1, n)
    inv_sq1 = 1.0 / (2.0 * np.sqrt(1.0 - rho[d1]))
    total = 0.0
    for d2 in range(0, n - 1):
        e = np.arange(1, n - d2) if d2 > 0 else d1
        gap2, gap1 = np.meshgrid(e, d1)
        num = (
            rho[np.abs(d2 + gap2 - gap1)]
            - rho[d2 + gap2]
            - rho[np.abs(d2 - gap1)]
            + rho[d2]
        )
        r = num * inv_sq1[:, None] / np.sqrt(1.0 - rho[e])[None, :]
        if d2 == 0:
            np.fill_diagonal(r, 1.0)  # identical-pair patterns, see naive_n4
        r = _clamped_arcsin_arg(r)
        counts = n - np.maximum(gap1, d2 + gap2)
        weight = 1.0 if d2 == 0 else 2.0
        total += weight * float(np.sum(counts * np.arcsin(r)))
    n_pairs = n * (n - 1) // 2
    return (2.0 / np.pi) * total / n_pairs**2


def var_tau_exact(acf: AcfSpec, n: int, method: str = "stationary_n3") -> VarianceResult:
    """Exact variance of tau for a length-n stationary Gaussian series.

    The sum runs over all ordered pair-pairs, including the diagonal terms
    (correlation 1) and index-sharing terms, which Greiner's equality covers
    the same way as disjoint ones.

    Args:
        acf: autocorrelation specification.
        n: series length >= 2.
        method: ``stationary_n3`` (difference-triple reduction, O(n^3)) or
            ``naive_n4`` (direct double-pair sum, O(n^4), reference).

    Returns:
        VarianceResult with variance in (0, 1].
    """
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")
    if method not in ("stationary_n3", "naive_n4"):
        raise ParameterError(f"unknown method {method!r}")
    rho = _prepare_rho(acf, n)
    if method == "naive_n4":
        variance = _var_naive_n4(rho, n)
    else:
        variance = _var_stationary_n3(rho, n)
    return VarianceResult(variance=variance, n=n, acf=acf, method=method)


def normalized_tau(series, acf: AcfSpec) -> float:
    """tau divided by the square root of its exact variance.

    This is the quantity whose distribution the Gaussian approximation
    concerns; for an i.i.d. ACF and large n it is close to sqrt(9n/4) * tau.
    """
    values = series_values(series)
    t = tau(values)
    v = var_tau_exact(acf, values.size)
    return t.tau / np.sqrt(v.variance)
