"""Stationary Gaussian AR(1), SMA and ARMA(1, q-1) simulation and correlation.

Three process families are covered, all Gaussian and weakly stationary:

- AR(1): X_i = k X_{i-1} + e_i with e_i ~ N(0, 1 - k^2), so every sample is
  marginally N(0, 1) and corr(X_i, X_{i+d}) = k^d.
- SMA(q): each sample is the sum of q consecutive unit-variance white-noise
  terms (left unnormalized, variance q); corr at lag d is max(1 - d/q, 0).
- ARMA(1, q-1) with all moving-average weights equal to one, realized as the
  q-window rolling sum of a stationary AR(1).  Its lag-d correlation has a
  closed form with separate branches for d < q-1 and d >= q-1.

The module also evaluates the renormalized limit correlation rho(x) on [0, 1]
reached when the process parameters scale with the series length n (lag-1
correlation k_n = k_tot^(1/(n-1)), window q_n ~ a*n).

All generators are deterministic given an explicit 64-bit seed.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.signal import lfilter

from .errors import DegeneracyError, ParameterError
from .seeding import make_rng

__all__ = [
    "Ar1Params",
    "SmaParams",
    "ArmaParams",
    "TimeSeries",
    "AcfSpec",
    "LimitRhoSpec",
    "gen_ar1",
    "gen_sma",
    "gen_arma",
    "acf_eval",
    "acf_lag_array",
    "limit_rho_eval",
]


# =============================================================================
# Parameter and data containers
# =============================================================================

@dataclass(frozen=True)
class Ar1Params:
    """AR(1) with lag-1 correlation k in (0, 1) and series length n."""
    k: float
    n: int

    def __post_init__(self):
        if not (0.0 < self.k < 1.0):
            raise ParameterError(f"AR(1) coefficient must be in (0, 1), got {self.k}")
        if self.n < 1:
            raise ParameterError(f"series length must be >= 1, got {self.n}")


@dataclass(frozen=True)
class SmaParams:
    """Simple moving average of window order q >= 1 and series length n."""
    q: int
    n: int

    def __post_init__(self):
        if self.q < 1:
            raise ParameterError(f"window order must be >= 1, got {self.q}")
        if self.n < 1:
            raise ParameterError(f"series length must be >= 1, got {self.n}")


@dataclass(frozen=True)
class ArmaParams:
    """ARMA(1, q-1) with AR coefficient k in [0, 1) and unit MA weights.

    The process is the q-window rolling sum of a stationary AR(1); q = 1
    recovers the plain AR(1) and k = 0 recovers the SMA(q).
    """
    k: float
    q: int
    n: int

    def __post_init__(self):
        if not (0.0 <= self.k < 1.0):
            raise ParameterError(f"ARMA coefficient must be in [0, 1), got {self.k}")
        if self.q < 1:
            raise ParameterError(f"MA window length must be >= 1, got {self.q}")
        if self.n < 1:
            raise ParameterError(f"series length must be >= 1, got {self.n}")


ProcessParams = Union[Ar1Params, SmaParams, ArmaParams]


@dataclass(frozen=True)
class TimeSeries:
    """Ordered real-valued samples plus the seed and model that produced them."""
    values: np.ndarray
    seed: int = 0
    model: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ParameterError("series must be a non-empty 1-d array")
        if not np.all(np.isfinite(values)):
            raise ParameterError("series contains non-finite values")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size


def series_values(series) -> np.ndarray:
    """Accept a TimeSeries or any 1-d array-like and return a float array."""
    if isinstance(series, TimeSeries):
        return series.values
    values = np.asarray(series, dtype=float)
    if values.ndim != 1:
        raise ParameterError("series must be 1-dimensional")
    return values


# =============================================================================
# Exact finite-lag autocorrelation functions
# =============================================================================

@dataclass(frozen=True)
class AcfSpec:
    """A finite-lag autocorrelation function rho(d), evaluable at integer lags.

    Kinds: ``iid``, ``ar1`` (parameter k), ``sma`` (parameter q), ``arma``
    (parameters k, q) and ``tabulated`` (explicit values starting at lag 0).
    """
    kind: str
    k: Optional[float] = None
    q: Optional[int] = None
    table: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def iid(cls) -> "AcfSpec":
        return cls("iid")

    @classmethod
    def ar1(cls, k: float) -> "AcfSpec":
        if not (0.0 <= k < 1.0):
            raise ParameterError(f"ar1 coefficient must be in [0, 1), got {k}")
        return cls("ar1", k=k)

    @classmethod
    def sma(cls, q: int) -> "AcfSpec":
        if q < 1:
            raise ParameterError(f"sma order must be >= 1, got {q}")
        return cls("sma", q=int(q))

    @classmethod
    def arma(cls, k: float, q: int) -> "AcfSpec":
        if not (0.0 <= k < 1.0):
            raise ParameterError(f"arma coefficient must be in [0, 1), got {k}")
        if q < 1:
            raise ParameterError(f"arma window length must be >= 1, got {q}")
        return cls("arma", k=k, q=int(q))

    @classmethod
    def tabulated(cls, values: Sequence[float]) -> "AcfSpec":
        table = np.asarray(values, dtype=float)
        if table.ndim != 1 or table.size < 1:
            raise ParameterError("tabulated ACF needs a non-empty 1-d value list")
        if abs(table[0] - 1.0) > 1e-12:
            raise ParameterError("tabulated ACF must have rho(0) = 1")
        if np.any(np.abs(table) > 1.0 + 1e-12):
            raise ParameterError("tabulated ACF values must lie in [-1, 1]")
        return cls("tabulated", table=table)

    def describe(self) -> str:
        if self.kind == "ar1":
            return f"ar1:{self.k:g}"
        if self.kind == "sma":
            return f"sma:{self.q}"
        if self.kind == "arma":
            return f"arma:{self.k:g},{self.q}"
        if self.kind == "tabulated":
            return f"tabulated[{self.table.size}]"
        return "iid"


def _arma_acf(k: float, q: int, d: np.ndarray) -> np.ndarray:
    # Closed form for the q-window rolling sum of a stationary AR(1).
    # k = 0 needs its own branch: the generic d >= q-1 expression would
    # evaluate 0**0 at d = q-1, where the correct value is 1/q.
    d = np.asarray(d, dtype=float)
    if k == 0.0:
        return np.maximum(1.0 - d / q, 0.0)
    den = q * (1.0 - k * k) - 2.0 * k * (1.0 - k**q)
    if den <= 0.0:
        raise DegeneracyError(f"degenerate ARMA variance for k={k}, q={q}")
    # exponents clipped at 0: each branch is evaluated everywhere by
    # np.where but only selected on its own side of d = q-1
    inner = (q - d) * (1.0 - k * k) + k * (
        k ** (q + d) + k ** np.maximum(q - d, 0.0) - 2.0 * k**d
    )
    outer = (1.0 - k**q) ** 2 * k ** np.maximum(d + 1.0 - q, 0.0)
    return np.where(d < q - 1, inner, outer) / den


def acf_lag_array(spec: AcfSpec, n_lags: int) -> np.ndarray:
    """Evaluate an AcfSpec at lags 0 .. n_lags-1 as a vector."""
    if n_lags < 1:
        raise ParameterError("need at least one lag")
    d = np.arange(n_lags)
    if spec.kind == "iid":
        rho = np.zeros(n_lags)
        rho[0] = 1.0
        return rho
    if spec.kind == "ar1":
        return np.asarray(spec.k, dtype=float) ** d
    if spec.kind == "sma":
        return np.maximum(1.0 - d / spec.q, 0.0)
    if spec.kind == "arma":
        return _arma_acf(spec.k, spec.q, d)
    if spec.kind == "tabulated":
        if n_lags > spec.table.size:
            raise ParameterError(
                f"lag {n_lags - 1} beyond tabulated ACF of length {spec.table.size}"
            )
        return spec.table[:n_lags].copy()
    raise ParameterError(f"unknown ACF kind {spec.kind!r}")


def acf_eval(spec: AcfSpec, d: int) -> float:
    """Exact lag-d autocorrelation for the given specification.

    Args:
        spec: autocorrelation specification.
        d: integer lag >= 0.

    Returns:
        rho(d) in [-1, 1]; rho(0) is always 1.
    """
    if d < 0:
        raise ParameterError(f"lag must be >= 0, got {d}")
    if spec.kind == "tabulated":
        if d >= spec.table.size:
            raise ParameterError(
                f"lag {d} beyond tabulated ACF of length {spec.table.size}"
            )
        return float(spec.table[d])
    if spec.kind == "iid":
        return 1.0 if d == 0 else 0.0
    if spec.kind == "ar1":
        return float(spec.k**d)
    if spec.kind == "sma":
        return float(max(1.0 - d / spec.q, 0.0))
    if spec.kind == "arma":
        return float(_arma_acf(spec.k, spec.q, np.asarray([d]))[0])
    raise ParameterError(f"unknown ACF kind {spec.kind!r}")


def acf_for_process(params: ProcessParams) -> AcfSpec:
    """The exact ACF of a simulated process family."""
    if isinstance(params, Ar1Params):
        return AcfSpec.ar1(params.k)
    if isinstance(params, SmaParams):
        return AcfSpec.sma(params.q)
    if isinstance(params, ArmaParams):
        return AcfSpec.arma(params.k, params.q)
    raise ParameterError(f"unknown process parameters {params!r}")


# =============================================================================
# Renormalized limit correlation rho(x) on [0, 1]
# =============================================================================

@dataclass(frozen=True)
class LimitRhoSpec:
    """Limit correlation function for parameter sequences scaled with n.

    Kinds: ``ar1_limit`` with total correlation k_tot (rho(x) = k_tot^x),
    ``sma_limit`` with relative window a (rho(x) = max(1 - x/a, 0)), and
    ``arma_limit`` combining both, with a branch point at x = a.
    """
    kind: str
    k_tot: Optional[float] = None
    a: Optional[float] = None

    @classmethod
    def ar1_limit(cls, k_tot: float) -> "LimitRhoSpec":
        if not (0.0 < k_tot < 1.0):
            raise ParameterError(f"k_tot must be in (0, 1), got {k_tot}")
        return cls("ar1_limit", k_tot=k_tot)

    @classmethod
    def sma_limit(cls, a: float) -> "LimitRhoSpec":
        if a <= 0.0:
            raise ParameterError(f"relative window a must be > 0, got {a}")
        return cls("sma_limit", a=a)

    @classmethod
    def arma_limit(cls, k_tot: float, a: float) -> "LimitRhoSpec":
        if not (0.0 < k_tot < 1.0):
            raise ParameterError(f"k_tot must be in (0, 1), got {k_tot}")
        if a <= 0.0:
            raise ParameterError(f"relative window a must be > 0, got {a}")
        return cls("arma_limit", k_tot=k_tot, a=a)

    def describe(self) -> str:
        if self.kind == "ar1_limit":
            return f"ar1_limit:{self.k_tot:g}"
        if self.kind == "sma_limit":
            return f"sma_limit:{self.a:g}"
        return f"arma_limit:{self.k_tot:g},{self.a:g}"


def _arma_limit_branch1(k_tot: float, a: float, x) -> np.ndarray:
    # Short-range branch (0 <= x <= min(a, 1)).  Written in a
    # cancellation-free form so the two branches agree at x = a to
    # near machine precision even for k_tot close to 1:
    #   numerator = (a - x) log(k) + k^x (1 - k^a) + k^a sinh(x log(k))
    #   denominator = a log(k) + 1 - k^a
    log_k = np.log(k_tot)
    u = np.asarray(x, dtype=float) * log_k
    v = a * log_k
    den = v - np.expm1(v)
    num = (v - u) + np.exp(u) * (-np.expm1(v)) + np.exp(v) * np.sinh(u)
    return num / den


def _arma_limit_branch2(k_tot: float, a: float, x) -> np.ndarray:
    # Tail branch (a <= x <= 1): (1 - k^a)^2 k^(x-a) / (-2 (a log k + 1 - k^a)).
    log_k = np.log(k_tot)
    v = a * log_k
    den = v - np.expm1(v)
    return np.expm1(v) ** 2 * np.exp((np.asarray(x, dtype=float) - a) * log_k) / (-2.0 * den)


def _limit_rho_values(spec: LimitRhoSpec, x: np.ndarray) -> np.ndarray:
    """Vectorized rho(x) without domain checks (x assumed in [0, 1])."""
    x = np.asarray(x, dtype=float)
    if spec.kind == "ar1_limit":
        return np.exp(x * np.log(spec.k_tot))
    if spec.kind == "sma_limit":
        return np.maximum(1.0 - x / spec.a, 0.0)
    if spec.kind == "arma_limit":
        return np.where(
            x < spec.a,
            _arma_limit_branch1(spec.k_tot, spec.a, np.minimum(x, spec.a)),
            _arma_limit_branch2(spec.k_tot, spec.a, np.maximum(x, spec.a)),
        )
    raise ParameterError(f"unknown limit kind {spec.kind!r}")


def limit_rho_eval(spec: LimitRhoSpec, x: float) -> float:
    """Evaluate the renormalized limit correlation rho at x in [0, 1]."""
    if not (0.0 <= x <= 1.0):
        raise ParameterError(f"x must be in [0, 1], got {x}")
    return float(_limit_rho_values(spec, np.asarray(x)))


# =============================================================================
# Generators
# =============================================================================

def _noise_matrix(seeds: Sequence[int], n: int) -> np.ndarray:
    """Stack independent standard-normal rows, one seeded stream per row."""
    out = np.empty((len(seeds), n))
    for row, seed in enumerate(seeds):
        out[row] = make_rng(seed).standard_normal(n)
    return out


def _ar1_from_noise(noise: np.ndarray, k: float) -> np.ndarray:
    """Stationary AR(1) rows from standard-normal rows.

    The first column is used as the stationary N(0, 1) start; the rest are
    scaled to innovation variance 1 - k^2, so every sample is marginally
    standard normal.
    """
    if k == 0.0 or noise.shape[1] == 1:
        return noise.copy()
    driven = np.sqrt(1.0 - k * k) * noise
    driven[:, 0] = noise[:, 0]
    return lfilter([1.0], [1.0, -k], driven, axis=1)


def _window_sums(rows: np.ndarray, q: int) -> np.ndarray:
    """Rolling sums of q consecutive columns (output has n = cols - q + 1)."""
    if q == 1:
        return rows
    csum = np.cumsum(rows, axis=1)
    n = rows.shape[1] - q + 1
    out = np.empty((rows.shape[0], n))
    out[:, 0] = csum[:, q - 1]
    out[:, 1:] = csum[:, q:] - csum[:, : n - 1]
    return out


def ar1_batch(params: Ar1Params, seeds: Sequence[int]) -> np.ndarray:
    """Independent AR(1) realizations, one per seed, as a (len(seeds), n) array."""
    return _ar1_from_noise(_noise_matrix(seeds, params.n), params.k)


def sma_batch(params: SmaParams, seeds: Sequence[int]) -> np.ndarray:
    """Independent SMA realizations, one per seed."""
    return _window_sums(_noise_matrix(seeds, params.n + params.q - 1), params.q)


def arma_batch(params: ArmaParams, seeds: Sequence[int]) -> np.ndarray:
    """Independent ARMA(1, q-1) realizations, one per seed.

    Built as q-window rolling sums of a stationary AR(1) of length n + q - 1,
    which makes the output stationary from the first sample.  With k = 0 this
    reduces draw-for-draw to the SMA generator, and with q = 1 to the AR(1).
    """
    noise = _noise_matrix(seeds, params.n + params.q - 1)
    return _window_sums(_ar1_from_noise(noise, params.k), params.q)


def process_batch(params: ProcessParams, seeds: Sequence[int]) -> np.ndarray:
    """Dispatch a batched generation on the parameter type."""
    if isinstance(params, Ar1Params):
        return ar1_batch(params, seeds)
    if isinstance(params, SmaParams):
        return sma_batch(params, seeds)
    if isinstance(params, ArmaParams):
        return arma_batch(params, seeds)
    raise ParameterError(f"unknown process parameters {params!r}")


def gen_ar1(params: Ar1Params, seed: int) -> TimeSeries:
    """Generate a stationary AR(1) series; each value is marginally N(0, 1)."""
    values = ar1_batch(params, [seed])[0]
    return TimeSeries(values, seed=seed, model=f"ar1(k={params.k:g}, n={params.n})")


def gen_sma(params: SmaParams, seed: int) -> TimeSeries:
    """Generate an SMA(q) series of q-window white-noise sums (variance q)."""
    values = sma_batch(params, [seed])[0]
    return TimeSeries(values, seed=seed, model=f"sma(q={params.q}, n={params.n})")


def gen_arma(params: ArmaParams, seed: int) -> TimeSeries:
    """Generate a stationary ARMA(1, q-1) series with unit MA weights."""
    values = arma_batch(params, [seed])[0]
    return TimeSeries(
        values, seed=seed, model=f"arma(k={params.k:g}, q={params.q}, n={params.n})"
    )
