"""Practical validity criteria for the Gaussian approximation of tau.

Two scalings govern how far the distribution of the normalized tau sits from
Gaussian: the total correlation k_tot = k^(n-1) of an AR(1) series (the
correlation between its first and last samples) and the relative window size
alpha = q/(n+q-1) = q/N of a moving average.  Empirically calibrated at the
5% level, the approximation holds for k_tot <= 1e-8 and alpha <= 10%.
"""

from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .errors import ParameterError

__all__ = [
    "K_TOT_THRESHOLD",
    "ALPHA_THRESHOLD",
    "DecisionReport",
    "k_tot",
    "log10_k_tot",
    "alpha",
    "decide_ar1",
    "decide_sma",
]

K_TOT_THRESHOLD = 1e-8
ALPHA_THRESHOLD = 0.10


@dataclass(frozen=True)
class DecisionReport:
    """Verdict on the Gaussian approximation for one parameter pair.

    ``verdict`` is ``gaussian_ok`` iff the scaling value is at or below the
    threshold (values exactly at the threshold pass).
    """
    scaling_name: str
    scaling_value: float
    threshold: float
    verdict: str
    inputs: Dict[str, float] = field(default_factory=dict)

    @property
    def gaussian_ok(self) -> bool:
        return self.verdict == "gaussian_ok"


def _validate_ar1(k: float, n: int) -> None:
    if not (0.0 < k < 1.0):
        raise ParameterError(f"k must be in (0, 1), got {k}")
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")


def k_tot(k: float, n: int) -> float:
    """Total correlation k^(n-1), evaluated in log space.

    The comparison against thresholds is done on log10 values (see
    :func:`decide_ar1`), so verdicts stay exact even when the value itself
    underflows to zero below ~1e-308.
    """
    _validate_ar1(k, n)
    return float(np.exp((n - 1) * np.log(k)))


def log10_k_tot(k: float, n: int) -> float:
    """log10 of k^(n-1); immune to underflow."""
    _validate_ar1(k, n)
    return float((n - 1) * np.log10(k))


def alpha(q: int, n: int) -> float:
    """Relative window size q / (n + q - 1) of a length-n moving average.

    The denominator N = n + q - 1 is the length of the raw series the
    moving average was computed from.
    """
    if q < 1:
        raise ParameterError(f"q must be >= 1, got {q}")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    return q / (n + q - 1)


def decide_ar1(k: float, n: int, threshold: float = K_TOT_THRESHOLD) -> DecisionReport:
    """Is the Gaussian approximation acceptable for an AR(1) series?

    Not acceptable iff k^(n-1) > threshold (default 1e-8).
    """
    if threshold <= 0.0:
        raise ParameterError(f"threshold must be > 0, got {threshold}")
    value = k_tot(k, n)
    ok = log10_k_tot(k, n) <= np.log10(threshold)
    return DecisionReport(
        scaling_name="k_tot",
        scaling_value=value,
        threshold=threshold,
        verdict="gaussian_ok" if ok else "not_gaussian",
        inputs={"k": k, "n": n},
    )


def decide_sma(q: int, n: int, threshold: float = ALPHA_THRESHOLD) -> DecisionReport:
    """Is the Gaussian approximation acceptable for a moving-average series?

    Not acceptable iff q/(n+q-1) > threshold (default 10%).
    """
    if not (0.0 < threshold < 1.0):
        raise ParameterError(f"threshold must be in (0, 1), got {threshold}")
    value = alpha(q, n)
    return DecisionReport(
        scaling_name="alpha",
        scaling_value=value,
        threshold=threshold,
        verdict="gaussian_ok" if value <= threshold else "not_gaussian",
        inputs={"q": q, "n": n},
    )
