"""Shapiro-Wilk W test of normality for sample sizes 3 to 5000.

Implements Royston's AS R94 approximation (Royston 1995, Applied Statistics
44): Blom-type normal scores for the coefficient vector, polynomial
corrections for the two largest weights, and the log-normal / three-parameter
log-normal transformations of W that give an approximately standard normal
z, from which the upper-tail p-value follows.  For n = 3 the distribution of
W is known exactly.

All polynomial coefficients are the published AS R94 values.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import DegeneracyError, ParameterError

__all__ = ["SwResult", "shapiro_wilk", "rejection_rate"]

# Royston (1995) polynomial coefficients, low order first.
_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_C3 = (0.544, -0.39978, 0.025054, -6.714e-4)
_C4 = (1.3822, -0.77857, 0.062767, -2.0322e-3)
_C5 = (-1.5861, -0.31082, -0.083751, 3.8915e-3)
_C6 = (-0.4803, -0.082676, 3.0302e-3)
_G = (-2.273, 0.459)

_MAX_N = 5000


@dataclass(frozen=True)
class SwResult:
    """Shapiro-Wilk statistic W in (0, 1] and its p-value."""
    w: float
    p_value: float
    n: int


def _poly(coeffs, x: float) -> float:
    result = 0.0
    for c in reversed(coeffs):
        result = result * x + c
    return result


def _weights(n: int) -> np.ndarray:
    """AS R94 coefficient vector for the order statistics (antisymmetric)."""
    if n == 3:
        return np.array([-np.sqrt(0.5), 0.0, np.sqrt(0.5)])
    m = ndtri((np.arange(1, n + 1) - 0.375) / (n + 0.25))
    ssq = float(np.sum(m * m))
    rsn = 1.0 / np.sqrt(n)
    w_n = m[-1] / np.sqrt(ssq) + _poly(_C1, rsn)
    a = m.copy()
    if n > 5:
        w_n1 = m[-2] / np.sqrt(ssq) + _poly(_C2, rsn)
        phi = (ssq - 2.0 * m[-1] ** 2 - 2.0 * m[-2] ** 2) / (
            1.0 - 2.0 * w_n**2 - 2.0 * w_n1**2
        )
        a /= np.sqrt(phi)
        a[-1], a[0] = w_n, -w_n
        a[-2], a[1] = w_n1, -w_n1
    else:
        phi = (ssq - 2.0 * m[-1] ** 2) / (1.0 - 2.0 * w_n**2)
        a /= np.sqrt(phi)
        a[-1], a[0] = w_n, -w_n
    return a


def shapiro_wilk(sample: Sequence[float]) -> SwResult:
    """Shapiro-Wilk normality test.

    Args:
        sample: 3 <= len(sample) <= 5000 real values, not all equal.

    Returns:
        SwResult with the W statistic and upper-tail p-value.

    Raises:
        ParameterError: sample size outside [3, 5000].
        DegeneracyError: zero sample range.
    """
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    if n < 3:
        raise ParameterError(f"Shapiro-Wilk needs at least 3 samples, got {n}")
    if n > _MAX_N:
        raise ParameterError(f"Shapiro-Wilk supports at most {_MAX_N} samples, got {n}")
    if x[-1] - x[0] <= 0.0:
        raise DegeneracyError("constant sample: Shapiro-Wilk W is undefined")

    a = _weights(n)
    centered = x - x.mean()
    ssx = float(np.sum(centered * centered))
    sax = float(np.dot(a, centered))
    ssa = float(np.sum(a * a))  # a is antisymmetric, so it has zero mean
    w = min(sax * sax / (ssa * ssx), 1.0)

    if n == 3:
        # exact: P(W < w) = (6/pi) (asin(sqrt(w)) - asin(sqrt(3/4)))
        p = 6.0 / np.pi * (np.arcsin(np.sqrt(w)) - np.arcsin(np.sqrt(0.75)))
        p = float(min(max(p, 0.0), 1.0))
        return SwResult(w=float(w), p_value=p, n=n)

    one_minus_w = 1.0 - w
    if one_minus_w <= 0.0:
        return SwResult(w=1.0, p_value=1.0, n=n)
    if n <= 11:
        gamma = _poly(_G, n)
        y = -np.log(gamma - np.log(one_minus_w))
        mu = _poly(_C3, n)
        sigma = np.exp(_poly(_C4, n))
    else:
        log_n = np.log(n)
        y = np.log(one_minus_w)
        mu = _poly(_C5, log_n)
        sigma = np.exp(_poly(_C6, log_n))
    p = float(1.0 - ndtr((y - mu) / sigma))
    return SwResult(w=float(w), p_value=p, n=n)


def rejection_rate(p_values: Sequence[float], level: float) -> float:
    """Fraction of p-values strictly below the significance level."""
    p = np.asarray(p_values, dtype=float)
    if p.size == 0:
        raise ParameterError("need at least one p-value")
    if not (0.0 < level < 1.0):
        raise ParameterError(f"level must be in (0, 1), got {level}")
    return float(np.mean(p < level))
