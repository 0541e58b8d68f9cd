"""Asymptotic variance of tau along parameter-scaled sequences.

When process parameters scale with the series length (lag-1 correlation
k_n = k_tot^(1/(n-1)), window q_n ~ a n), the variance of tau converges to

    (16/pi) * int_0^1 (1-z) int_0^z int_0^y f(x, y, z) dx dy dz,

with f(x, y, z) = asin(r(0,x,y,z)) + asin(r(0,y,x,z)) + asin(r(0,z,x,y))
and r the renormalized difference correlation built from the limit
correlation rho.  This module evaluates that triple integral by tensor
midpoint quadrature on the ordered simplex, the closed-form SMA limit values
(17/72 for a >= 1, the (17/72) a^3 (4 - 3a) lower bound for a < 1), a
strictly positive lower-bound integral for the AR(1) limit, an exact arcsin
sum identity equal to pi/6 for every n >= 3, and numeric scans of the
supporting arcsin / combinatorial / positivity identities.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

from .errors import DegeneracyError, ParameterError, QuadratureError
from .processes import LimitRhoSpec, _limit_rho_values
from .seeding import make_rng

__all__ = [
    "QuadratureConfig",
    "AsymptoticVariance",
    "IdentityReport",
    "SMA_LIMIT_VALUE",
    "r_kernel",
    "var_limit_quadrature",
    "ar1_lower_bound",
    "sma_limit_value",
    "prop1_sum",
    "lemma_identity_checks",
]

#: Limit variance of tau for SMA sequences with relative window a >= 1.
SMA_LIMIT_VALUE = 17.0 / 72.0

_CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class QuadratureConfig:
    """Tensor-midpoint quadrature settings.

    ``subdivisions`` is the number of midpoint nodes per axis; the rule is
    ``midpoint_tensor`` (fixed, with a half-resolution error estimate) or
    ``adaptive`` (double the subdivisions until the refinement change drops
    below ``abs_tol``).
    """
    subdivisions: int = 64
    rule: str = "midpoint_tensor"
    abs_tol: float = 1e-3

    def __post_init__(self):
        if self.subdivisions < 8:
            raise ParameterError(f"need >= 8 subdivisions, got {self.subdivisions}")
        if self.abs_tol <= 0.0:
            raise ParameterError(f"abs_tol must be > 0, got {self.abs_tol}")
        if self.rule not in ("midpoint_tensor", "adaptive"):
            raise ParameterError(f"unknown quadrature rule {self.rule!r}")


@dataclass(frozen=True)
class AsymptoticVariance:
    """A limit-variance value (or lower bound) with its refinement error."""
    value: float
    is_lower_bound: bool
    spec: LimitRhoSpec
    estimated_error: float = 0.0


# =============================================================================
# Renormalized difference-correlation kernel
# =============================================================================

def _r_values(spec: LimitRhoSpec, w, x, y, z) -> np.ndarray:
    """Vectorized r(w, x, y, z) without singularity diagnostics."""
    rho = lambda t: _limit_rho_values(spec, t)
    num = rho(np.abs(z - x)) - rho(np.abs(z - w)) - rho(np.abs(y - x)) + rho(np.abs(y - w))
    den = 2.0 * np.sqrt(1.0 - rho(np.abs(x - w))) * np.sqrt(1.0 - rho(np.abs(z - y)))
    return num / den


def r_kernel(spec: LimitRhoSpec, w: float, x: float, y: float, z: float) -> float:
    """Correlation of the renormalized differences (X_x - X_w, X_z - X_y).

        r(w,x,y,z) = [rho(|z-x|) - rho(|z-w|) - rho(|y-x|) + rho(|y-w|)]
                     / (2 sqrt(1 - rho(|x-w|)) sqrt(1 - rho(|z-y|)))

    Args:
        spec: limit correlation specification.
        w, x, y, z: reals in [0, 1] with rho(|x-w|) < 1 and rho(|z-y|) < 1.

    Returns:
        The kernel value clamped into [-1, 1] within a 1e-9 tolerance.
    """
    for v in (w, x, y, z):
        if not (0.0 <= v <= 1.0):
            raise ParameterError(f"coordinates must be in [0, 1], got {v}")
    rho_1 = float(_limit_rho_values(spec, np.abs(np.asarray(x - w))))
    rho_2 = float(_limit_rho_values(spec, np.abs(np.asarray(z - y))))
    if rho_1 >= 1.0 or rho_2 >= 1.0:
        raise DegeneracyError("unit correlation between kernel endpoints")
    r = float(_r_values(spec, w, x, y, z))
    if abs(r) > 1.0 + _CLAMP_TOL:
        raise DegeneracyError(f"kernel value {r} outside [-1, 1] beyond tolerance")
    return min(1.0, max(-1.0, r))


# =============================================================================
# Triple-integral quadrature on the ordered simplex
# =============================================================================

def _simplex_midpoint(integrand: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray],
                      subdivisions: int) -> float:
    """Midpoint-tensor integral of `integrand` over {0 < x < y < z < 1}.

    The open simplex is mapped from the unit cube by (x, y, z) =
    (z u2 u1, z u2, z) with Jacobian z^2 u2; midpoint nodes keep all
    evaluation points strictly inside, away from the singular faces
    x = 0, y = x, z = y where 1 - rho vanishes.  Accumulation is slice
    by slice in a fixed order, so results are bit-stable.
    """
    m = subdivisions
    t = (np.arange(m) + 0.5) / m
    u1, u2 = np.meshgrid(t, t, indexing="ij")
    slice_sums = []
    for z_val in t:
        y = z_val * u2
        x = y * u1
        jac = z_val * z_val * u2
        slice_sums.append(float(np.sum(integrand(x, y, z_val) * jac)))
    return math.fsum(slice_sums) / m**3


def _lemma_f(spec: LimitRhoSpec):
    def f(x, y, z):
        r1 = _r_values(spec, 0.0, x, y, z)
        r2 = _r_values(spec, 0.0, y, x, z)
        r3 = _r_values(spec, 0.0, z, x, y)
        total = np.arcsin(np.clip(r1, -1.0, 1.0))
        total += np.arcsin(np.clip(r2, -1.0, 1.0))
        total += np.arcsin(np.clip(r3, -1.0, 1.0))
        return (1.0 - z) * total
    return f


def _refined_quadrature(integrand, prefactor: float, cfg: QuadratureConfig):
    if cfg.rule == "midpoint_tensor":
        coarse = prefactor * _simplex_midpoint(integrand, cfg.subdivisions)
        fine = prefactor * _simplex_midpoint(integrand, 2 * cfg.subdivisions)
        err = abs(fine - coarse)
        if err > cfg.abs_tol:
            raise QuadratureError(
                f"refinement change {err:.3e} exceeds abs_tol {cfg.abs_tol:g}"
            )
        return fine, err
    # adaptive: double until converged
    m = cfg.subdivisions
    prev = prefactor * _simplex_midpoint(integrand, m)
    for _ in range(5):
        m *= 2
        cur = prefactor * _simplex_midpoint(integrand, m)
        err = abs(cur - prev)
        if err < cfg.abs_tol:
            return cur, err
        prev = cur
    raise QuadratureError(f"no convergence to {cfg.abs_tol:g} after refining to {m} nodes/axis")


def var_limit_quadrature(spec: LimitRhoSpec, cfg: QuadratureConfig = QuadratureConfig()) -> AsymptoticVariance:
    """Limit variance of tau by quadrature of the renormalized triple integral.

    Args:
        spec: limit correlation specification.
        cfg: quadrature settings.

    Returns:
        AsymptoticVariance whose ``estimated_error`` is the change under one
        subdivision doubling.
    """
    value, err = _refined_quadrature(_lemma_f(spec), 16.0 / np.pi, cfg)
    return AsymptoticVariance(value=value, is_lower_bound=False, spec=spec,
                              estimated_error=err)


def ar1_lower_bound(k_tot: float, cfg: QuadratureConfig = QuadratureConfig()) -> AsymptoticVariance:
    """Strictly positive lower bound on the AR(1)-limit variance of tau.

    Combines the nested and the interleaved kernel terms into a single
    nonnegative integrand before applying arcsin concavity:

        (32/pi) int (1-z) asin( sqrt(1-k^(y-x))
            (k^(z-y) (1 - sqrt(1-k^x) sqrt(1-k^z)) + k^x) / (4 sqrt(1-k^z)) )

    over the ordered simplex, with k = k_tot.
    """
    if not (0.0 < k_tot < 1.0):
        raise ParameterError(f"k_tot must be in (0, 1), got {k_tot}")
    log_k = np.log(k_tot)

    def integrand(x, y, z):
        pw = lambda t: np.exp(t * log_k)
        num = np.sqrt(1.0 - pw(y - x)) * (
            pw(z - y) * (1.0 - np.sqrt(1.0 - pw(x)) * np.sqrt(1.0 - pw(z))) + pw(x)
        )
        arg = np.clip(num / (4.0 * np.sqrt(1.0 - pw(z))), -1.0, 1.0)
        return (1.0 - z) * np.arcsin(arg)

    value, err = _refined_quadrature(integrand, 32.0 / np.pi, cfg)
    return AsymptoticVariance(value=value, is_lower_bound=True,
                              spec=LimitRhoSpec.ar1_limit(k_tot), estimated_error=err)


def sma_limit_value(a: float) -> AsymptoticVariance:
    """Closed-form SMA limit: exactly 17/72 for a >= 1, a lower bound below.

    For 0 < a < 1 the bound is (17/72) a^3 (4 - 3a); no quadrature involved.
    """
    if a <= 0.0:
        raise ParameterError(f"relative window a must be > 0, got {a}")
    spec = LimitRhoSpec.sma_limit(a)
    if a >= 1.0:
        return AsymptoticVariance(value=SMA_LIMIT_VALUE, is_lower_bound=False, spec=spec)
    return AsymptoticVariance(value=SMA_LIMIT_VALUE * a**3 * (4.0 - 3.0 * a),
                              is_lower_bound=True, spec=spec)


# =============================================================================
# Exact arcsin sum identity
# =============================================================================

def prop1_sum(n: int) -> float:
    """Average of arcsin((k-j)/(sqrt(k-i) sqrt(l-j))) over 0 <= i<j<k<l <= n.

    Equals pi/6 exactly for every n >= 3.  Stationarity of the summand in
    the index differences reduces the four-index sum to an O(n^3) one:
    sum over l of (n+1-l) times the i = 0 inner sum.
    """
    if n < 3:
        raise ParameterError(f"need n >= 3, got {n}")
    totals = []
    for l_val in range(3, n + 1):
        j = np.arange(1, l_val - 1)
        k = np.arange(2, l_val)
        jj, kk = np.meshgrid(j, k, indexing="ij")
        mask = kk > jj
        arg = (kk - jj) / (np.sqrt(kk) * np.sqrt(l_val - jj))
        inner = np.sum(np.arcsin(arg, where=mask, out=np.zeros_like(arg)))
        totals.append((n + 1 - l_val) * inner)
    return math.fsum(totals) / math.comb(n + 1, 4)


# =============================================================================
# Supporting identity scans
# =============================================================================

@dataclass
class IdentityReport:
    """Outcome of the numeric identity scans; empty violations means pass."""
    checks_run: int = 0
    violations: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def lemma_identity_checks(samples: int = 10_000, max_n: int = 50, seed: int = 0) -> IdentityReport:
    """Scan the three supporting identities over dense parameter grids.

    (i)  arcsin triple: for 0 <= a, b, c <= 1,
         asin(a) + asin(b) + asin(c) = pi/2  iff  a^2 + b^2 + c^2 + 2abc = 1,
         checked in both directions on `samples` random constrained triples.
    (ii) combinatorial: with L(j, k) = asin((k-j)/(sqrt(k) sqrt(n-j))),
         L(j,k) + L(j, n-k+j) + L(n-k, n-k+j) = pi/2 for all 0 < j < k < n,
         n <= max_n, exact to 1e-12.
    (iii) positivity: for 0 <= x <= y <= 1 and 0 < rho < 1,
         sqrt(1-rho^(1-y+x)) (rho^(1-y) - rho - rho^(y-x) + rho^x)
         + sqrt(1-rho^y) (-rho^(1-y) - rho + rho^(y-x) + rho^x) >= 0,
         scanned on a 100 x 100 x 9 grid down to -1e-12.

    Returns:
        IdentityReport listing a witness string per violation.
    """
    report = IdentityReport()
    rng = make_rng(seed)

    # (i) forward: constrained (a, b) with a^2 + b^2 <= 1 determine c >= 0
    ab = rng.random((4 * samples, 2))
    ab = ab[ab[:, 0] ** 2 + ab[:, 1] ** 2 <= 1.0][:samples]
    a, b = ab[:, 0], ab[:, 1]
    c = np.sqrt((1.0 - a * a) * (1.0 - b * b)) - a * b
    angle_sum = np.arcsin(a) + np.arcsin(b) + np.arcsin(np.clip(c, 0.0, 1.0))
    bad = np.abs(angle_sum - np.pi / 2) > 1e-9
    report.checks_run += a.size
    for idx in np.flatnonzero(bad)[:5]:
        report.violations.append(
            f"arcsin-triple forward: (a,b,c)=({a[idx]},{b[idx]},{c[idx]}) "
            f"sum={angle_sum[idx]}"
        )

    # (i) reverse: random angle splits of pi/2 must satisfy the polynomial
    parts = rng.dirichlet((1.0, 1.0, 1.0), size=samples) * (np.pi / 2)
    s = np.sin(parts)
    poly = np.sum(s * s, axis=1) + 2.0 * s[:, 0] * s[:, 1] * s[:, 2] - 1.0
    bad = np.abs(poly) > 1e-12
    report.checks_run += samples
    for idx in np.flatnonzero(bad)[:5]:
        report.violations.append(
            f"arcsin-triple reverse: angles={parts[idx]} residual={poly[idx]}"
        )

    # (ii) combinatorial identity, exact for integers
    for n in range(3, max_n + 1):
        j = np.arange(1, n - 1)
        k = np.arange(2, n)
        jj, kk = np.meshgrid(j, k, indexing="ij")
        mask = kk > jj
        jj, kk = jj[mask], kk[mask]

        def lterm(jv, kv):
            return np.arcsin((kv - jv) / (np.sqrt(kv) * np.sqrt(n - jv)))

        total = lterm(jj, kk) + lterm(jj, n - kk + jj) + lterm(n - kk, n - kk + jj)
        bad = np.abs(total - np.pi / 2) > 1e-12
        report.checks_run += jj.size
        for idx in np.flatnonzero(bad)[:5]:
            report.violations.append(
                f"combinatorial: n={n} (j,k)=({jj[idx]},{kk[idx]}) sum={total[idx]}"
            )

    # (iii) positivity scan
    grid = np.linspace(0.0, 1.0, 100)
    x, y = np.meshgrid(grid, grid, indexing="ij")
    mask = x <= y
    xv, yv = x[mask], y[mask]
    for rho in np.arange(0.1, 0.95, 0.1):
        expr = np.sqrt(1.0 - rho ** (1.0 - yv + xv)) * (
            rho ** (1.0 - yv) - rho - rho ** (yv - xv) + rho**xv
        ) + np.sqrt(1.0 - rho**yv) * (
            -(rho ** (1.0 - yv)) - rho + rho ** (yv - xv) + rho**xv
        )
        bad = expr < -1e-12
        report.checks_run += xv.size
        for idx in np.flatnonzero(bad)[:5]:
            report.violations.append(
                f"positivity: rho={rho:.1f} (x,y)=({xv[idx]},{yv[idx]}) value={expr[idx]}"
            )
    return report
