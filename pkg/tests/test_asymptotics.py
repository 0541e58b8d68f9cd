"""Limit-variance quadrature, closed forms, and the exact arcsin identities."""

import math

import numpy as np
import pytest

from mkgauss import (
    AcfSpec,
    DegeneracyError,
    LimitRhoSpec,
    ParameterError,
    QuadratureConfig,
    QuadratureError,
    SMA_LIMIT_VALUE,
    ar1_lower_bound,
    lemma_identity_checks,
    prop1_sum,
    r_kernel,
    sma_limit_value,
    var_limit_quadrature,
    var_tau_exact,
)

FAST_CFG = QuadratureConfig(subdivisions=32)


class TestRKernel:
    def test_sma_vanishes_beyond_window(self):
        spec = LimitRhoSpec.sma_limit(0.2)
        assert r_kernel(spec, 0.0, 0.3, 0.6, 0.9) == 0.0

    def test_ar1_nested_closed_form(self):
        # r(0, z, x, y) = sqrt(1-k^(y-x)) (k^(z-y) + k^x) / (2 sqrt(1-k^z))
        for k_tot in (0.1, 0.5, 0.9):
            spec = LimitRhoSpec.ar1_limit(k_tot)
            for (x, y, z) in [(0.1, 0.4, 0.8), (0.2, 0.5, 0.6), (0.05, 0.6, 0.95)]:
                expected = (
                    np.sqrt(1 - k_tot ** (y - x))
                    * (k_tot ** (z - y) + k_tot**x)
                    / (2 * np.sqrt(1 - k_tot**z))
                )
                assert r_kernel(spec, 0.0, z, x, y) == pytest.approx(expected, abs=1e-12)

    def test_sma_interleaved_reduces_to_arcsin_sum_kernel(self):
        # for a >= 1: r(0, y, x, z) = (y - x) / sqrt(y (z - x))
        for a in (1.0, 1.7):
            spec = LimitRhoSpec.sma_limit(a)
            for (x, y, z) in [(0.1, 0.4, 0.8), (0.25, 0.5, 0.75)]:
                expected = (y - x) / math.sqrt(y * (z - x))
                assert r_kernel(spec, 0.0, y, x, z) == pytest.approx(expected, abs=1e-12)

    def test_singularity_error(self):
        with pytest.raises(DegeneracyError):
            r_kernel(LimitRhoSpec.ar1_limit(0.5), 0.3, 0.3, 0.5, 0.9)

    def test_domain_error(self):
        with pytest.raises(ParameterError):
            r_kernel(LimitRhoSpec.ar1_limit(0.5), 0.0, 1.2, 0.5, 0.9)


class TestVarLimitQuadrature:
    @pytest.mark.parametrize("a", [1.0, 1.5, 2.0])
    def test_sma_limit_17_over_72(self, a):
        result = var_limit_quadrature(LimitRhoSpec.sma_limit(a))
        assert abs(result.value - SMA_LIMIT_VALUE) < 2e-3
        assert result.estimated_error < 1e-3

    def test_independent_of_a_above_one(self):
        values = [var_limit_quadrature(LimitRhoSpec.sma_limit(a), FAST_CFG).value
                  for a in (1.0, 1.5, 2.0)]
        assert max(values) - min(values) < 1e-9  # identical integrand on [0,1]

    def test_ar1_small_k_tot(self):
        # decay toward 0 is logarithmic in k_tot: still ~0.028 at 1e-12,
        # below 5e-3 only near the smallest representable values.
        mid = var_limit_quadrature(LimitRhoSpec.ar1_limit(1e-12), FAST_CFG)
        assert mid.value == pytest.approx(0.0285, abs=1.5e-3)
        tiny = var_limit_quadrature(LimitRhoSpec.ar1_limit(1e-300), FAST_CFG)
        assert tiny.value < 5e-3

    def test_doubling_changes_less_than_tolerance(self):
        coarse = var_limit_quadrature(LimitRhoSpec.sma_limit(1.0), QuadratureConfig(16))
        fine = var_limit_quadrature(LimitRhoSpec.sma_limit(1.0), QuadratureConfig(32))
        assert abs(coarse.value - fine.value) < coarse.estimated_error + fine.estimated_error

    def test_adaptive_rule_converges(self):
        cfg = QuadratureConfig(subdivisions=16, rule="adaptive", abs_tol=5e-4)
        result = var_limit_quadrature(LimitRhoSpec.sma_limit(1.0), cfg)
        assert abs(result.value - SMA_LIMIT_VALUE) < 2e-3
        assert result.estimated_error < 5e-4

    def test_nonconvergence_raises(self):
        cfg = QuadratureConfig(subdivisions=8, abs_tol=1e-12)
        with pytest.raises(QuadratureError):
            var_limit_quadrature(LimitRhoSpec.ar1_limit(0.5), cfg)

    def test_bad_config(self):
        with pytest.raises(ParameterError):
            QuadratureConfig(subdivisions=4)
        with pytest.raises(ParameterError):
            QuadratureConfig(abs_tol=0.0)
        with pytest.raises(ParameterError):
            QuadratureConfig(rule="simpson")


class TestAr1LowerBound:
    def test_positive_and_below_limit(self):
        for k_tot in (0.1, 0.5, 0.9):
            bound = ar1_lower_bound(k_tot, FAST_CFG)
            limit = var_limit_quadrature(LimitRhoSpec.ar1_limit(k_tot), FAST_CFG)
            assert bound.is_lower_bound
            assert bound.value > 0.0
            budget = bound.estimated_error + limit.estimated_error
            assert bound.value <= limit.value + budget

    def test_monotone_in_k_tot(self):
        values = [ar1_lower_bound(k, FAST_CFG).value for k in (0.1, 0.5, 0.9)]
        assert values[0] < values[1] < values[2]

    def test_vanishing_limit(self):
        assert ar1_lower_bound(1e-12, FAST_CFG).value == pytest.approx(0.0139, abs=1e-3)
        assert ar1_lower_bound(1e-300, FAST_CFG).value < 5e-3

    def test_domain(self):
        with pytest.raises(ParameterError):
            ar1_lower_bound(0.0)


class TestSmaLimitValue:
    def test_exact_above_one(self):
        result = sma_limit_value(1.0)
        assert result.value == SMA_LIMIT_VALUE
        assert not result.is_lower_bound
        assert sma_limit_value(3.7).value == SMA_LIMIT_VALUE

    def test_bound_below_one(self):
        result = sma_limit_value(0.5)
        assert result.is_lower_bound
        assert result.value == pytest.approx(SMA_LIMIT_VALUE * 0.125 * 2.5, abs=1e-12)
        assert result.value == pytest.approx(0.0737847, abs=1e-6)

    def test_vanishes_at_zero(self):
        assert sma_limit_value(1e-6).value < 1e-17

    def test_domain(self):
        with pytest.raises(ParameterError):
            sma_limit_value(0.0)

    def test_quadrature_respects_bound_below_one(self):
        for a in (0.3, 0.6, 0.9):
            quad = var_limit_quadrature(LimitRhoSpec.sma_limit(a), FAST_CFG)
            assert quad.value >= sma_limit_value(a).value - 2e-3


class TestProp1:
    def test_smallest_case_is_exact(self):
        # single term arcsin((2-1)/(sqrt(2) sqrt(2))) = arcsin(1/2)
        assert prop1_sum(3) == pytest.approx(math.asin(0.5), abs=1e-15)
        assert prop1_sum(3) == pytest.approx(math.pi / 6, abs=1e-15)

    def test_pi_over_six_for_all_n(self):
        for n in range(3, 51):
            assert abs(prop1_sum(n) - math.pi / 6) < 1e-11

    def test_tight_tolerances(self):
        assert abs(prop1_sum(10) - math.pi / 6) < 1e-12
        assert abs(prop1_sum(50) - math.pi / 6) < 1e-11

    def test_domain(self):
        with pytest.raises(ParameterError):
            prop1_sum(2)


class TestLemmaIdentities:
    def test_full_scan_has_no_violations(self):
        report = lemma_identity_checks()
        assert report.passed, report.violations[:3]
        assert report.checks_run > 50_000

    def test_arcsin_triple_degenerate_corner(self):
        assert math.asin(1.0) + math.asin(0.0) + math.asin(0.0) == pytest.approx(math.pi / 2)

    def test_combinatorial_spot_value(self):
        def lterm(n, j, k):
            return math.asin((k - j) / (math.sqrt(k) * math.sqrt(n - j)))

        total = lterm(4, 1, 2) + lterm(4, 1, 3) + lterm(4, 2, 3)
        assert total == pytest.approx(math.pi / 2, abs=1e-14)


class TestFiniteNBridge:
    def test_sma_variance_approaches_limit(self):
        diffs = []
        for n in (15, 30, 60, 120):
            value = var_tau_exact(AcfSpec.sma(n), n).variance
            diffs.append(abs(value - SMA_LIMIT_VALUE))
        assert diffs == sorted(diffs, reverse=True)
        assert diffs[-1] < 0.02
