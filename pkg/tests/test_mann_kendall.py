"""Tau, tau_fast, and the exact variance of tau."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mkgauss import (
    AcfSpec,
    Ar1Params,
    DegeneracyError,
    ParameterError,
    TieError,
    normalized_tau,
    pair_diff_corr,
    tau,
    tau_batch,
    tau_fast,
    var_tau_exact,
)
from mkgauss.processes import ar1_batch
from mkgauss.seeding import derive_seed

unique_series = st.lists(
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
    min_size=2, max_size=40, unique=True,
)


def tau_by_enumeration(values) -> Fraction:
    """Independent oracle: literal pairwise sign sum as an exact fraction."""
    values = list(values)
    n = len(values)
    s = 0
    for i in range(n):
        for j in range(i + 1, n):
            s += (values[j] > values[i]) - (values[j] < values[i])
    return Fraction(s, math.comb(n, 2))


def iid_var_by_enumeration(n: int) -> Fraction:
    """Exact Var(tau) for i.i.d. continuous samples: average over all n!
    rank orderings (each equally likely, no ties)."""
    total = Fraction(0)
    count = 0
    for perm in itertools.permutations(range(n)):
        total += tau_by_enumeration(perm) ** 2
        count += 1
    return total / count  # E[tau] = 0 by symmetry


def iid_var_closed_form(n: int) -> float:
    return 2.0 * (2 * n + 5) / (9.0 * n * (n - 1))


class TestTau:
    def test_monotone_series(self):
        assert tau([1, 2, 3]).tau == 1.0
        assert tau([3, 2, 1]).tau == -1.0

    def test_hand_enumerated(self):
        result = tau([1, 3, 2])
        assert result.s == 1
        assert result.tau == pytest.approx(1 / 3)

    def test_too_short(self):
        with pytest.raises(ParameterError):
            tau([1.0])

    def test_ties_rejected(self):
        with pytest.raises(TieError):
            tau([1.0, 2.0, 1.0])
        with pytest.raises(TieError):
            tau_fast([5.0, 5.0])
        with pytest.raises(TieError):
            tau_batch(np.array([[1.0, 2.0, 2.0]]))

    @given(unique_series)
    @settings(max_examples=150, deadline=None)
    def test_matches_enumeration_oracle(self, values):
        expected = tau_by_enumeration(values)
        result = tau(values)
        assert Fraction(result.s, result.n_pairs) == expected

    @given(unique_series)
    @settings(max_examples=150, deadline=None)
    def test_antisymmetry(self, values):
        base = tau(values).tau
        assert tau(list(reversed(values))).tau == pytest.approx(-base)
        assert tau([-v for v in values]).tau == pytest.approx(-base)

    @given(unique_series)
    @settings(max_examples=100, deadline=None)
    def test_monotone_invariance(self, values):
        base = tau(values).s
        scaled = [math.exp(v / 1e6) for v in values]
        if len(set(scaled)) == len(scaled):  # exp can collapse near-equal floats
            assert tau(scaled).s == base
        cubed = [v**3 for v in values]
        if len(set(cubed)) == len(cubed):
            assert tau(cubed).s == base


class TestTauFast:
    def test_spot_values(self):
        assert tau_fast([1, 2, 3]).tau == 1.0
        result = tau_fast([2, 1, 4, 3])
        assert result.s == 2
        assert result.tau == pytest.approx(1 / 3)

    def test_exhaustive_small(self):
        for n in range(2, 7):
            for perm in itertools.permutations(range(n)):
                values = [float(v) for v in perm]
                assert tau_fast(values).s == tau(values).s

    def test_agrees_with_tau_on_random_series(self):
        rng = np.random.default_rng(1234)
        for _ in range(1000):
            n = rng.integers(2, 201)
            values = rng.standard_normal(n)
            assert tau_fast(values).s == tau(values).s

    def test_batch_agrees_with_tau(self):
        rng = np.random.default_rng(99)
        rows = rng.standard_normal((50, 37))
        taus = tau_batch(rows)
        for row, value in zip(rows, taus):
            assert value == pytest.approx(tau(row).tau, abs=0)


class TestPairDiffCorr:
    def test_iid_values(self):
        iid = AcfSpec.iid()
        assert pair_diff_corr(iid, 1, 2, 1, 2) == 1.0
        assert pair_diff_corr(iid, 1, 2, 1, 3) == pytest.approx(0.5)
        assert pair_diff_corr(iid, 1, 2, 2, 3) == pytest.approx(-0.5)

    def test_index_validation(self):
        with pytest.raises(ParameterError):
            pair_diff_corr(AcfSpec.iid(), 2, 1, 1, 2)

    def test_degenerate_acf(self):
        constant = AcfSpec.tabulated([1.0, 1.0, 1.0])
        with pytest.raises(DegeneracyError):
            pair_diff_corr(constant, 0, 1, 0, 2)

    def test_shift_invariance(self):
        spec = AcfSpec.arma(0.4, 3)
        assert pair_diff_corr(spec, 0, 2, 1, 5) == pytest.approx(
            pair_diff_corr(spec, 10, 12, 11, 15), abs=1e-15
        )


class TestVarTauExact:
    def test_n2_is_one_for_any_acf(self):
        for spec in (AcfSpec.iid(), AcfSpec.ar1(0.8), AcfSpec.sma(3)):
            assert var_tau_exact(spec, 2).variance == pytest.approx(1.0, abs=1e-15)

    def test_iid_n4_matches_permutation_oracle(self):
        # 13/54 for n = 4, from all 24 rank orderings
        expected = iid_var_by_enumeration(4)
        assert expected == Fraction(13, 54)
        got = var_tau_exact(AcfSpec.iid(), 4).variance
        assert got == pytest.approx(float(expected), abs=1e-14)

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_iid_closed_form_vs_enumeration(self, n):
        assert float(iid_var_by_enumeration(n)) == pytest.approx(
            iid_var_closed_form(n), abs=1e-15
        )

    def test_iid_closed_form_3_to_50(self):
        for n in range(3, 51):
            got = var_tau_exact(AcfSpec.iid(), n).variance
            assert abs(got - iid_var_closed_form(n)) < 1e-12

    @pytest.mark.parametrize(
        "spec",
        [AcfSpec.iid(), AcfSpec.ar1(0.6), AcfSpec.sma(3), AcfSpec.arma(0.5, 4)],
        ids=["iid", "ar1", "sma", "arma"],
    )
    def test_n3_equals_n4(self, spec):
        for n in range(2, 16):
            fast = var_tau_exact(spec, n, method="stationary_n3").variance
            slow = var_tau_exact(spec, n, method="naive_n4").variance
            assert abs(fast - slow) < 1e-10

    def test_variance_in_unit_interval(self):
        for spec in (AcfSpec.iid(), AcfSpec.ar1(0.95), AcfSpec.sma(10),
                     AcfSpec.arma(0.7, 5)):
            for n in (2, 5, 20, 60):
                value = var_tau_exact(spec, n).variance
                assert 0.0 < value <= 1.0

    def test_empirical_ar1_variance(self):
        # 10^4 simulated AR(1)(k=0.5, n=30) taus vs the exact value,
        # within three Monte-Carlo standard errors of the variance estimate.
        params = Ar1Params(0.5, 30)
        seeds = [derive_seed(8321, i) for i in range(10_000)]
        taus = tau_batch(ar1_batch(params, seeds))
        sample_var = np.var(taus, ddof=1)
        centered = taus - taus.mean()
        m4 = np.mean(centered**4)
        se = np.sqrt((m4 - sample_var**2) / taus.size)
        exact = var_tau_exact(AcfSpec.ar1(0.5), 30).variance
        assert abs(sample_var - exact) < 3 * se

    def test_degenerate_acf_rejected(self):
        with pytest.raises(DegeneracyError):
            var_tau_exact(AcfSpec.tabulated([1.0, 1.0, 0.5]), 3)

    def test_bad_inputs(self):
        with pytest.raises(ParameterError):
            var_tau_exact(AcfSpec.iid(), 1)
        with pytest.raises(ParameterError):
            var_tau_exact(AcfSpec.iid(), 10, method="magic")


class TestNormalizedTau:
    def test_increasing_series_iid(self):
        value = normalized_tau(list(range(1, 11)), AcfSpec.iid())
        assert value == pytest.approx(1.0 / math.sqrt(50.0 / 810.0))

    def test_n2_gives_unit_statistic(self):
        assert normalized_tau([0.0, 1.0], AcfSpec.ar1(0.5)) == pytest.approx(1.0)
        assert normalized_tau([1.0, 0.0], AcfSpec.ar1(0.5)) == pytest.approx(-1.0)

    def test_reversal_negates(self):
        values = [0.3, -1.2, 0.7, 2.4, -0.5]
        spec = AcfSpec.sma(2)
        assert normalized_tau(values[::-1], spec) == pytest.approx(
            -normalized_tau(values, spec)
        )
