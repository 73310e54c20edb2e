from __future__ import annotations

import math
import random

import pytest

from oracles import brute_force_exact_p, t_upper_tail
from dyad_runner.stats.tests import (
    DegenerateSampleError,
    PairedSample,
    StatsInputError,
    TestKind,
    gated_compare,
    paired_t,
    shapiro_wilk,
    wilcoxon_signed_rank,
)

# Published Shapiro-Wilk worked examples. The 11 weights are the classic
# dataset from the test's original presentation (W reported as 0.79); the
# two 20-point samples are the standard checks for Royston's approximation.
SW_CASES = [
    ([148, 154, 158, 160, 161, 162, 166, 170, 182, 195, 236], 0.7888, 0.0067),
    (
        [0.11, 7.87, 4.61, 10.14, 7.95, 3.14, 0.46, 4.43, 0.21, 4.75,
         0.71, 1.52, 3.24, 0.93, 0.42, 4.97, 9.53, 4.55, 0.47, 6.66],
        0.9005, 0.0421,
    ),
    (
        [1.36, 1.14, 2.92, 2.55, 1.46, 1.06, 5.27, -1.11, 3.48, 1.10,
         0.88, -0.51, 1.46, 0.52, 6.20, 1.69, 0.08, 3.67, 2.81, 3.49],
        0.9590, 0.5246,
    ),
]


class TestShapiroWilk:
    @pytest.mark.parametrize("data,w_ref,p_ref", SW_CASES)
    def test_published_examples(self, data, w_ref, p_ref):
        w, p = shapiro_wilk(data)
        assert w == pytest.approx(w_ref, abs=1e-3)
        assert p == pytest.approx(p_ref, abs=1e-3)

    def test_symmetric_small_sample_near_one(self):
        w, _ = shapiro_wilk([-1.0, 0.0, 1.0])
        assert w > 0.95

    def test_constant_sample_rejected(self):
        with pytest.raises(DegenerateSampleError):
            shapiro_wilk([2.0, 2.0, 2.0, 2.0])

    def test_too_small_rejected(self):
        with pytest.raises(StatsInputError):
            shapiro_wilk([1.0, 2.0])

    def test_affine_invariance(self):
        rng = random.Random(8)
        x = [rng.gauss(0, 1) for _ in range(25)]
        w0, _ = shapiro_wilk(x)
        for c, d in [(2.0, 0.0), (0.5, 3.0), (10.0, -7.0)]:
            w1, _ = shapiro_wilk([c * v + d for v in x])
            assert w1 == pytest.approx(w0, abs=1e-10)

    def test_w_in_unit_interval(self):
        rng = random.Random(4)
        for _ in range(50):
            x = [rng.uniform(0, 10) for _ in range(rng.randint(3, 40))]
            if max(x) == min(x):
                continue
            w, p = shapiro_wilk(x)
            assert 0.0 < w <= 1.0
            assert 0.0 <= p <= 1.0


class TestPairedT:
    def test_one_through_six(self):
        sample = PairedSample.of([1, 2, 3, 4, 5, 6], [0, 0, 0, 0, 0, 0])
        result = paired_t(sample)
        assert result.statistic == pytest.approx(4.583, abs=1e-3)
        assert result.df == 5
        assert result.p_two_sided == pytest.approx(
            2 * t_upper_tail(result.statistic, 5), abs=1e-3
        )
        assert result.p_two_sided == pytest.approx(0.0059, abs=2e-4)

    def test_antisymmetry(self):
        rng = random.Random(2)
        a = [rng.gauss(1, 2) for _ in range(8)]
        b = [rng.gauss(0, 2) for _ in range(8)]
        fwd = paired_t(PairedSample.of(a, b))
        rev = paired_t(PairedSample.of(b, a))
        assert fwd.statistic == pytest.approx(-rev.statistic, abs=1e-12)
        assert fwd.p_two_sided == pytest.approx(rev.p_two_sided, abs=1e-12)

    def test_constant_shift_is_degenerate(self):
        a = [3.0, 4.0, 5.0, 6.0, 7.0, 8.0]
        b = [v - 2.0 for v in a]
        with pytest.raises(DegenerateSampleError):
            paired_t(PairedSample.of(a, b))

    def test_p_monotone_in_statistic(self):
        ps = []
        for shift in (0.5, 1.0, 2.0, 4.0):
            d = [shift + 0.9 * i for i in range(6)]
            res = paired_t(PairedSample.of(d, [0.0] * 6))
            ps.append((abs(res.statistic), res.p_two_sided))
        ordered = sorted(ps)
        for (t1, p1), (t2, p2) in zip(ordered, ordered[1:]):
            assert t1 < t2 and p1 > p2


class TestWilcoxon:
    def test_all_positive_n6(self):
        result = wilcoxon_signed_rank(PairedSample.of([1, 2, 3, 4, 5, 6], [0] * 6))
        assert result.exact_p == pytest.approx(2 / 64)
        assert result.w_plus == 21.0
        assert result.statistic > 0

    def test_negation_flips_z(self):
        a = [1.5, -0.3, 2.2, 0.7, -1.1, 0.4]
        fwd = wilcoxon_signed_rank(PairedSample.of(a, [0] * 6))
        rev = wilcoxon_signed_rank(PairedSample.of([-v for v in a], [0] * 6))
        assert fwd.statistic == pytest.approx(-rev.statistic, abs=1e-12)
        assert fwd.exact_p == pytest.approx(rev.exact_p, abs=1e-12)

    def test_exact_matches_enumeration_oracle(self):
        rng = random.Random(123)
        for _ in range(100):
            # integer-ish values provoke ties; mix in floats as well
            d = [rng.choice([-3, -2, -1, 1, 2, 3]) + rng.choice([0.0, 0.0, 0.25])
                 for _ in range(6)]
            result = wilcoxon_signed_rank(PairedSample.of(d, [0.0] * 6))
            assert result.exact_p == brute_force_exact_p(d)

    @pytest.mark.parametrize("n", range(3, 11))
    def test_exact_matches_oracle_for_every_small_n(self, n):
        rng = random.Random(500 + n)
        for _ in range(25):
            d = [rng.choice([-3, -2, -1, 1, 2, 3]) + rng.choice([0.0, 0.5])
                 for _ in range(n)]
            result = wilcoxon_signed_rank(PairedSample.of(d, [0.0] * n))
            assert result.exact_p == brute_force_exact_p(d)

    def test_all_zero_differences_degenerate(self):
        with pytest.raises(DegenerateSampleError):
            wilcoxon_signed_rank(PairedSample.of([1, 2, 3], [1, 2, 3]))

    def test_too_few_nonzero(self):
        with pytest.raises(StatsInputError):
            wilcoxon_signed_rank(PairedSample.of([1, 2, 0], [0, 0, 0]))

    def test_z_matches_scipy_without_ties(self):
        from scipy import stats as sps

        rng = random.Random(9)
        for _ in range(20):
            d = [rng.gauss(0.3, 1.0) for _ in range(15)]
            result = wilcoxon_signed_rank(PairedSample.of(d, [0.0] * 15))
            ref = sps.wilcoxon(d, correction=False, mode="approx")
            assert result.p_two_sided == pytest.approx(ref.pvalue, abs=1e-9)

    def test_no_exact_above_enumeration_limit(self):
        rng = random.Random(11)
        d = [rng.gauss(0.5, 1.0) for _ in range(13)]
        result = wilcoxon_signed_rank(PairedSample.of(d, [0.0] * 13))
        assert result.exact_p is None


class TestGatedCompare:
    def test_gaussian_selects_t(self):
        rng = random.Random(77)
        a = [rng.gauss(5, 1) for _ in range(12)]
        b = [rng.gauss(4, 1) for _ in range(12)]
        result = gated_compare(PairedSample.of(a, b))
        assert result.test is TestKind.PAIRED_T
        assert result.normality_p > 0.05
        assert result.df == 11

    def test_heavy_tail_selects_wilcoxon(self):
        rng = random.Random(40)
        d = [math.tan(math.pi * (rng.random() - 0.5)) ** 3 for _ in range(12)]
        result = gated_compare(PairedSample.of(d, [0.0] * 12))
        assert result.test is TestKind.WILCOXON
        assert result.normality_p <= 0.05

    def test_gate_depends_only_on_differences(self):
        rng = random.Random(5)
        a = [rng.gauss(0, 1) for _ in range(10)]
        b = [rng.gauss(0, 1) for _ in range(10)]
        r1 = gated_compare(PairedSample.of(a, b))
        shifted = gated_compare(PairedSample.of([v + 100 for v in a], [v + 100 for v in b]))
        assert r1.test is shifted.test
        assert r1.normality_w == pytest.approx(shifted.normality_w, abs=1e-9)

    def test_n6_design_df_is_5(self):
        for seed in range(30):
            rng = random.Random(seed)
            a = [rng.gauss(10, 2) for _ in range(6)]
            b = [rng.gauss(9, 2) for _ in range(6)]
            result = gated_compare(PairedSample.of(a, b))
            if result.test is TestKind.PAIRED_T:
                assert result.df == 5


class TestPairedSampleType:
    def test_length_mismatch(self):
        with pytest.raises(StatsInputError):
            PairedSample(("a",), (1.0,), (1.0, 2.0))

    def test_nan_rejected(self):
        with pytest.raises(StatsInputError):
            PairedSample.of([1.0, float("nan")], [0.0, 0.0])

    def test_result_df_consistency(self):
        from dyad_runner.stats.tests import TestResult

        with pytest.raises(StatsInputError):
            TestResult(test=TestKind.WILCOXON, statistic=1.0, df=5, p_two_sided=0.5, n=6)
        with pytest.raises(StatsInputError):
            TestResult(test=TestKind.PAIRED_T, statistic=1.0, df=5, p_two_sided=1.5, n=6)
