"""Tests for the paired t-test and the incomplete beta function."""

import math

import numpy as np
import pytest
from scipy import special, stats

from evaluation import (
    paired_t_test,
    regularized_incomplete_beta,
    significance_stars,
    student_t_cdf,
    student_t_two_tailed,
)


class TestIncompleteBeta:
    """Tests for regularized_incomplete_beta."""

    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 7.5])
    @pytest.mark.parametrize("b", [0.5, 3.0, 12.0])
    @pytest.mark.parametrize("x", [0.01, 0.2, 0.5, 0.77, 0.999])
    def test_matches_scipy(self, a, b, x):
        assert regularized_incomplete_beta(a, b, x) == pytest.approx(special.betainc(a, b, x), rel=1e-10, abs=1e-14)

    def test_endpoints(self):
        assert regularized_incomplete_beta(2.0, 0.5, 0.0) == 0.0
        assert regularized_incomplete_beta(2.0, 0.5, 1.0) == 1.0

    @pytest.mark.parametrize("a, b, x", [(0.0, 1.0, 0.5), (1.0, -1.0, 0.5), (1.0, 1.0, 1.5)])
    def test_invalid(self, a, b, x):
        with pytest.raises(ValueError):
            regularized_incomplete_beta(a, b, x)


class TestStudentT:
    """Tests for the t distribution tail."""

    @pytest.mark.parametrize("df", [1, 2, 4, 9, 30])
    @pytest.mark.parametrize("t", [0.1, 1.0, 2.776, -3.5, 12.0])
    def test_two_tailed_matches_scipy(self, t, df):
        assert student_t_two_tailed(t, df) == pytest.approx(2 * stats.t.sf(abs(t), df), rel=1e-9, abs=1e-15)

    @pytest.mark.parametrize("t", [-2.0, 0.0, 0.7])
    def test_cdf(self, t):
        assert student_t_cdf(t, 4) == pytest.approx(stats.t.cdf(t, 4), rel=1e-9)

    def test_zero_and_infinite(self):
        """t = 0 gives p = 1; infinite t gives p = 0."""
        assert student_t_two_tailed(0.0, 4) == 1.0
        assert student_t_two_tailed(math.inf, 4) == 0.0

    def test_critical_value(self):
        """t = 2.776 at 4 degrees of freedom sits at p = 0.05."""
        assert student_t_two_tailed(2.776, 4) == pytest.approx(0.05, abs=1e-4)

    def test_bad_df(self):
        with pytest.raises(ValueError):
            student_t_two_tailed(1.0, 0)


class TestPairedTTest:
    """Tests for paired_t_test."""

    def test_matches_scipy(self):
        """Five seeds of HGT against GIN-like numbers."""
        ours = [59.0, 60.5, 58.0, 61.0, 59.5]
        theirs = [66.0, 65.0, 67.5, 64.0, 67.5]
        result = paired_t_test(ours, theirs)
        expected = stats.ttest_rel(ours, theirs)
        assert result.t == pytest.approx(expected.statistic, rel=1e-12)
        assert result.p == pytest.approx(expected.pvalue, rel=1e-8)
        assert result.df == 4
        assert result.mean_diff == pytest.approx(-6.4)
        assert not result.degenerate

    @pytest.mark.parametrize("seed", range(10))
    def test_random_against_scipy(self, seed):
        """Ten random vector pairs; t and p agree with scipy."""
        rng = np.random.default_rng(seed)
        a = rng.normal(60, 3, size=8)
        b = a + rng.normal(1, 2, size=8)
        result, expected = paired_t_test(a, b), stats.ttest_rel(a, b)
        assert result.t == pytest.approx(expected.statistic, rel=1e-10)
        assert result.p == pytest.approx(expected.pvalue, rel=1e-8)

    def test_antisymmetric(self):
        """Swapping the samples flips t and keeps p."""
        a, b = [1.0, 2.0, 4.0, 3.0], [2.0, 2.5, 5.0, 5.0]
        forward, backward = paired_t_test(a, b), paired_t_test(b, a)
        assert forward.t == pytest.approx(-backward.t)
        assert forward.p == pytest.approx(backward.p)

    def test_shift_invariant(self):
        """Adding a constant to both samples changes nothing."""
        a, b = np.array([1.0, 2.0, 4.0, 3.0]), np.array([2.0, 2.5, 5.0, 5.0])
        shifted = paired_t_test(a + 100, b + 100)
        assert shifted.t == pytest.approx(paired_t_test(a, b).t)

    def test_identical_samples(self):
        """All differences zero: t = 0, p = 1, flagged degenerate."""
        result = paired_t_test([5.0, 6.0, 7.0], [5.0, 6.0, 7.0])
        assert (result.t, result.p, result.degenerate) == (0.0, 1.0, True)

    def test_constant_nonzero_difference(self):
        """A constant nonzero difference is infinitely significant."""
        result = paired_t_test([55.0, 55.0, 55.0], [57.0, 57.0, 57.0])
        assert result.t == -math.inf
        assert result.p == 0.0
        assert result.degenerate

    @pytest.mark.parametrize("shift", [0.0, 0.1, 100.3])
    def test_constant_difference_after_shift(self, shift):
        """Rounding noise from a shift does not turn a constant difference into a finite t."""
        a = np.array([1.0, 2.0, 3.0]) + shift
        b = np.array([0.0, 1.0, 2.0]) + shift
        result = paired_t_test(a, b)
        assert result.degenerate
        assert (result.t, result.p) == (math.inf, 0.0)
        assert result.mean_diff == pytest.approx(1.0)

    @pytest.mark.parametrize("a, b", [([1.0, 2.0], [1.0]), ([1.0], [2.0]), ([[1.0, 2.0]], [[1.0, 2.0]])])
    def test_invalid(self, a, b):
        with pytest.raises(ValueError):
            paired_t_test(a, b)


class TestStars:
    @pytest.mark.parametrize("p, stars", [(0.001, "**"), (0.0099, "**"), (0.01, "*"), (0.049, "*"), (0.05, ""), (0.9, "")])
    def test_thresholds(self, p, stars):
        assert significance_stars(p) == stars
