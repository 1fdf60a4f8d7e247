import math

import mpmath
import pytest
from scipy import stats as scipy_stats

from htollga import stats

from conftest import make_rng


class TestSummarize:
    def test_single_value(self):
        s = stats.summarize([5])
        assert (s.count, s.mean, s.std, s.min, s.max) == (1, 5.0, 0.0, 5.0, 5.0)

    def test_closed_forms(self):
        s = stats.summarize([1, 2, 3])
        assert s.mean == 2.0 and s.std == pytest.approx(1.0, abs=1e-15)
        s = stats.summarize([-1, 1])
        assert s.mean == 0.0 and s.std == pytest.approx(math.sqrt(2), abs=1e-15)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            stats.summarize([])


class TestStudentT:
    def test_symmetric_case(self):
        r = stats.t_test_two_sample([1, 2, 3], [1, 2, 3])
        assert r.statistic == 0.0 and r.p_value == 1.0

    def test_textbook_value(self):
        r = stats.t_test_two_sample([1, 2, 3], [4, 5, 6])
        assert r.statistic == pytest.approx(-3 / math.sqrt(2 / 3), abs=1e-3)
        assert r.p_value == pytest.approx(0.0214, abs=5e-4)
        # independent high-precision oracle: regularized incomplete beta
        t, df = abs(r.statistic), 4
        ref = float(mpmath.betainc(df / 2, 0.5, 0, df / (df + t * t),
                                   regularized=True))
        assert r.p_value == pytest.approx(ref, rel=1e-9)

    def test_location_invariance(self):
        a, b = [1.5, 2.0, 9.0, 4.0], [2.5, 2.5, 3.0]
        r1 = stats.t_test_two_sample(a, b)
        r2 = stats.t_test_two_sample([v + 100 for v in a], [v + 100 for v in b])
        assert r1.statistic == pytest.approx(r2.statistic, abs=1e-9)
        assert r1.p_value == pytest.approx(r2.p_value, abs=1e-12)

    def test_positive_affine_invariance(self):
        a, b = [1.0, 2.0, 3.5], [0.5, 5.0, 6.0, 7.0]
        r1 = stats.t_test_two_sample(a, b)
        r2 = stats.t_test_two_sample([3 * v + 7 for v in a],
                                     [3 * v + 7 for v in b])
        assert r1.p_value == pytest.approx(r2.p_value, rel=1e-12)

    def test_degenerate_zero_variance(self):
        equal = stats.t_test_two_sample([2, 2], [2, 2, 2])
        assert equal.p_value == 1.0 and equal.degenerate
        unequal = stats.t_test_two_sample([2, 2], [3, 3])
        assert unequal.p_value == 0.0 and unequal.degenerate

    def test_against_scipy(self):
        rng = make_rng(1)
        for _ in range(100):
            a = rng.normal(size=int(rng.integers(2, 20)))
            b = rng.normal(loc=rng.normal(), size=int(rng.integers(2, 20)))
            mine = stats.t_test_two_sample(a, b)
            ref = scipy_stats.ttest_ind(a, b, equal_var=True)
            assert mine.statistic == pytest.approx(ref.statistic, rel=1e-10)
            assert mine.p_value == pytest.approx(ref.pvalue, rel=1e-9)


class TestWilcoxon:
    def test_exact_textbook_case(self):
        r = stats.wilcoxon_rank_sum([1, 2, 3], [4, 5, 6])
        assert r.method == stats.WILCOXON_EXACT
        assert r.p_value == pytest.approx(0.1, abs=1e-15)

    def test_identical_multisets(self):
        r = stats.wilcoxon_rank_sum([1, 2, 2, 7], [1, 2, 2, 7])
        assert r.p_value == 1.0

    def test_swap_symmetry(self):
        a, b = [1.0, 3.0, 9.0], [2.0, 4.0, 5.0, 11.0]
        r1 = stats.wilcoxon_rank_sum(a, b)
        r2 = stats.wilcoxon_rank_sum(b, a)
        assert r1.p_value == pytest.approx(r2.p_value, abs=1e-15)

    def test_monotone_invariance(self):
        a, b = [1.0, 3.0, 9.0, 2.5], [2.0, 4.0, 5.0]
        r1 = stats.wilcoxon_rank_sum(a, b)
        r2 = stats.wilcoxon_rank_sum([math.exp(v) for v in a],
                                     [math.exp(v) for v in b])
        assert r1.p_value == r2.p_value

    def test_exact_against_scipy(self):
        rng = make_rng(2)
        for _ in range(100):
            na, nb = int(rng.integers(2, 9)), int(rng.integers(2, 9))
            a = rng.normal(size=na).tolist()
            b = rng.normal(size=nb).tolist()
            mine = stats.wilcoxon_rank_sum(a, b)
            assert mine.method == stats.WILCOXON_EXACT
            ref = scipy_stats.mannwhitneyu(a, b, alternative="two-sided",
                                           method="exact")
            assert mine.p_value == pytest.approx(ref.pvalue, rel=1e-12)

    def test_normal_approx_against_scipy(self):
        rng = make_rng(3)
        for _ in range(60):
            a = rng.integers(0, 8, size=25).tolist()
            b = rng.integers(0, 9, size=30).tolist()
            mine = stats.wilcoxon_rank_sum(a, b)
            assert mine.method == stats.WILCOXON_NORMAL
            ref = scipy_stats.mannwhitneyu(a, b, alternative="two-sided",
                                           method="asymptotic")
            assert mine.p_value == pytest.approx(ref.pvalue, rel=1e-9)

    def test_exact_close_to_normal_10v10(self):
        # cross-validation of the package's own two code paths
        rng = make_rng(4)
        for _ in range(30):
            a = rng.normal(size=10).tolist()
            b = rng.normal(size=10).tolist()
            exact = stats.wilcoxon_rank_sum(a, b)
            assert exact.method == stats.WILCOXON_EXACT
            approx = stats.wilcoxon_rank_sum(a, b, method="normal")
            assert approx.method == stats.WILCOXON_NORMAL
            assert abs(exact.p_value - approx.p_value) <= 0.02

    def test_method_selection(self):
        a = list(range(13))
        b = list(range(13))
        r = stats.wilcoxon_rank_sum(a, b)
        assert r.method == stats.WILCOXON_NORMAL  # min count 13 > 12
        r = stats.wilcoxon_rank_sum(list(range(12)), list(range(100)))
        # C(112, 12) is far beyond the arrangement cap
        assert r.method == stats.WILCOXON_NORMAL


class TestNormalizeRuntime:
    def test_identity(self):
        assert stats.normalize_runtime(4096 * math.log(4096), 4096) == pytest.approx(1.0)

    def test_paper_scale_value(self):
        v = 2.435 * 4096 * math.log(4096)
        assert stats.normalize_runtime(v, 4096) == pytest.approx(2.435, abs=1e-9)

    def test_zero(self):
        assert stats.normalize_runtime(0, 100) == 0.0

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            stats.normalize_runtime(10, 1)


class TestNullCalibration:
    def test_false_positive_rates(self):
        rng = make_rng(5)
        n_pairs = 400
        hits_t = hits_w = 0
        for _ in range(n_pairs):
            a = rng.normal(size=30)
            b = rng.normal(size=30)
            if stats.t_test_two_sample(a, b).p_value < 0.05:
                hits_t += 1
            if stats.wilcoxon_rank_sum(a, b).p_value < 0.05:
                hits_w += 1
        assert abs(hits_t / n_pairs - 0.05) <= 0.03
        assert abs(hits_w / n_pairs - 0.05) <= 0.03
