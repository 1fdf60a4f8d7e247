import math

import mpmath
import numpy as np
import pytest

from htollga import powerlaw as pl
from htollga.powerlaw import INFINITE, PowerLawParams
from htollga.verify import powerlaw_sample_gof

from conftest import make_rng


class TestNormalization:
    def test_single_atom_any_beta(self):
        for beta in (0.0, 1.0, 2.7, 10.0):
            assert pl.normalization(PowerLawParams(beta, 1)) == 1.0

    def test_beta1_u2(self):
        # 1 / (1 + 1/2)
        assert pl.normalization(PowerLawParams(1.0, 2)) == pytest.approx(2 / 3, abs=1e-12)

    def test_beta2_infinite_is_inverse_zeta2(self):
        c = pl.normalization(PowerLawParams(2.0, INFINITE))
        assert c == pytest.approx(6 / math.pi**2, abs=1e-12)

    def test_zeta_against_mpmath(self):
        for beta in (1.0001, 1.1, 1.5, 2.0, 2.5, 2.8, 3.0, 4.5, 8.0):
            mine = pl.zeta(beta)
            ref = float(mpmath.zeta(beta))
            assert mine == pytest.approx(ref, rel=1e-13)

    def test_finite_sum_against_brute_force(self):
        for beta in (0.0, 0.7, 1.0, 2.2):
            for u in (1, 3, 17, 1000):
                brute = sum(j**-beta for j in range(1, u + 1))
                assert pl.power_sum(beta, u) == pytest.approx(brute, rel=1e-13)

    def test_huge_finite_sum_against_tail_summed_series(self):
        # Euler-Maclaurin branch vs a long direct partial sum
        u = 2**21
        direct = float(np.sum(np.arange(1, u + 1, dtype=np.float64) ** -1.5))
        assert pl.power_sum(1.5, u) == pytest.approx(direct, rel=1e-12)


class TestPmfCdf:
    def test_pmf_examples(self):
        assert pl.pmf(PowerLawParams(2.0, 2), 1) == pytest.approx(0.8, abs=1e-12)
        assert pl.pmf(PowerLawParams(2.0, 2), 3) == 0.0
        assert pl.pmf(PowerLawParams(0.0, 4), 3) == pytest.approx(0.25, abs=1e-12)

    def test_pmf_sums_to_one_grid(self):
        for beta in (0.0, 0.5, 1.0, 1.9, 3.3):
            for u in (1, 2, 9, 257):
                params = PowerLawParams(beta, u)
                total = sum(pl.pmf(params, i) for i in range(1, u + 1))
                assert total == pytest.approx(1.0, abs=1e-12)

    def test_cdf_examples(self):
        assert pl.cdf(PowerLawParams(2.0, 2), 1) == pytest.approx(0.8, abs=1e-12)
        assert pl.cdf(PowerLawParams(2.0, 2), 2) == pytest.approx(1.0, abs=1e-12)
        assert pl.cdf(PowerLawParams(2.0, INFINITE), 1) == pytest.approx(
            6 / math.pi**2, abs=1e-12)

    def test_cdf_monotone_and_full(self):
        params = PowerLawParams(1.3, 37)
        prev = 0.0
        for i in range(1, 38):
            cur = pl.cdf(params, i)
            assert cur >= prev
            prev = cur
        assert prev == pytest.approx(1.0, abs=1e-12)
        assert pl.cdf(params, 1000) == pytest.approx(1.0, abs=1e-12)

    def test_infinite_cdf_approaches_one(self):
        params = PowerLawParams(1.5, INFINITE)
        values = [pl.cdf(params, i) for i in (1, 10, 100, 10**4, 10**8)]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert values[-1] < 1.0 + 1e-12
        assert values[-1] > 0.999

    def test_cdf_consistent_with_normalization(self):
        for beta, u in ((0.0, 12), (1.0, 100), (2.5, 999)):
            params = PowerLawParams(beta, u)
            c = pl.normalization(params)
            for i in (1, 3, u // 2, u):
                if i < 1:
                    continue
                direct = c * sum(float(j) ** -beta for j in range(1, i + 1))
                assert pl.cdf(params, i) == pytest.approx(direct, abs=1e-12)


class TestMoments:
    def test_single_atom(self):
        p = PowerLawParams(4.2, 1)
        assert pl.expectation(p) == 1.0
        assert pl.second_moment(p) == 1.0

    def test_beta2_u2(self):
        p = PowerLawParams(2.0, 2)
        assert pl.expectation(p) == pytest.approx(0.8 * 1 + 0.2 * 2, abs=1e-12)

    def test_infinite_moment_regimes(self):
        assert pl.expectation(PowerLawParams(2.0, INFINITE)) == INFINITE
        assert pl.expectation(PowerLawParams(1.5, INFINITE)) == INFINITE
        e = pl.expectation(PowerLawParams(3.0, INFINITE))
        assert e == pytest.approx(float(mpmath.zeta(2) / mpmath.zeta(3)), rel=1e-12)
        assert pl.second_moment(PowerLawParams(2.5, INFINITE)) == INFINITE
        assert pl.second_moment(PowerLawParams(3.0, INFINITE)) == INFINITE
        m2 = pl.second_moment(PowerLawParams(4.0, INFINITE))
        assert m2 == pytest.approx(float(mpmath.zeta(2) / mpmath.zeta(4)), rel=1e-12)

    def test_finite_brute_force(self):
        for beta in (0.0, 1.0, 2.5):
            for u in (2, 5, 40):
                params = PowerLawParams(beta, u)
                probs = [pl.pmf(params, i) for i in range(1, u + 1)]
                ref_e = sum(p * i for i, p in enumerate(probs, start=1))
                ref_m2 = sum(p * i * i for i, p in enumerate(probs, start=1))
                assert pl.expectation(params) == pytest.approx(ref_e, rel=1e-12)
                assert pl.second_moment(params) == pytest.approx(ref_m2, rel=1e-12)


class TestValidation:
    def test_unbounded_needs_beta_above_one(self):
        with pytest.raises(ValueError, match="beta > 1"):
            PowerLawParams(1.0, INFINITE)
        with pytest.raises(ValueError, match="beta > 1"):
            PowerLawParams(0.5, INFINITE)

    def test_flat_huge_bounding_rejected(self):
        with pytest.raises(ValueError, match="pathological"):
            PowerLawParams(1.0, 2**24 + 1)
        # boundary itself is allowed (construction only; no table built)
        PowerLawParams(1.0, 2**24)

    def test_negative_beta_rejected(self):
        with pytest.raises(ValueError):
            PowerLawParams(-0.1, 5)

    def test_bad_bounding_rejected(self):
        with pytest.raises(ValueError):
            PowerLawParams(2.0, 0)
        with pytest.raises(ValueError):
            PowerLawParams(2.0, 2.5)

    def test_integral_float_bounding_accepted(self):
        assert PowerLawParams(2.0, 16.0).upper == 16


class TestSampling:
    def test_single_atom_always_one(self):
        params = PowerLawParams(3.0, 1)
        r = make_rng(1)
        assert all(pl.sample(params, r) == 1 for _ in range(100))

    def test_beta2_u2_frequency(self):
        # binomial 3-sigma interval around pmf(1)=0.8 with 1e6 draws
        draws = pl.sample_many(PowerLawParams(2.0, 2), make_rng(2), 10**6)
        freq = float((draws == 1).mean())
        assert abs(freq - 0.8) <= 3 * math.sqrt(0.8 * 0.2 / 10**6)

    def test_infinite_beta3_mean(self):
        draws = pl.sample_many(PowerLawParams(3.0, INFINITE), make_rng(3), 10**6)
        expected = float(mpmath.zeta(2) / mpmath.zeta(3))
        assert abs(float(draws.mean()) - expected) <= 0.01

    @pytest.mark.parametrize("beta,upper", [
        (1.0, 10), (1.0, 1000), (2.0, 10), (2.0, 1000), (3.0, 10), (3.0, 1000),
        (1.5, INFINITE), (2.0, INFINITE), (3.0, INFINITE),
    ])
    def test_sampler_chi_square(self, beta, upper):
        params = PowerLawParams(beta, upper)
        p = powerlaw_sample_gof(params, make_rng(hash((beta, upper)) & 0xFFFF),
                                10**6)
        assert p > 0.001

    def test_rejection_path_on_huge_finite_bounding(self):
        params = PowerLawParams(2.5, 2**40)
        assert not params.uses_table
        draws = pl.sample_many(params, make_rng(5), 10**5)
        assert draws.min() >= 1
        # mean of pow(2.5, 2^40) is within a hair of the unbounded law's
        ref = float(mpmath.zeta(1.5) / mpmath.zeta(2.5))
        assert abs(float(draws.mean()) - ref) < 0.2

    def test_empirical_mean_within_4se(self):
        for beta, u in ((1.0, 10), (2.0, 1000), (3.0, 10)):
            params = PowerLawParams(beta, u)
            mean = pl.expectation(params)
            var = pl.second_moment(params) - mean**2
            draws = pl.sample_many(params, make_rng(int(beta * 100 + u)), 10**6)
            se = math.sqrt(var / draws.shape[0])
            assert abs(float(draws.mean()) - mean) <= 4 * max(se, 1e-9)
