import math

import numpy as np
import pytest
from scipy import stats

import oracles
from gofevid.dist import (
    ChiSqParams,
    RandomStream,
    chisq_cdf,
    chisq_mean_var,
    chisq_quantile,
    normal_cdf,
    normal_quantile,
    sample_chisq,
    sample_family,
)


class TestNormal:
    def test_cdf_at_zero(self):
        assert normal_cdf(0.0) == 0.5

    def test_cdf_weak_threshold(self):
        assert abs(normal_cdf(1.645) - 0.95) < 5e-4

    @pytest.mark.parametrize("x", [0.3, 1.7, 4.1])
    def test_cdf_reflection(self, x):
        assert abs(normal_cdf(-x) - (1.0 - normal_cdf(x))) < 1e-14

    def test_cdf_matches_erfc_oracle(self):
        for x in np.linspace(-8, 8, 81):
            assert abs(normal_cdf(float(x)) - oracles.normal_cdf(float(x))) < 1e-12

    def test_cdf_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            normal_cdf(float("nan"))

    def test_quantile_median(self):
        assert normal_quantile(0.5) == 0.0

    def test_quantile_095(self):
        assert abs(normal_quantile(0.95) - 1.6449) < 1e-4

    @pytest.mark.parametrize("p", [1e-6, 0.2, 0.999])
    def test_quantile_roundtrip(self, p):
        assert abs(normal_cdf(normal_quantile(p)) - p) < 1e-10

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.2, 1.5])
    def test_quantile_domain(self, p):
        with pytest.raises(ValueError):
            normal_quantile(p)


class TestChiSqParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            ChiSqParams(0.0, 1.0)
        with pytest.raises(ValueError):
            ChiSqParams(5.0, -1.0)

    @pytest.mark.parametrize("nu,lam,want", [(5, 0, (5, 10)), (5, 8, (13, 42)), (1, 35, (36, 142))])
    def test_mean_var(self, nu, lam, want):
        assert chisq_mean_var(ChiSqParams(nu, lam)) == want


class TestChiSqCdf:
    def test_central_matches_gamma_oracle(self):
        for nu in (1.0, 2.5, 5.0, 14.0):
            for x in np.linspace(0.1, 4 * nu + 20, 40):
                got = chisq_cdf(float(x), ChiSqParams(nu, 0.0))
                want = oracles.central_chisq_cdf(float(x), nu)
                assert abs(got - want) < 1e-10

    def test_central_095_quantile_value(self):
        assert abs(chisq_cdf(11.0705, ChiSqParams(5, 0)) - 0.95) < 1e-4

    def test_monotone_in_lambda(self):
        vals = [chisq_cdf(10.0, ChiSqParams(5, lam)) for lam in (0, 4, 12)]
        assert vals[0] > vals[1] > vals[2]

    def test_negative_x_is_zero(self):
        assert chisq_cdf(-3.0, ChiSqParams(5, 2)) == 0.0

    def test_matches_scipy_noncentral(self):
        for nu, lam in [(1, 0.5), (5, 8), (5, 12), (14, 20.117), (3, 200.0)]:
            xs = np.linspace(0.01, nu + lam + 8 * math.sqrt(2 * nu + 4 * lam), 50)
            got = chisq_cdf(xs, ChiSqParams(nu, lam))
            want = stats.ncx2.cdf(xs, nu, lam)
            assert np.max(np.abs(got - want)) < 1e-9

    def test_cdf_shape_properties(self):
        xs = np.linspace(0.0, 120.0, 500)
        vals = chisq_cdf(xs, ChiSqParams(5, 12))
        assert np.all(np.diff(vals) >= -1e-14)
        assert vals[0] == 0.0
        assert vals[-1] > 1 - 1e-8
        assert np.all((vals >= 0) & (vals <= 1))


class TestChiSqQuantile:
    def test_central_095(self):
        got = chisq_quantile(0.95, ChiSqParams(5, 0))
        assert abs(got - 11.0705) < 1e-3
        assert abs(got - oracles.central_chisq_quantile(0.95, 5)) < 1e-8

    @pytest.mark.parametrize("theta", [(1, 0), (5, 12), (14, 20.117)])
    @pytest.mark.parametrize("p", [0.05, 0.5, 0.95])
    def test_roundtrip(self, p, theta):
        params = ChiSqParams(*theta)
        assert abs(chisq_cdf(chisq_quantile(p, params), params) - p) < 1e-10

    def test_roundtrip_grid(self):
        params = ChiSqParams(5, 8)
        for p in np.linspace(0.005, 0.995, 125):
            q = chisq_quantile(float(p), params)
            assert abs(chisq_cdf(q, params) - p) < 1e-10

    @pytest.mark.parametrize("nu", [1, 5, 20])
    def test_central_median_below_mean(self, nu):
        assert chisq_quantile(0.5, ChiSqParams(nu, 0)) < nu

    def test_domain(self):
        with pytest.raises(ValueError):
            chisq_quantile(0.0, ChiSqParams(5, 0))
        with pytest.raises(ValueError):
            chisq_quantile(1.0, ChiSqParams(5, 0))

    def test_large_noncentrality(self):
        # boundary noncentralities in the thousands occur for big samples
        params = ChiSqParams(10, 8533.33)
        q = chisq_quantile(0.05, params)
        assert abs(chisq_cdf(q, params) - 0.05) < 1e-10
        assert abs(chisq_cdf(q, params) - stats.ncx2.cdf(q, 10, 8533.33)) < 1e-8


class TestRandomStream:
    def test_identical_keys_identical_sequences(self):
        a = RandomStream(123, 7).gen.standard_normal(16)
        b = RandomStream(123, 7).gen.standard_normal(16)
        assert np.array_equal(a, b)

    def test_sequences_unaffected_by_other_streams(self):
        a = RandomStream(9, 1)
        want = RandomStream(9, 1).gen.standard_normal(8)
        # interleave draws from unrelated streams
        for sid in range(2, 30):
            RandomStream(9, sid).gen.standard_normal(5)
        assert np.array_equal(a.gen.standard_normal(8), want)

    def test_substream_deterministic_and_distinct(self):
        s = RandomStream(4, 2)
        c1 = s.substream(5)
        c2 = RandomStream(4, 2).substream(5)
        assert (c1.seed, c1.stream_id) == (c2.seed, c2.stream_id)
        assert c1.stream_id != s.stream_id
        assert s.substream(6).stream_id != c1.stream_id

    def test_validation(self):
        with pytest.raises(ValueError):
            RandomStream(-1)
        with pytest.raises(ValueError):
            RandomStream(0, 2**64)


class TestSampleChiSq:
    def test_central_path_skips_poisson(self):
        # identical key: the lam=0 path must consume exactly the gamma draws
        draws = sample_chisq(RandomStream(11, 3), ChiSqParams(5, 0), size=10)
        manual = 2.0 * RandomStream(11, 3).gen.standard_gamma(2.5, size=10)
        assert np.array_equal(draws, manual)

    def test_mean_matches_theory(self):
        draws = sample_chisq(RandomStream(0, 1), ChiSqParams(5, 8), size=100_000)
        se = math.sqrt(42.0 / 100_000)
        assert abs(draws.mean() - 13.0) < 5 * se
        var_se = math.sqrt((draws**4).mean()) / math.sqrt(100_000)  # loose bound
        assert abs(draws.var(ddof=1) - 42.0) < 5 * var_se

    def test_bitwise_reproducible(self):
        a = sample_chisq(RandomStream(5, 9), ChiSqParams(3, 4), size=50)
        b = sample_chisq(RandomStream(5, 9), ChiSqParams(3, 4), size=50)
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("nu,lam", [(1, 0), (5, 8), (5, 12), (14, 20)])
    def test_ks_against_cdf(self, nu, lam):
        draws = np.sort(sample_chisq(RandomStream(42, nu * 100 + int(lam)),
                                     ChiSqParams(nu, lam), size=100_000))
        cdf = chisq_cdf(draws, ChiSqParams(nu, lam))
        n = len(draws)
        ecdf_hi = np.arange(1, n + 1) / n
        ecdf_lo = np.arange(0, n) / n
        ks = max(np.max(np.abs(ecdf_hi - cdf)), np.max(np.abs(cdf - ecdf_lo)))
        assert ks < 0.01


class TestSampleFamily:
    def test_neg_binomial_alpha_zero_is_poisson_path(self):
        a = sample_family(RandomStream(3, 1), "neg_binomial", size=20, mu=20.0, alpha=0.0)
        b = sample_family(RandomStream(3, 1), "poisson", size=20, mu=20.0)
        assert np.array_equal(a, b)

    def test_neg_binomial_moments(self):
        draws = sample_family(RandomStream(8, 2), "neg_binomial", size=100_000,
                              mu=10.0, alpha=0.01)
        assert abs(draws.mean() - 10.0) < 5 * math.sqrt(11.0 / 100_000)
        assert abs(draws.var(ddof=1) - 11.0) < 0.35

    def test_multinomial_conserves_total(self):
        counts = sample_family(RandomStream(1, 1), "multinomial", n=100,
                               probs=np.full(6, 1 / 6))
        assert counts.sum() == 100

    def test_normal_and_logistic_and_t(self):
        g = RandomStream(2, 2)
        x = sample_family(g, "normal", size=50_000, mu=3.0, sigma=2.0)
        assert abs(x.mean() - 3.0) < 0.05
        y = sample_family(RandomStream(2, 3), "logistic", size=50_000, loc=-1.0, scale=0.5)
        assert abs(y.mean() + 1.0) < 0.03
        z = sample_family(RandomStream(2, 4), "student_t", size=50_000, df=5.0)
        assert abs(z.mean()) < 0.05

    def test_invalid_parameters(self):
        s = RandomStream(0, 0)
        with pytest.raises(ValueError):
            sample_family(s, "normal", sigma=0.0)
        with pytest.raises(ValueError):
            sample_family(s, "neg_binomial", mu=-1.0, alpha=0.1)
        with pytest.raises(ValueError):
            sample_family(s, "multinomial", n=10, probs=[0.5, 0.6])
        with pytest.raises(ValueError):
            sample_family(s, "no_such_family")
