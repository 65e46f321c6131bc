import math

import numpy as np
from scipy import integrate, stats

import numline
from numline import dexp

from . import TestCase

MIDDLES = (np.arange(17) + 0.5) * math.log(10)


def params(logits=None, mu=None, log_sigma=0.0):
    return dexp.DExpParams(
        exponent_logits=np.zeros(17) if logits is None else logits,
        mu_per_exponent=MIDDLES if mu is None else mu,
        log_sigma=log_sigma,
    )


class TestTruncLogNormal(TestCase):

    d = dexp.TruncLogNormal(mu=math.log(300), sigma=0.5, lower=100.0, upper=1000.0)

    def test_validation(self):
        with self.assertRaises(dexp.InvalidParam):
            dexp.TruncLogNormal(0.0, 0.0, 1.0, 10.0)
        with self.assertRaises(dexp.InvalidParam):
            dexp.TruncLogNormal(0.0, 1.0, 10.0, 10.0)
        with self.assertRaises(dexp.InvalidParam):
            dexp.TruncLogNormal(math.nan, 1.0, 1.0, 10.0)
        with self.assertRaises(dexp.InvalidParam):
            dexp.TruncLogNormal(0.0, 1.0, 0.0, 10.0)

    def test_normalized(self):
        total, _ = integrate.quad(lambda v: math.exp(dexp.tln_logpdf(self.d, v)), 100, 1000)
        self.assertAlmostEqual(total, 1.0, places=6)

    def test_support(self):
        self.assertEqual(dexp.tln_logpdf(self.d, 99.9), -math.inf)
        self.assertEqual(dexp.tln_logpdf(self.d, 1000), -math.inf)
        self.assertTrue(math.isfinite(dexp.tln_logpdf(self.d, 100)))

    def test_cdf(self):
        self.assertEqual(dexp.tln_cdf(self.d, 100), 0.0)
        self.assertEqual(dexp.tln_cdf(self.d, 1000), 1.0)
        for u in (0.01, 0.1, 0.5, 0.9, 0.99):
            self.assertAlmostEqual(dexp.tln_cdf(self.d, dexp.tln_ppf(self.d, u)), u, places=9)
        self.assertAlmostEqual(dexp.tln_cdf(self.d, dexp.tln_median(self.d)), 0.5, places=9)

    def test_mean(self):
        expected, _ = integrate.quad(
            lambda v: v * math.exp(dexp.tln_logpdf(self.d, v)), 100, 1000,
        )
        self.assertAlmostEqual(dexp.tln_mean(self.d) / expected, 1.0, places=6)

    def test_far_tail(self):
        for mu in (math.log(1e-5), math.log(1e9)):
            d = dexp.TruncLogNormal(mu=mu, sigma=0.5, lower=100.0, upper=1000.0)
            self.assertTrue(math.isfinite(d.log_z))
            median = dexp.tln_median(d)
            self.assertTrue(100 <= median < 1000, median)
            self.assertTrue(math.isfinite(dexp.tln_logpdf(d, median)))

    def test_tight_scale(self):
        below = dexp.TruncLogNormal(
            mu=math.log(100) - 0.05, sigma=1e-3, lower=100.0, upper=1000.0,
        )
        above = dexp.TruncLogNormal(
            mu=math.log(1000) + 0.05, sigma=1e-3, lower=100.0, upper=1000.0,
        )
        median = dexp.tln_median(below)
        self.assertTrue(100 <= median < 100.1, median)
        self.assertAlmostEqual(dexp.tln_cdf(below, median), 0.5, places=6)
        median = dexp.tln_median(above)
        self.assertTrue(999 < median < 1000, median)
        self.assertAlmostEqual(dexp.tln_cdf(above, median), 0.5, places=6)
        for u in (0.1, 0.9):
            self.assertAlmostEqual(dexp.tln_cdf(below, dexp.tln_ppf(below, u)), u, places=6)
            self.assertAlmostEqual(dexp.tln_cdf(above, dexp.tln_ppf(above, u)), u, places=6)

    def test_sample(self):
        rng = np.random.default_rng(0)
        samples = dexp.tln_sample(self.d, rng, size=2000)
        self.assertTrue(np.all((samples >= 100) & (samples < 1000)))
        cdf = np.vectorize(lambda v: dexp.tln_cdf(self.d, v))
        self.assertGreater(stats.kstest(samples, cdf).pvalue, 1e-4)
        self.assertIsInstance(dexp.tln_sample(self.d, rng), float)

    def test_sample_large(self):
        rng = np.random.default_rng(4)
        samples = dexp.tln_sample(self.d, rng, size=100000)
        reference = stats.truncnorm(
            self.d.a, self.d.b, loc=self.d.mu, scale=self.d.sigma,
        )
        self.assertLess(stats.kstest(np.log(samples), reference.cdf).statistic, 0.01)


class TestDExpParams(TestCase):

    def test_validation(self):
        with self.assertRaises(dexp.InvalidParam):
            params(logits=np.zeros(16))
        with self.assertRaises(dexp.InvalidParam):
            params(mu=np.full(17, math.inf))
        with self.assertRaises(dexp.InvalidParam):
            params(log_sigma=math.nan)

    def test_read_only(self):
        p = params()
        with self.assertRaises(ValueError):
            p.exponent_logits[0] = 1.0

    def test_json(self):
        p = params(logits=np.arange(17.0), log_sigma=-0.5)
        q = dexp.DExpParams.from_json(p.to_json())
        np.testing.assert_array_equal(q.exponent_logits, p.exponent_logits)
        np.testing.assert_array_equal(q.mu_per_exponent, p.mu_per_exponent)
        self.assertEqual(q.log_sigma, -0.5)

    def test_component(self):
        p = params(log_sigma=math.log(0.5))
        c = p.component(2)
        self.assertEqual((c.lower, c.upper), (100.0, 1000.0))
        self.assertAlmostEqual(c.sigma, 0.5)
        self.assertAlmostEqual(float(np.sum(p.probabilities)), 1.0)


class TestNll(TestCase):

    def test_uniform(self):
        p = params()
        for v in (1, 600, 31.25, 10 ** 16):
            k = numline.numparse.decompose(v).exponent
            expected = math.log(17) - dexp.tln_logpdf(p.component(k), v)
            self.assertAlmostEqual(dexp.dexp_nll(p, v), expected, places=9)

    def test_out_of_range(self):
        for v in (0.5, 2e16, math.nan):
            with self.assertRaises(numline.OutOfRange):
                dexp.dexp_nll(params(), v)

    def test_batch_shapes(self):
        with self.assertRaises(dexp.InvalidParam):
            dexp.mixture_nll(np.zeros((2, 17)), np.zeros((2, 17)), 0.0, [1.0, 2.0, 3.0])
        nll = dexp.mixture_nll(
            np.zeros((3, 17)), np.tile(MIDDLES, (3, 1)), 0.0, [5.0, 600.0, 1e16],
        )
        self.assertEqual(nll.shape, (3,))
        self.assertTrue(np.all(np.isfinite(nll)))

    def test_grad(self):
        rng = np.random.default_rng(1)
        eps = 1e-6
        values = [3.5, 600, 1234.5, 9.9e12, 10 ** 16]
        values.extend(10 ** rng.uniform(0, 16, size=95))
        for v in values:
            p = params(
                logits=rng.normal(size=17),
                mu=MIDDLES + rng.normal(scale=0.3, size=17),
                log_sigma=math.log(0.7),
            )
            grad = dexp.dexp_grad(p, v)
            self.assertAlmostEqual(float(np.sum(grad.exponent_logits)), 0.0, places=12)

            for name in ('exponent_logits', 'mu_per_exponent'):
                base = getattr(p, name)
                numeric = np.zeros(17)
                for i in range(17):
                    step = np.zeros(17)
                    step[i] = eps
                    up = dexp.DExpParams(**dict(self.fields(p), **{name: base + step}))
                    down = dexp.DExpParams(**dict(self.fields(p), **{name: base - step}))
                    numeric[i] = (dexp.dexp_nll(up, v) - dexp.dexp_nll(down, v)) / (2 * eps)
                np.testing.assert_allclose(getattr(grad, name), numeric, rtol=1e-4, atol=1e-6)

            up = dexp.DExpParams(**dict(self.fields(p), log_sigma=p.log_sigma + eps))
            down = dexp.DExpParams(**dict(self.fields(p), log_sigma=p.log_sigma - eps))
            numeric = (dexp.dexp_nll(up, v) - dexp.dexp_nll(down, v)) / (2 * eps)
            self.assertAlmostEqual(grad.log_sigma, numeric, delta=1e-4 * max(1.0, abs(numeric)))

    @staticmethod
    def fields(p):
        return {
            'exponent_logits': p.exponent_logits,
            'mu_per_exponent': p.mu_per_exponent,
            'log_sigma': p.log_sigma,
        }


class TestPredict(TestCase):

    def test_median_of_best_component(self):
        logits = np.zeros(17)
        logits[2] = 5.0
        mu = MIDDLES.copy()
        mu[2] = math.log(300)
        p = params(logits=logits, mu=mu, log_sigma=math.log(0.01))
        self.assertAlmostEqual(dexp.dexp_predict(p) / 300, 1.0, places=6)
        self.assertAlmostEqual(
            dexp.dexp_predict(p), dexp.tln_median(p.component(2)), places=6,
        )

    def test_tight_scale(self):
        logits = np.zeros(17)
        logits[2] = 5.0
        mu = MIDDLES.copy()
        mu[2] = math.log(100) - 0.05
        prediction = dexp.dexp_predict(params(logits=logits, mu=mu, log_sigma=math.log(1e-3)))
        self.assertTrue(100 <= prediction < 101, prediction)

    def test_ties(self):
        self.assertTrue(1 <= dexp.dexp_predict(params()) < 10)

    def test_cap(self):
        logits = np.zeros(17)
        logits[16] = 5.0
        mu = MIDDLES.copy()
        mu[16] = math.log(5e16)
        self.assertEqual(dexp.dexp_predict(params(logits=logits, mu=mu)), 1e16)

    def test_batch(self):
        logits = np.zeros((2, 17))
        logits[0, 4] = logits[1, 9] = 3.0
        predictions = dexp.mixture_predict(logits, np.tile(MIDDLES, (2, 1)), 0.0)
        self.assertTrue(1e4 <= predictions[0] < 1e5)
        self.assertTrue(1e9 <= predictions[1] < 1e10)


class TestSample(TestCase):

    def test_sample(self):
        logits = np.zeros(17)
        logits[3] = 50.0
        rng = np.random.default_rng(2)
        samples = dexp.dexp_sample(params(logits=logits), rng, size=200)
        self.assertEqual(samples.shape, (200,))
        self.assertTrue(np.all((samples >= 1e3) & (samples < 1e4)))
        self.assertIsInstance(dexp.dexp_sample(params(logits=logits), rng), float)

    def test_mixture(self):
        rng = np.random.default_rng(3)
        samples = dexp.dexp_sample(params(), rng, size=3400)
        exponents = np.floor(np.log10(samples)).astype(int)
        counts = np.bincount(np.minimum(exponents, 16), minlength=17)
        self.assertGreater(stats.chisquare(counts).pvalue, 1e-4)


class TestClamp(TestCase):

    def test_clamp(self):
        self.assertAlmostEqual(float(dexp.clamp_log_sigma(100.0)), math.log(10))
        self.assertAlmostEqual(float(dexp.clamp_log_sigma(-100.0)), math.log(1e-3))
        self.assertEqual(float(dexp.clamp_log_sigma(0.25)), 0.25)
