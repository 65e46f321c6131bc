import math

import numpy as np

import numline
from numline import metrics
from numline.notation import INVALID

from . import TestCase


class TestEAcc(TestCase):

    def test_e_acc(self):
        self.assertTrue(metrics.e_acc(600, 999))
        self.assertTrue(metrics.e_acc(100, 999.99))
        self.assertFalse(metrics.e_acc(600, 1000))
        self.assertTrue(metrics.e_acc(1e16, 10 ** 16))
        with self.assertRaises(numline.OutOfRange):
            metrics.e_acc(0.5, 1)


class TestLogMae(TestCase):

    def test_log_mae(self):
        self.assertAlmostEqual(metrics.log_mae([10, 100], [100, 100]), 0.5)
        self.assertEqual(metrics.log_mae([600], [600]), 0.0)
        self.assertAlmostEqual(metrics.log_mae([1], [10 ** 16]), 16.0)

    def test_errors(self):
        with self.assertRaises(numline.LengthMismatch):
            metrics.log_mae([1, 2], [1])
        with self.assertRaises(numline.EmptyInput):
            metrics.log_mae([], [])
        with self.assertRaises(numline.OutOfRange):
            metrics.log_mae([0.0], [1])
        with self.assertRaises(numline.OutOfRange):
            metrics.log_mae([1], [math.inf])


class TestHalfwidth(TestCase):

    def test_halfwidth(self):
        self.assertAlmostEqual(metrics.wilson_halfwidth(0.5, 100), 2.58 * 0.05)
        self.assertAlmostEqual(metrics.wilson_halfwidth(0.9, 400, z=1.96), 1.96 * 0.015)
        self.assertEqual(metrics.wilson_halfwidth(0.0, 10), 0.0)
        self.assertEqual(metrics.wilson_halfwidth(1.0, 10), 0.0)

    def test_invalid(self):
        for a, n, z in ((1.5, 10, 2.58), (-0.1, 10, 2.58), (0.5, 0, 2.58), (0.5, 10, 0)):
            with self.assertRaises(numline.InvalidInput):
                metrics.wilson_halfwidth(a, n, z)


class TestBootstrap(TestCase):

    def test_protocol(self):
        sizes = []

        def metric(preds, truths):
            sizes.append(len(set(preds)))
            return float(np.mean(preds))

        values = list(range(1, 11))
        metrics.bootstrap_variance(metric, values, values, k=10, frac=0.75, rng=0)
        self.assertEqual(sizes, [8] * 10)

    def test_deterministic(self):
        rng = np.random.default_rng(5)
        truths = (10 ** rng.uniform(0, 8, size=200)).tolist()
        preds = (10 ** rng.uniform(0, 8, size=200)).tolist()
        first = metrics.bootstrap_variance(metrics.log_mae, preds, truths, rng=7)
        second = metrics.bootstrap_variance(
            metrics.log_mae, preds, truths, rng=np.random.default_rng(7),
        )
        self.assertEqual(first, second)
        self.assertGreater(first, 0)

    def test_constant_metric(self):
        truths = [1, 5, 20, 300, 4000]
        preds = [t * 10 for t in truths]
        self.assertAlmostEqual(
            metrics.bootstrap_variance(metrics.log_mae, preds, truths, k=5), 0.0,
        )

    def test_invalid(self):
        with self.assertRaises(numline.InvalidInput):
            metrics.bootstrap_variance(metrics.log_mae, [1, 2], [1])
        with self.assertRaises(numline.InvalidInput):
            metrics.bootstrap_variance(metrics.log_mae, [], [])
        with self.assertRaises(numline.InvalidInput):
            metrics.bootstrap_variance(metrics.log_mae, [1], [1], k=0)
        with self.assertRaises(numline.InvalidInput):
            metrics.bootstrap_variance(metrics.log_mae, [1], [1], frac=0)
        with self.assertRaises(numline.InvalidInput):
            metrics.bootstrap_variance(metrics.log_mae, [1], [1], frac=1.5)


class TestEvaluate(TestCase):

    truths = [600, 1250, 31.25, 2011, 10 ** 16]

    def test_report(self):
        preds = [500, INVALID, 30, 3000, 1e16]
        report = metrics.evaluate(preds, self.truths, k=4)
        self.assertEqual(report.n, 5)
        self.assertEqual(report.e_acc, 1.0)
        self.assertEqual(report.e_acc_ci_halfwidth, 0.0)
        self.assertAlmostEqual(report.na_fraction, 0.2)
        self.assertEqual(report.status, 'ok')
        self.assertFalse(report.is_na)
        expected = np.mean(np.abs(np.log10([500 / 600, 30 / 31.25, 3000 / 2011, 1.0])))
        self.assertAlmostEqual(report.log_mae, expected)
        self.assertGreaterEqual(report.bootstrap_var_log_mae, 0)

    def test_e_acc(self):
        preds = [60, 1250, 31.25, 20110, 10 ** 16]
        report = metrics.evaluate(preds, self.truths)
        self.assertAlmostEqual(report.e_acc, 0.6)
        self.assertAlmostEqual(report.e_acc_ci_halfwidth, 2.58 * math.sqrt(0.24 / 5))

    def test_na(self):
        report = metrics.evaluate([INVALID, None, 30, INVALID, 1e16], self.truths)
        self.assertEqual(report.status, 'NA')
        self.assertTrue(report.is_na)
        self.assertAlmostEqual(report.na_fraction, 0.6)
        self.assertEqual(report.e_acc, 1.0)

    def test_half_invalid_is_na(self):
        report = metrics.evaluate([INVALID, 10], [5, 10])
        self.assertEqual(report.status, 'NA')

    def test_all_invalid(self):
        with self.assertLogs('numline.metrics', 'WARNING'):
            report = metrics.evaluate([INVALID] * 5, self.truths)
        self.assertEqual(report.status, 'NA')
        self.assertEqual(report.e_acc, 0.0)
        self.assertIsNone(report.log_mae)
        self.assertIsNone(report.bootstrap_var_log_mae)
        self.assertEqual(report.na_fraction, 1.0)

    def test_workers(self):
        rng = np.random.default_rng(11)
        truths = (10 ** rng.uniform(0, 15, size=1001)).tolist()
        preds = [
            INVALID if i % 7 == 0 else float(10 ** rng.uniform(0, 15)) for i in range(1001)
        ]
        one = metrics.evaluate(preds, truths, rng=3, workers=1)
        four = metrics.evaluate(preds, truths, rng=3, workers=4)
        self.assertEqual(
            (one.n, one.e_acc, one.na_fraction, one.status, one.bootstrap_var_log_mae),
            (four.n, four.e_acc, four.na_fraction, four.status, four.bootstrap_var_log_mae),
        )
        self.assertAlmostEqual(one.log_mae, four.log_mae, places=12)

    def test_errors(self):
        with self.assertRaises(numline.LengthMismatch):
            metrics.evaluate([1, 2], [1])
        with self.assertRaises(numline.EmptyInput):
            metrics.evaluate([], [])
        with self.assertRaises(numline.OutOfRange):
            metrics.evaluate([1e17], [1])
        with self.assertRaises(numline.OutOfRange):
            metrics.evaluate([INVALID], [0])

    def test_json(self):
        doc = metrics.evaluate([500], [600]).to_json()
        self.assertEqual(sorted(doc), sorted([
            'n', 'e_acc', 'e_acc_ci_halfwidth', 'log_mae', 'na_fraction',
            'bootstrap_var_log_mae', 'status',
        ]))


class TestTally(TestCase):

    def test_merge(self):
        preds, truths = [500, INVALID, 30, 3000], [600, 1250, 31.25, 2011]
        whole = metrics.tally(preds, truths)
        merged = metrics.tally(preds[:2], truths[:2]).merge(metrics.tally(preds[2:], truths[2:]))
        self.assertEqual(
            (whole.n, whole.n_invalid, whole.n_correct), (merged.n, merged.n_invalid, merged.n_correct),
        )
        self.assertAlmostEqual(whole.log_mae(), merged.log_mae(), places=12)
        self.assertEqual((whole.n, whole.n_invalid, whole.n_correct), (4, 1, 3))
        self.assertEqual(metrics.Tally().log_mae(), None)
