import json

import numpy as np

from numline import config, harness
from numline.harness import experiment
from numline.metrics import EvalReport
from numline.numparse import decompose

from . import TestCase


def report(e_acc, halfwidth, log_mae, status='ok'):
    return EvalReport(
        n=100, e_acc=e_acc, e_acc_ci_halfwidth=halfwidth, log_mae=log_mae,
        na_fraction=0.6 if status == 'NA' else 0.0, bootstrap_var_log_mae=0.01,
        status=status,
    )


class TestHighlight(TestCase):

    def test_within(self):
        within, ranks = experiment.highlight({
            'dexp': report(0.80, 0.05, 0.30),
            'vocab_am': report(0.76, 0.05, 0.20),
            'const_mean': report(0.50, 0.02, 1.50),
            'digit_pad17': report(0.95, 0.01, 0.05, status='NA'),
        })
        self.assertEqual(within, {'dexp', 'vocab_am'})
        self.assertEqual(ranks, {'vocab_am': 1, 'dexp': 2})

    def test_all_na(self):
        self.assertEqual(
            experiment.highlight({'digit_pad17': report(0.9, 0.01, 0.1, status='NA')}),
            (set(), {}),
        )


class TestTable(TestCase):

    def test_table(self):
        result = experiment.ExperimentResult(results={
            'dexp': experiment.HeadResult(
                head='dexp', test=report(0.8, 0.05, 0.3), highlighted=True, log_mae_rank=1,
            ),
            'digit_pad17': experiment.HeadResult(
                head='digit_pad17', test=EvalReport(
                    n=100, e_acc=0.0, e_acc_ci_halfwidth=0.0, log_mae=None,
                    na_fraction=1.0, bootstrap_var_log_mae=None, status='NA',
                ),
            ),
        })
        lines = result.table().splitlines()
        self.assertEqual(lines[0].split('\t'), list(experiment.COLUMNS))
        self.assertEqual(
            lines[1].split('\t'),
            ['dexp', '0.8000', '0.0500', '0.3000', '0.0000', '0.0100', 'ok', '*', '1', 'NA', 'NA'],
        )
        self.assertEqual(lines[2].split('\t')[3], 'NA')
        self.assertEqual(lines[2].split('\t')[6:8], ['NA', ''])
        self.assertEqual(result['dexp'].e_acc, 0.8)
        doc = result.to_json()
        self.assertEqual([h['head'] for h in doc['heads']], ['dexp', 'digit_pad17'])
        self.assertNotIn('dexp_mantissas', doc)


class TestRunExperiment(TestCase):

    @classmethod
    def setUpClass(cls):
        cls.config = config.ExperimentConfig({
            'seed': 5,
            'heads': ['vocab_am', 'dexp', 'const_median'],
            'corpus': {'n_train': 2000, 'n_dev': 200, 'n_test': 300, 'n_transfer': 100},
            'train': {'max_epochs': 5, 'patience': 2, 'dim': 32},
            'bootstrap_k': 4,
        })
        cls.result = harness.run_experiment(cls.config)

    def test_heads(self):
        self.assertEqual(list(self.result.results), ['vocab_am', 'dexp', 'const_median'])
        for r in self.result.results.values():
            self.assertEqual(r.test.n, 300)
            self.assertEqual(r.transfer.n, 100)
        self.assertIsNone(self.result.results['const_median'].best_epoch)
        self.assertIsNotNone(self.result.results['dexp'].best_epoch)

    def test_learned_heads_beat_constant(self):
        baseline = self.result['const_median'].e_acc
        self.assertGreater(self.result['vocab_am'].e_acc, baseline + 0.2)
        self.assertGreater(self.result['dexp'].e_acc, baseline)
        self.assertLess(self.result['dexp'].log_mae, self.result['const_median'].log_mae)

    def test_highlights(self):
        ranked = [h for h, r in self.result.results.items() if r.log_mae_rank]
        self.assertEqual(len(ranked), 2)
        self.assertTrue(any(r.highlighted for r in self.result.results.values()))

    def test_report(self):
        doc = json.loads(json.dumps(self.result.to_json()))
        self.assertEqual(len(doc['heads']), 3)
        mantissas = doc['dexp_mantissas']
        self.assertEqual(len(mantissas['bin_edges']), 19)
        self.assertEqual(sum(mantissas['truth']), 300)
        self.assertEqual(len(self.result.table().splitlines()), 4)

    def test_deterministic(self):
        small = config.ExperimentConfig({
            'seed': 1,
            'heads': ['vocab_gm', 'const_mean'],
            'corpus': {'n_train': 200, 'n_dev': 50, 'n_test': 50, 'n_transfer': 0},
            'train': {'max_epochs': 2, 'patience': 1, 'dim': 8},
            'bootstrap_k': 3,
        })
        first = harness.run_experiment(small).to_json()
        second = harness.run_experiment(small).to_json()
        self.assertEqual(first, second)
        self.assertIsNone(first['heads'][0]['transfer'])

    def test_pregenerated_corpus(self):
        corpus = harness.gen_corpus(config.CorpusSpec({
            'n_train': 100, 'n_dev': 20, 'n_test': 30, 'n_transfer': 0,
        }))
        result = harness.run_experiment({'heads': ['const_mode']}, corpus=corpus)
        self.assertEqual(result['const_mode'].n, 30)
        self.assertIsNone(result.mantissas)


class TestOrdering(TestCase):
    """
    Default seeded corpus (20k train, 2k test) with the token, vocabulary
    and mixture heads.
    """

    heads = ['subword_pad8', 'vocab_am', 'dexp', 'const_mean', 'const_median', 'const_mode']

    @classmethod
    def setUpClass(cls):
        cls.config = config.ExperimentConfig({'heads': cls.heads, 'bootstrap_k': 2})
        cls.corpus = harness.gen_corpus(
            cls.config.corpus, np.random.default_rng(cls.config.seed),
        )
        cls.result = harness.run_experiment(cls.config, corpus=cls.corpus)

    def test_corpus(self):
        self.assertEqual(len(self.corpus.train), 20000)
        self.assertEqual(len(self.corpus.test), 2000)
        exponents = {decompose(a).exponent for a in self.corpus.answers('test')}
        self.assertGreaterEqual(len(exponents), 6)

    def test_vocabulary_beats_subwords(self):
        self.assertGreaterEqual(
            self.result['vocab_am'].e_acc, self.result['subword_pad8'].e_acc + 0.05,
        )

    def test_vocabulary_matches_mixture(self):
        am, mixture = self.result['vocab_am'], self.result['dexp']
        self.assertLessEqual(
            abs(am.e_acc - mixture.e_acc), am.e_acc_ci_halfwidth + mixture.e_acc_ci_halfwidth,
        )

    def test_constant_oracle(self):
        truths = [decompose(a).exponent for a in self.corpus.answers('test')]
        for head in ('const_mean', 'const_median', 'const_mode'):
            model = harness.train(head, self.config.train, self.corpus)
            exponent = decompose(model.head.value).exponent
            hits = 0
            for truth in truths:
                if truth == exponent:
                    hits += 1
            self.assertEqual(self.result[head].e_acc, hits / len(truths), head)


class TestSingleDecade(TestCase):

    def test_vocab_am(self):
        templates = [
            {
                'name': 'year',
                'kind': 'year',
                'texts': ['The firm was founded in [MASK].'],
            },
        ]
        for i, text in enumerate((
            'The firm employs [MASK] people.',
            'The hall seats [MASK] guests.',
            'The ship carries [MASK] containers.',
            'The library holds [MASK] maps.',
            'The farm keeps [MASK] sheep.',
        )):
            templates.append({
                'name': 'decade_{0}'.format(i), 'texts': [text],
                'log10_mean': 3.5, 'log10_sd': 0.05,
            })
        result = harness.run_experiment({
            'seed': 2,
            'heads': ['vocab_am'],
            'corpus': {
                'n_train': 2000, 'n_dev': 200, 'n_test': 300, 'n_transfer': 0,
                'templates': templates,
            },
            'train': {'max_epochs': 5, 'patience': 2, 'dim': 16},
            'bootstrap_k': 2,
        })
        self.assertEqual(result['vocab_am'].e_acc, 1.0)
        self.assertEqual(result['vocab_am'].n, 300)
