"""
Trains every configured head on one seeded corpus and compares them on the
test and transfer splits.

Heads whose E-Acc lies within the combined confidence halfwidths of the
best head are highlighted; the best and second best LogMAE are ranked.
"""
import dataclasses
import logging
import typing

import numpy as np

from .. import analysis, metrics
from ..config import ExperimentConfig, TrainConfig
from . import corpus as corpora
from .training import train

__all__ = [
    'HeadResult',
    'ExperimentResult',
    'run_experiment',
    'highlight',
]

logger = logging.getLogger(__name__)

COLUMNS = (
    'head', 'e_acc', 'e_acc_ci', 'log_mae', 'na_fraction', 'bootstrap_var_log_mae',
    'status', 'highlight', 'log_mae_rank', 'transfer_e_acc', 'transfer_log_mae',
)


@dataclasses.dataclass
class HeadResult:

    head: str
    test: metrics.EvalReport
    transfer: typing.Optional[metrics.EvalReport] = None
    best_epoch: typing.Optional[int] = None
    highlighted: bool = False
    log_mae_rank: typing.Optional[int] = None

    def to_json(self):
        return {
            'head': self.head,
            'test': self.test.to_json(),
            'transfer': self.transfer.to_json() if self.transfer else None,
            'best_epoch': self.best_epoch,
            'highlighted': self.highlighted,
            'log_mae_rank': self.log_mae_rank,
        }


@dataclasses.dataclass
class ExperimentResult:

    results: typing.Dict[str, HeadResult]
    mantissas: typing.Optional[analysis.MantissaComparison] = None

    def __getitem__(self, head):
        return self.results[head].test

    def to_json(self):
        doc = {'heads': [r.to_json() for r in self.results.values()]}
        if self.mantissas is not None:
            doc['dexp_mantissas'] = {
                'bin_edges': self.mantissas.truth.bin_edges.tolist(),
                'predicted': self.mantissas.predicted.counts.tolist(),
                'truth': self.mantissas.truth.counts.tolist(),
                'tv_distance': self.mantissas.tv_distance,
            }
        return doc

    def table(self):
        """
        Comparison table as TSV, one row per head.
        """

        def fmt(value):
            if value is None:
                return 'NA'
            if isinstance(value, float):
                return '{0:.4f}'.format(value)
            return str(value)

        lines = ['\t'.join(COLUMNS)]
        for r in self.results.values():
            t = r.test
            lines.append('\t'.join(fmt(v) for v in (
                r.head, t.e_acc, t.e_acc_ci_halfwidth, t.log_mae, t.na_fraction,
                t.bootstrap_var_log_mae, t.status, '*' if r.highlighted else '',
                r.log_mae_rank or '',
                r.transfer.e_acc if r.transfer else None,
                r.transfer.log_mae if r.transfer else None,
            )))
        return '\n'.join(lines) + '\n'


def highlight(reports):
    """
    :param reports: head name to `EvalReport`.
    :return: (heads within the CI of the best E-Acc, heads ranked 1 and 2 on
        LogMAE). NA reports take part in neither.
    """
    ok = {h: r for h, r in reports.items() if not r.is_na}
    if not ok:
        return set(), {}
    best = max(ok, key=lambda h: ok[h].e_acc)
    top = ok[best]
    within = {
        h for h, r in ok.items()
        if top.e_acc - r.e_acc <= top.e_acc_ci_halfwidth + r.e_acc_ci_halfwidth
    }
    ranked = sorted((r.log_mae, h) for h, r in ok.items() if r.log_mae is not None)
    return within, {h: i + 1 for i, (_, h) in enumerate(ranked[:2])}


def _evaluate(predictions, examples, config, seed):
    return metrics.evaluate(
        predictions, [e.answer for e in examples],
        z=config.z, k=config.bootstrap_k, frac=config.bootstrap_frac,
        rng=np.random.default_rng(seed), workers=config.workers,
    )


def run_experiment(config, corpus=None):
    """
    :param config: `ExperimentConfig` (or anything it maps from).
    :param corpus: pre-generated `Corpus`, generated from `config.corpus`
        with `config.seed` when omitted.
    """
    if not isinstance(config, ExperimentConfig):
        config = ExperimentConfig(config)
    if corpus is None:
        corpus = corpora.gen_corpus(config.corpus, np.random.default_rng(config.seed))
    train_config = TrainConfig(dict(config.train, seed=config.seed))

    results, dexp_predictions = {}, None
    for i, head in enumerate(config.heads):
        logger.info('training head=%s', head)
        model = train(head, train_config, corpus)
        predictions = model.predict(corpus.test)
        test = _evaluate(predictions, corpus.test, config, [config.seed, i, 0])
        transfer = None
        if corpus.transfer:
            transfer = _evaluate(
                model.predict(corpus.transfer), corpus.transfer, config, [config.seed, i, 1],
            )
        if head == 'dexp':
            dexp_predictions = predictions
        results[head] = HeadResult(head=head, test=test, transfer=transfer, best_epoch=model.best_epoch)
        logger.info(
            'head=%s e_acc=%.4f log_mae=%s na_fraction=%.4f',
            head, test.e_acc, test.log_mae, test.na_fraction,
        )

    within, ranks = highlight({h: r.test for h, r in results.items()})
    for head, result in results.items():
        result.highlighted = head in within
        result.log_mae_rank = ranks.get(head)

    mantissas = None
    if dexp_predictions is not None:
        mantissas = analysis.compare_mantissas(
            dexp_predictions, corpus.answers('test'), config.mantissa_bins,
        )
    return ExperimentResult(results=results, mantissas=mantissas)
