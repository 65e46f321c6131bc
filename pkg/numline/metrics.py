"""
Order-of-magnitude metrics: exponent accuracy (E-Acc), LogMAE in log10
units, the normal-approximation confidence halfwidth and the bootstrap
variance protocol (10 subsamples of 75% drawn without replacement).

Unparseable predictions (`numline.notation.INVALID` or None) are excluded
from both metrics and counted in `EvalReport.na_fraction`; a report with at
least half of them is `NA`.
"""
import concurrent.futures
import dataclasses
import functools
import logging
import math
import typing

import numpy as np

from . import MIN_VALUE, MAX_VALUE, EmptyInput, InvalidInput, LengthMismatch, OutOfRange
from .notation import INVALID
from .numparse import decompose

__all__ = [
    'EvalReport',
    'Tally',
    'e_acc',
    'log_mae',
    'wilson_halfwidth',
    'bootstrap_variance',
    'tally',
    'evaluate',
    'Z_99',
]

logger = logging.getLogger(__name__)

#: Two-sided 99% normal quantile.
Z_99 = 2.58

NA_THRESHOLD = 0.5


def _log10s(values):
    values = np.asarray(values, dtype=float)
    bad = ~np.isfinite(values) | (values < MIN_VALUE) | (values > MAX_VALUE)
    if np.any(bad):
        raise OutOfRange(values[np.argmax(bad)].item())
    return np.log10(values)


def _paired(preds, truths):
    preds, truths = list(preds), list(truths)
    if len(preds) != len(truths):
        raise LengthMismatch(len(preds), len(truths))
    if not preds:
        raise EmptyInput('predictions')
    return preds, truths


def _is_invalid(pred):
    return pred is None or pred is INVALID


def e_acc(pred, truth):
    """
    Whether `pred` and `truth` share an exponent.
    """
    return decompose(pred).exponent == decompose(truth).exponent


def log_mae(preds, truths):
    """
    Mean of |log10(pred) - log10(truth)|.
    """
    preds, truths = _paired(preds, truths)
    errors = np.abs(_log10s(preds) - _log10s(truths))
    return math.fsum(errors) / errors.size


def wilson_halfwidth(a, n, z=Z_99):
    """
    z sqrt(a (1 - a) / n). Although reported as a Wilson score interval this
    is the Wald normal approximation.
    """
    if not 0 <= a <= 1:
        raise InvalidInput('a={0!r} is not a fraction'.format(a))
    if isinstance(n, bool) or n < 1:
        raise InvalidInput('n={0!r} must be >= 1'.format(n))
    if not z > 0:
        raise InvalidInput('z={0!r} must be > 0'.format(z))
    return z * math.sqrt(a * (1 - a) / n)


def bootstrap_variance(metric_fn, preds, truths, k=10, frac=0.75, rng=0):
    """
    Population variance of `metric_fn` over `k` subsamples of size
    ceil(`frac` n), each drawn without replacement.

    :param rng: `numpy.random.Generator` or seed.
    """
    try:
        preds, truths = _paired(preds, truths)
    except (LengthMismatch, EmptyInput) as ex:
        raise InvalidInput(str(ex))
    if isinstance(k, bool) or k < 1:
        raise InvalidInput('k={0!r} must be >= 1'.format(k))
    if not 0 < frac <= 1:
        raise InvalidInput('frac={0!r} must be in (0, 1]'.format(frac))
    rng = np.random.default_rng(rng)
    n = len(preds)
    size = math.ceil(frac * n)
    samples = []
    for _ in range(k):
        index = rng.choice(n, size=size, replace=False)
        samples.append(metric_fn([preds[i] for i in index], [truths[i] for i in index]))
    return float(np.var(samples))


@dataclasses.dataclass(frozen=True)
class Tally:
    """
    Mergeable evaluation counts. Absolute log errors are kept so merged
    LogMAE is exactly the sequential one.
    """

    n: int = 0
    n_invalid: int = 0
    n_correct: int = 0
    abs_errors: typing.Tuple[float, ...] = ()

    @property
    def n_valid(self):
        return self.n - self.n_invalid

    def merge(self, other):
        return Tally(
            n=self.n + other.n,
            n_invalid=self.n_invalid + other.n_invalid,
            n_correct=self.n_correct + other.n_correct,
            abs_errors=self.abs_errors + other.abs_errors,
        )

    def log_mae(self):
        if not self.abs_errors:
            return None
        return math.fsum(self.abs_errors) / len(self.abs_errors)


def tally(preds, truths):
    preds, truths = list(preds), list(truths)
    if len(preds) != len(truths):
        raise LengthMismatch(len(preds), len(truths))
    valid = [(p, t) for p, t in zip(preds, truths) if not _is_invalid(p)]
    for t in truths:
        decompose(t)
    if not valid:
        return Tally(n=len(preds), n_invalid=len(preds))
    p, t = zip(*valid)
    errors = np.abs(_log10s(p) - _log10s(t))
    correct = sum(1 for a, b in valid if e_acc(a, b))
    return Tally(
        n=len(preds),
        n_invalid=len(preds) - len(valid),
        n_correct=correct,
        abs_errors=tuple(errors.tolist()),
    )


@dataclasses.dataclass(frozen=True)
class EvalReport:

    n: int
    e_acc: float
    e_acc_ci_halfwidth: float
    log_mae: typing.Optional[float]
    na_fraction: float
    bootstrap_var_log_mae: typing.Optional[float]
    status: str = 'ok'

    @property
    def is_na(self):
        return self.status == 'NA'

    def to_json(self):
        return dataclasses.asdict(self)


def _shards(n, workers):
    bounds = np.linspace(0, n, workers + 1).astype(int)
    return [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]


def evaluate(preds, truths, z=Z_99, k=10, frac=0.75, rng=0, workers=1):
    """
    Builds an `EvalReport`, tallying shards of the examples on a thread pool
    of `workers`. The result does not depend on `workers`.
    """
    preds, truths = _paired(preds, truths)
    shards = _shards(len(preds), max(1, workers))
    if len(shards) == 1:
        total = tally(preds, truths)
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(lambda s: tally(preds[s[0]:s[1]], truths[s[0]:s[1]]), shards)
            total = functools.reduce(Tally.merge, parts, Tally())

    na_fraction = total.n_invalid / total.n
    status = 'NA' if na_fraction >= NA_THRESHOLD else 'ok'
    if total.n_valid == 0:
        logger.warning('no valid predictions n=%d', total.n)
        return EvalReport(
            n=total.n, e_acc=0.0, e_acc_ci_halfwidth=0.0, log_mae=None,
            na_fraction=na_fraction, bootstrap_var_log_mae=None, status=status,
        )
    accuracy = total.n_correct / total.n_valid
    valid = [(p, t) for p, t in zip(preds, truths) if not _is_invalid(p)]
    variance = bootstrap_variance(
        log_mae, [p for p, _ in valid], [t for _, t in valid], k=k, frac=frac, rng=rng,
    )
    return EvalReport(
        n=total.n,
        e_acc=accuracy,
        e_acc_ci_halfwidth=wilson_halfwidth(accuracy, total.n_valid, z),
        log_mae=total.log_mae(),
        na_fraction=na_fraction,
        bootstrap_var_log_mae=variance,
        status=status,
    )
