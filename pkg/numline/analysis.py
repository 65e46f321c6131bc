"""
Corpus and model introspection: mantissa histograms, leading-digit checks
against Benford's law and the neuron trigger precision/recall probe.
"""
import dataclasses
import io
import logging
import typing

import numpy as np
from scipy import stats

from . import N_EXPONENTS, Error, EmptyInput, InvalidInput
from .numparse import decompose

__all__ = [
    'ShapeMismatch',
    'MantissaHistogram',
    'MantissaComparison',
    'BenfordReport',
    'NeuronProbeResult',
    'NeuronProbe',
    'BENFORD',
    'mantissa_histogram',
    'compare_mantissas',
    'benford_deviation',
    'neuron_pr',
    'load_activations',
    'load_labels',
    'plot_mantissas',
]

logger = logging.getLogger(__name__)

#: P(d) = log10(1 + 1/d) for leading digits 1..9.
BENFORD = np.log10(1 + 1 / np.arange(1, 10))


class ShapeMismatch(Error):
    pass


def _mantissas(values):
    values = list(values)
    if not values:
        raise EmptyInput('values')
    return np.array([decompose(v).mantissa for v in values])


@dataclasses.dataclass(frozen=True, eq=False)
class MantissaHistogram:

    bin_edges: np.ndarray
    counts: np.ndarray
    total: int

    @property
    def frequencies(self):
        return self.counts / self.total

    @property
    def mode(self):
        """
        (low, high) edges of the most populated cell.
        """
        i = int(np.argmax(self.counts))
        return float(self.bin_edges[i]), float(self.bin_edges[i + 1])

    def to_csv(self):
        lines = ['low,high,count']
        for lo, hi, count in zip(self.bin_edges, self.bin_edges[1:], self.counts):
            lines.append('{0!r},{1!r},{2}'.format(float(lo), float(hi), int(count)))
        return '\n'.join(lines) + '\n'


def mantissa_histogram(values, n_bins=18):
    """
    Counts mantissas in `n_bins` equal-width cells over [1, 10).
    """
    if isinstance(n_bins, bool) or n_bins < 2:
        raise InvalidInput('n_bins must be >= 2, got {0!r}'.format(n_bins))
    mantissas = _mantissas(values)
    edges = np.linspace(1.0, 10.0, n_bins + 1)
    counts, _ = np.histogram(mantissas, bins=edges)
    return MantissaHistogram(bin_edges=edges, counts=counts, total=int(mantissas.size))


@dataclasses.dataclass(frozen=True)
class MantissaComparison:

    predicted: MantissaHistogram
    truth: MantissaHistogram
    tv_distance: float


def compare_mantissas(preds, truths, n_bins=18):
    """
    Mantissa histograms of predictions and ground truth over shared cells,
    and the total-variation distance between them.
    """
    predicted = mantissa_histogram(preds, n_bins)
    truth = mantissa_histogram(truths, n_bins)
    tv = 0.5 * float(np.sum(np.abs(predicted.frequencies - truth.frequencies)))
    return MantissaComparison(predicted=predicted, truth=truth, tv_distance=tv)


@dataclasses.dataclass(frozen=True, eq=False)
class BenfordReport:

    n: int
    frequencies: np.ndarray
    reference: np.ndarray
    tv_distance: float
    chi2: float
    p_value: float

    def to_json(self):
        return {
            'n': self.n,
            'frequencies': self.frequencies.tolist(),
            'reference': self.reference.tolist(),
            'tv_distance': self.tv_distance,
            'chi2': self.chi2,
            'p_value': self.p_value,
        }


def benford_deviation(values):
    """
    Leading-digit frequencies (digit = floor of the mantissa), their
    total-variation distance from `BENFORD` and a chi-square goodness of
    fit.
    """
    digits = np.clip(np.floor(_mantissas(values)).astype(int), 1, 9)
    counts = np.bincount(digits, minlength=10)[1:]
    n = int(counts.sum())
    frequencies = counts / n
    chi2, p_value = stats.chisquare(counts, f_exp=BENFORD * n)
    return BenfordReport(
        n=n,
        frequencies=frequencies,
        reference=BENFORD.copy(),
        tv_distance=0.5 * float(np.sum(np.abs(frequencies - BENFORD))),
        chi2=float(chi2),
        p_value=float(p_value),
    )


@dataclasses.dataclass(frozen=True)
class NeuronProbeResult:

    neuron_id: int
    precision: float
    recall: float
    f1: float
    k: int
    target_exponent: int


def _f1(precision, recall):
    total = precision + recall
    return np.divide(2 * precision * recall, total, out=np.zeros_like(total), where=total > 0)


@dataclasses.dataclass(frozen=True, eq=False)
class NeuronProbe:
    """
    `results` are ranked by F1 (then neuron index). `precision_curve[j, c]`
    and `recall_curve[j, c]` are neuron j's values at cutoff c + 1.
    """

    results: typing.List[NeuronProbeResult]
    precision_curve: np.ndarray
    recall_curve: np.ndarray

    def curve(self, neuron_id):
        """
        :return: (cutoffs, precision, recall)
        """
        cutoffs = np.arange(1, self.precision_curve.shape[1] + 1)
        return cutoffs, self.precision_curve[neuron_id], self.recall_curve[neuron_id]

    def to_json(self, top=None):
        return [dataclasses.asdict(r) for r in self.results[:top]]


def _ranks(activations):
    # stable sort on negated values breaks ties toward the lower index
    order = np.argsort(-activations, axis=1, kind='stable')
    ranks = np.empty_like(order)
    np.put_along_axis(ranks, order, np.arange(activations.shape[1])[None, :], axis=1)
    return ranks


def neuron_pr(activations, labels, target_exponent, k=50):
    """
    A neuron triggers on an example when it is among that example's `k`
    largest activations. Recall is the fraction of `target_exponent`
    examples it triggers on, precision the fraction of its triggers that
    are `target_exponent` examples.

    :param activations: N x D matrix.
    :param labels: N exponent labels.
    :raise ShapeMismatch: inconsistent shapes or `k` > D.
    """
    activations = np.asarray(activations, dtype=float)
    labels = np.asarray(labels)
    if activations.ndim != 2 or activations.shape[0] < 1:
        raise ShapeMismatch('activations must be a non-empty N x D matrix, got shape {0}'.format(
            activations.shape,
        ))
    n, d = activations.shape
    if labels.shape != (n,):
        raise ShapeMismatch('{0} labels for {1} rows'.format(labels.size, n))
    if isinstance(k, bool) or not 1 <= k <= d:
        raise ShapeMismatch('k={0!r} not in [1, {1}]'.format(k, d))
    if not np.all((labels >= 0) & (labels < N_EXPONENTS)):
        raise InvalidInput('labels must be exponents in [0, {0})'.format(N_EXPONENTS))

    ranks = _ranks(activations)
    is_target = labels == target_exponent
    n_target = int(is_target.sum())

    # rank_counts[j, r]: rows where neuron j has rank r
    neuron = np.broadcast_to(np.arange(d), (n, d))
    all_counts = np.zeros((d, d), dtype=np.int64)
    np.add.at(all_counts, (neuron.ravel(), ranks.ravel()), 1)
    hit_counts = np.zeros((d, d), dtype=np.int64)
    np.add.at(hit_counts, (neuron[is_target].ravel(), ranks[is_target].ravel()), 1)
    triggered = np.cumsum(all_counts, axis=1).astype(float)
    hits = np.cumsum(hit_counts, axis=1).astype(float)

    precision_curve = np.divide(hits, triggered, out=np.zeros_like(hits), where=triggered > 0)
    if n_target:
        recall_curve = hits / n_target
    else:
        logger.info('no rows with target_exponent=%d', target_exponent)
        recall_curve = np.zeros_like(hits)

    precision, recall = precision_curve[:, k - 1], recall_curve[:, k - 1]
    f1 = _f1(precision, recall)
    order = sorted(range(d), key=lambda j: (-f1[j], j))
    results = [
        NeuronProbeResult(
            neuron_id=j, precision=float(precision[j]), recall=float(recall[j]),
            f1=float(f1[j]), k=k, target_exponent=int(target_exponent),
        )
        for j in order
    ]
    return NeuronProbe(
        results=results, precision_curve=precision_curve, recall_curve=recall_curve,
    )


def _split_header(data, path):
    header, _, body = data.partition(b'\n')
    try:
        n, d = (int(x) for x in header.split())
    except ValueError:
        raise InvalidInput('{0} - header must be "N D", got {1!r}'.format(path, header[:40]))
    return n, d, body


def load_activations(path, fmt=None):
    """
    Reads an activation matrix: a header line "N D", then either N CSV rows
    (`fmt` "csv") or N x D little-endian float64 values (`fmt` "binary").
    Without `fmt` files ending in .csv or .txt are CSV.
    """
    if fmt is None:
        fmt = 'csv' if str(path).lower().endswith(('.csv', '.txt')) else 'binary'
    with open(path, 'rb') as fo:
        n, d, body = _split_header(fo.read(), path)
    if fmt == 'csv':
        matrix = np.loadtxt(io.StringIO(body.decode('utf-8')), delimiter=',', ndmin=2)
    elif fmt == 'binary':
        if len(body) != n * d * 8:
            raise ShapeMismatch('{0} - expected {1} bytes, got {2}'.format(
                path, n * d * 8, len(body),
            ))
        matrix = np.frombuffer(body, dtype='<f8').reshape(n, d)
    else:
        raise InvalidInput('unknown activation format {0!r}'.format(fmt))
    if matrix.shape != (n, d):
        raise ShapeMismatch('{0} - header says {1}x{2}, data is {3}x{4}'.format(
            path, n, d, *matrix.shape
        ))
    return matrix


def load_labels(path):
    with open(path, 'r', encoding='utf-8') as fo:
        return np.array([int(line) for line in fo if line.strip()], dtype=int)


def plot_mantissas(histograms, path, labels=None):
    """
    Writes a bar chart of one or more `MantissaHistogram`s sharing edges.
    Needs the optional matplotlib dependency.
    """
    try:
        import matplotlib
        matplotlib.use('Agg')
        from matplotlib import pyplot
    except ImportError:
        raise InvalidInput('plotting needs matplotlib, install numline[plot]')
    labels = labels or [None] * len(histograms)
    figure, axes = pyplot.subplots(figsize=(6, 3.5))
    try:
        width = (histograms[0].bin_edges[1] - histograms[0].bin_edges[0]) / len(histograms)
        for i, (hist, label) in enumerate(zip(histograms, labels)):
            axes.bar(
                hist.bin_edges[:-1] + i * width, hist.frequencies, width=width,
                align='edge', label=label,
            )
        axes.set_xlabel('mantissa')
        axes.set_ylabel('fraction')
        axes.set_xlim(1, 10)
        if any(labels):
            axes.legend()
        figure.savefig(path, format='svg')
    finally:
        pyplot.close(figure)
    return path
