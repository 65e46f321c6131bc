"""
Vocabulary-change discretizations of the number line.

`DecadeBins` has one bin per exponent 0..16 with an arithmetic-mean (5) or
geometric-mean (sqrt 10) mantissa representative. `FreqBins` has variable
length bins with upper-inclusive edges, fit to equal frequency on a corpus:

    .. code:: python

        >>> bins = fit_freq_bins(range(1, 9), 4)
        >>> bins.boundaries, bins.representatives
        ((2.0, 4.0, 6.0, 8.0), (1.5, 3.5, 5.5, 7.5))
        >>> bin_of(5, bins)
        2

"""
import dataclasses
import enum
import logging
import math
import typing

import numpy as np

from . import (
    MIN_VALUE, MAX_VALUE, N_EXPONENTS, EmptyInput, InvalidInput, IndexOutOfRange,
)
from .numparse import decompose

__all__ = [
    'Rule',
    'DecadeBins',
    'FreqBins',
    'FINANCE_EDGES',
    'bin_of',
    'representative',
    'fit_freq_bins',
    'from_json',
]

logger = logging.getLogger(__name__)

#: Upper edges of the 21-bin equal-frequency vocabulary of a financial news
#: corpus (years 2011, 2017 and 2018 get bins of their own).
FINANCE_EDGES = (
    1, 2, 3, 4, 6, 10, 14, 21, 30, 31, 70, 415, 2011, 2017, 2018, 5131, 30207,
    252178, 1700000, 30000000, 1152337024,
)


class Rule(str, enum.Enum):

    AM = 'am'
    GM = 'gm'


@dataclasses.dataclass(frozen=True)
class DecadeBins:
    """
    Bin k covers [10**k, 10**(k + 1)) for k < 16, bin 16 holds 10**16 alone.
    """

    representative_rule: Rule = Rule.AM

    n_bins: typing.ClassVar[int] = N_EXPONENTS

    def __post_init__(self):
        object.__setattr__(self, 'representative_rule', Rule(self.representative_rule))

    def bin_of(self, value):
        return decompose(value).exponent

    def representative(self, index):
        if isinstance(index, bool) or not 0 <= index < self.n_bins:
            raise IndexOutOfRange(index, self.n_bins)
        index = int(index)
        if index == self.n_bins - 1:
            return float(MAX_VALUE)
        if self.representative_rule is Rule.AM:
            return 5 * 10.0 ** index
        return 10.0 ** (index + 0.5)

    def representatives(self):
        return np.array([self.representative(k) for k in range(self.n_bins)])

    def to_json(self):
        return {'kind': 'decade', 'rule': self.representative_rule.value}


@dataclasses.dataclass(frozen=True)
class FreqBins:
    """
    Bin k covers (boundaries[k - 1], boundaries[k]]; values beyond either
    end clamp to the outermost bins.
    """

    boundaries: typing.Tuple[float, ...]
    representatives: typing.Tuple[float, ...]

    def __post_init__(self):
        boundaries = tuple(float(b) for b in self.boundaries)
        representatives = tuple(float(r) for r in self.representatives)
        if not boundaries:
            raise EmptyInput('boundaries')
        if len(boundaries) != len(representatives):
            raise InvalidInput('{0} boundaries but {1} representatives'.format(
                len(boundaries), len(representatives),
            ))
        if not all(math.isfinite(b) and b > 0 for b in boundaries):
            raise InvalidInput('boundaries must be positive and finite')
        if any(lo >= hi for lo, hi in zip(boundaries, boundaries[1:])):
            raise InvalidInput('boundaries must be strictly ascending')
        object.__setattr__(self, 'boundaries', boundaries)
        object.__setattr__(self, 'representatives', representatives)

    @classmethod
    def from_edges(cls, edges=FINANCE_EDGES):
        """
        Bins from a fixed edge list, each represented by the geometric
        midpoint of its interval. The first bin starts at 1.
        """
        edges = [float(e) for e in edges]
        lowers = [min(MIN_VALUE, edges[0])] + edges[:-1]
        return cls(
            boundaries=edges,
            representatives=[math.sqrt(lo * hi) for lo, hi in zip(lowers, edges)],
        )

    @property
    def n_bins(self):
        return len(self.boundaries)

    def bin_of(self, value):
        value = float(value)
        if not (math.isfinite(value) and value > 0):
            raise InvalidInput('{0!r} is not a positive real'.format(value))
        return int(self.bins_of([value])[0])

    def bins_of(self, values):
        index = np.searchsorted(np.asarray(self.boundaries), np.asarray(values, float), side='left')
        return np.minimum(index, self.n_bins - 1)

    def representative(self, index):
        if isinstance(index, bool) or not 0 <= index < self.n_bins:
            raise IndexOutOfRange(index, self.n_bins)
        return self.representatives[int(index)]

    def to_json(self):
        return {
            'kind': 'freq',
            'edges': list(self.boundaries),
            'representatives': list(self.representatives),
        }


def from_json(doc):
    """
    Inverse of `DecadeBins.to_json` and `FreqBins.to_json`.
    """
    kind = doc.get('kind', 'freq')
    if kind == 'decade':
        return DecadeBins(Rule(doc.get('rule', 'am')))
    if kind != 'freq':
        raise InvalidInput('unknown bins kind {0!r}'.format(kind))
    return FreqBins(doc['edges'], doc['representatives'])


def bin_of(value, bins):
    return bins.bin_of(value)


def representative(index, bins):
    return bins.representative(index)


def fit_freq_bins(values, n_bins=21):
    """
    Equal-frequency bins: sorts `values` and cuts after every `len / n_bins`
    of them. Tied cuts collapse into one bin, so fewer than `n_bins` bins
    come back on heavily tied data. Each representative is the mean of the
    values falling in its bin.

    :raise EmptyInput: `values` is empty.
    """
    x = np.sort(np.asarray(list(values), dtype=float))
    if x.size == 0:
        raise EmptyInput('values')
    if isinstance(n_bins, bool) or n_bins < 1:
        raise InvalidInput('n_bins must be >= 1, got {0!r}'.format(n_bins))
    if not (np.all(np.isfinite(x)) and x[0] > 0):
        raise InvalidInput('values must be positive and finite')
    n = x.size
    cuts = [-(-i * n // n_bins) - 1 for i in range(1, n_bins + 1)]
    edges = np.unique(x[cuts])
    if edges.size < n_bins:
        logger.info('merged tied cuts n_bins=%d realized=%d', n_bins, edges.size)

    index = np.searchsorted(edges, x, side='left')
    counts = np.bincount(index, minlength=edges.size)
    means = np.bincount(index, weights=x, minlength=edges.size) / counts
    # rounding must not push a mean outside its own bin
    lowest = x[np.concatenate([[0], np.cumsum(counts)[:-1]])]
    representatives = np.clip(means, lowest, edges)
    return FreqBins(boundaries=edges.tolist(), representatives=representatives.tolist())
