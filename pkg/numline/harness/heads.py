"""
Decoder heads. Every head maps a batch of context vectors `h` (B x D) to
predicted positive reals; token heads may predict `INVALID`.

Trainable heads implement:

    - `targets(answers)`, the training labels of a list of answers
    - `loss_grad(h, targets)`, mean batch loss, parameter gradients and the
      gradient with respect to `h`
    - `predict(h)`.

"""
import collections
import logging
import math

import numpy as np
from scipy import special

from .. import N_EXPONENTS, InvalidInput, binning, dexp, notation
from ..config import HEAD_KINDS
from ..numparse import decompose

__all__ = [
    'Head',
    'TokenHead',
    'VocabHead',
    'DExpHead',
    'ConstantHead',
    'make_head',
    'from_json',
    'SCHEMES',
]

logger = logging.getLogger(__name__)

SCHEMES = {
    'subword_pad8': notation.SUBWORD_PAD8,
    'digit_pad17': notation.DIGIT_PAD17,
    'scientific_pad8': notation.SCIENTIFIC_PAD8,
}

UNK_TOKEN = '[UNK]'

INIT_SCALE = 0.01

#: Initial DExp component locations, the log-space middle of each decade.
DECADE_MIDDLES = (np.arange(N_EXPONENTS) + 0.5) * math.log(10)


def _array(value):
    return np.array(value, dtype=float)


def _cross_entropy(logits, targets):
    """
    Mean over the batch of the cross-entropy summed over all but the last
    axis, and its gradient with respect to `logits`.
    """
    batch = logits.shape[0]
    log_p = special.log_softmax(logits, axis=-1)
    picked = np.take_along_axis(log_p, targets[..., None], axis=-1)
    d_logits = np.exp(log_p)
    np.put_along_axis(
        d_logits, targets[..., None],
        np.take_along_axis(d_logits, targets[..., None], axis=-1) - 1, axis=-1,
    )
    return -picked.sum() / batch, d_logits / batch


class Head(object):

    kind = None

    trainable = True

    def params(self):
        return {}

    def targets(self, answers):
        raise NotImplementedError()

    def loss_grad(self, h, targets):
        raise NotImplementedError()

    def loss(self, h, targets):
        return self.loss_grad(h, targets)[0]

    def predict(self, h):
        raise NotImplementedError()

    def post_step(self):
        pass

    def to_json(self):
        doc = {'kind': self.kind}
        doc.update((k, v.tolist()) for k, v in self.params().items())
        return doc


class TokenHead(Head):
    """
    Predicts each of the `pad_len` token positions of the answer's rendering
    independently, from the context vector through a per-position
    projection. Decoding is greedy and parsed strictly, so inconsistent
    positions yield `INVALID`.
    """

    def __init__(self, kind, tokens, W, b):
        self.kind = kind
        self.scheme = SCHEMES[kind]
        self.tokens = list(tokens)
        self.index = {t: i for i, t in enumerate(self.tokens)}
        self.W, self.b = W, b

    @classmethod
    def init(cls, kind, answers, dim, rng):
        scheme = SCHEMES[kind]
        tokens = [scheme.pad_token, UNK_TOKEN]
        seen = set(tokens)
        for answer in answers:
            for token in notation.render(answer, scheme).tokens:
                if token not in seen:
                    seen.add(token)
                    tokens.append(token)
        logger.debug('token head kind=%s vocab=%d', kind, len(tokens))
        shape = (scheme.pad_len, len(tokens))
        return cls(kind, tokens, rng.normal(0.0, INIT_SCALE, size=shape + (dim,)), np.zeros(shape))

    def params(self):
        return {'W': self.W, 'b': self.b}

    def targets(self, answers):
        unk = self.index[UNK_TOKEN]
        return np.array([
            [self.index.get(t, unk) for t in notation.render(a, self.scheme).tokens]
            for a in answers
        ], dtype=np.int64)

    def logits(self, h):
        p, v, d = self.W.shape
        return (h @ self.W.reshape(p * v, d).T).reshape(-1, p, v) + self.b

    def loss_grad(self, h, targets):
        loss, d_logits = _cross_entropy(self.logits(h), targets)
        p, v, d = self.W.shape
        flat = d_logits.reshape(-1, p * v)
        grads = {
            'W': (flat.T @ h).reshape(p, v, d),
            'b': d_logits.sum(axis=0),
        }
        return loss, grads, flat @ self.W.reshape(p * v, d)

    def decode(self, h):
        ids = np.argmax(self.logits(h), axis=-1)
        return [[self.tokens[i] for i in row] for row in ids]

    def predict(self, h):
        predictions = []
        for tokens in self.decode(h):
            parsed = notation.parse_tokens(tokens, self.scheme)
            predictions.append(notation.INVALID if parsed is notation.INVALID else parsed.value)
        return predictions

    def to_json(self):
        doc = super(TokenHead, self).to_json()
        doc['tokens'] = self.tokens
        return doc

    @classmethod
    def from_json(cls, doc):
        return cls(doc['kind'], doc['tokens'], _array(doc['W']), _array(doc['b']))


class VocabHead(Head):
    """
    Classifies the answer into a bin and predicts the bin's representative.
    """

    def __init__(self, kind, bins, W, b):
        self.kind = kind
        self.bins = bins
        self.W, self.b = W, b

    @classmethod
    def init(cls, kind, answers, dim, rng, n_freq_bins=21):
        if kind == 'vocab_freq':
            bins = binning.fit_freq_bins(answers, n_freq_bins)
        else:
            bins = binning.DecadeBins(binning.Rule.AM if kind == 'vocab_am' else binning.Rule.GM)
        n = bins.n_bins
        return cls(kind, bins, rng.normal(0.0, INIT_SCALE, size=(n, dim)), np.zeros(n))

    def params(self):
        return {'W': self.W, 'b': self.b}

    def targets(self, answers):
        if isinstance(self.bins, binning.DecadeBins):
            return np.array([decompose(a).exponent for a in answers], dtype=np.int64)
        return self.bins.bins_of([float(a) for a in answers]).astype(np.int64)

    def logits(self, h):
        return h @ self.W.T + self.b

    def loss_grad(self, h, targets):
        loss, d_logits = _cross_entropy(self.logits(h), targets)
        grads = {'W': d_logits.T @ h, 'b': d_logits.sum(axis=0)}
        return loss, grads, d_logits @ self.W

    def predict(self, h):
        return [self.bins.representative(int(k)) for k in np.argmax(self.logits(h), axis=1)]

    def to_json(self):
        doc = super(VocabHead, self).to_json()
        doc['bins'] = self.bins.to_json()
        return doc

    @classmethod
    def from_json(cls, doc):
        return cls(doc['kind'], binning.from_json(doc['bins']), _array(doc['W']), _array(doc['b']))


class DExpHead(Head):
    """
    Context-conditioned `DExpParams`: exponent logits `h W' + b`, component
    locations `DECADE_MIDDLES + h U' + c` and one shared `log_sigma`.
    """

    kind = 'dexp'

    def __init__(self, W, b, U, c, log_sigma):
        self.W, self.b, self.U, self.c = W, b, U, c
        self.log_sigma = log_sigma

    @classmethod
    def init(cls, answers, dim, rng):
        return cls(
            W=rng.normal(0.0, INIT_SCALE, size=(N_EXPONENTS, dim)),
            b=np.zeros(N_EXPONENTS),
            U=rng.normal(0.0, INIT_SCALE, size=(N_EXPONENTS, dim)),
            c=np.zeros(N_EXPONENTS),
            log_sigma=np.zeros(1),
        )

    def params(self):
        return {'W': self.W, 'b': self.b, 'U': self.U, 'c': self.c, 'log_sigma': self.log_sigma}

    def targets(self, answers):
        return np.array([float(decompose(a).value) for a in answers])

    def outputs(self, h):
        """
        :return: (logits, mu), both B x 17.
        """
        return h @ self.W.T + self.b, DECADE_MIDDLES + h @ self.U.T + self.c

    def params_for(self, h):
        """
        `DExpParams` of each row of `h`.
        """
        logits, mu = self.outputs(h)
        return [dexp.DExpParams(l, m, self.log_sigma[0]) for l, m in zip(logits, mu)]

    def loss_grad(self, h, targets):
        batch = h.shape[0]
        logits, mu = self.outputs(h)
        nll, d_logits, d_mu, d_log_sigma = dexp.mixture_nll_grad(
            logits, mu, self.log_sigma[0], targets,
        )
        d_logits, d_mu = d_logits / batch, d_mu / batch
        grads = {
            'W': d_logits.T @ h,
            'b': d_logits.sum(axis=0),
            'U': d_mu.T @ h,
            'c': d_mu.sum(axis=0),
            'log_sigma': np.array([d_log_sigma.sum() / batch]),
        }
        return nll.mean(), grads, d_logits @ self.W + d_mu @ self.U

    def post_step(self):
        self.log_sigma[:] = dexp.clamp_log_sigma(self.log_sigma)

    def predict(self, h):
        logits, mu = self.outputs(h)
        return dexp.mixture_predict(logits, mu, self.log_sigma[0]).tolist()

    @classmethod
    def from_json(cls, doc):
        return cls(*(_array(doc[k]) for k in ('W', 'b', 'U', 'c', 'log_sigma')))


class ConstantHead(Head):
    """
    Predicts one training-set statistic of the answers whatever the context.
    The mode breaks ties toward the smallest value.
    """

    trainable = False

    def __init__(self, kind, value):
        self.kind = kind
        self.value = value

    @classmethod
    def init(cls, kind, answers):
        answers = list(answers)
        if not answers:
            raise InvalidInput('constant heads need training answers')
        if kind == 'const_mean':
            value = math.fsum(answers) / len(answers)
        elif kind == 'const_median':
            value = float(np.median(np.asarray(answers, dtype=float)))
        else:
            counts = collections.Counter(answers)
            top = max(counts.values())
            value = min(a for a, n in counts.items() if n == top)
        return cls(kind, value)

    def targets(self, answers):
        return np.zeros(len(answers))

    def loss_grad(self, h, targets):
        return 0.0, {}, np.zeros_like(h)

    def predict(self, h):
        return [self.value] * h.shape[0]

    def to_json(self):
        return {'kind': self.kind, 'value': self.value}

    @classmethod
    def from_json(cls, doc):
        return cls(doc['kind'], doc['value'])


def make_head(kind, answers, dim, rng, n_freq_bins=21):
    """
    A freshly initialized head of `kind`; data-dependent parts (token
    vocabularies, frequency bins, constants) come from the training
    `answers`.
    """
    if kind not in HEAD_KINDS:
        raise InvalidInput('unknown head {0!r}, expected one of {1}'.format(
            kind, ', '.join(HEAD_KINDS),
        ))
    if kind in SCHEMES:
        return TokenHead.init(kind, answers, dim, rng)
    if kind.startswith('vocab_'):
        return VocabHead.init(kind, answers, dim, rng, n_freq_bins)
    if kind == 'dexp':
        return DExpHead.init(answers, dim, rng)
    return ConstantHead.init(kind, answers)


def from_json(doc):
    kind = doc['kind']
    if kind in SCHEMES:
        return TokenHead.from_json(doc)
    if kind.startswith('vocab_'):
        return VocabHead.from_json(doc)
    if kind == 'dexp':
        return DExpHead.from_json(doc)
    if kind in HEAD_KINDS:
        return ConstantHead.from_json(doc)
    raise InvalidInput('unknown head {0!r}'.format(kind))
