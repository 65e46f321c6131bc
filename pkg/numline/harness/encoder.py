import dataclasses

import numpy as np

from .. import N_EXPONENTS
from ..numparse import MASK_TOKEN, NUM_TOKEN

__all__ = [
    'UNK_TOKEN',
    'Vocab',
    'Batch',
    'ContextEncoder',
]

UNK_TOKEN = '[UNK]'

RESERVED = (UNK_TOKEN, MASK_TOKEN, NUM_TOKEN)


class Vocab(object):
    """
    Word table: reserved tokens first, then training words in order of
    first appearance.
    """

    def __init__(self, tokens=()):
        self.tokens = []
        self.index = {}
        for token in RESERVED + tuple(tokens):
            if token not in self.index:
                self.index[token] = len(self.tokens)
                self.tokens.append(token)

    @classmethod
    def build(cls, examples):
        return cls(t for e in examples for t in e.template_tokens)

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, token):
        return token in self.index

    def ids(self, tokens):
        unk = self.index[UNK_TOKEN]
        return [self.index.get(t, unk) for t in tokens]


@dataclasses.dataclass(frozen=True)
class Batch:
    """
    Padded word ids and context-number exponents of a list of examples.
    """

    words: np.ndarray
    word_mask: np.ndarray
    exponents: np.ndarray
    exponent_mask: np.ndarray

    @classmethod
    def build(cls, vocab, examples):
        rows = [vocab.ids(e.template_tokens) for e in examples]
        exps = [[n.exponent for n in e.context_numbers] for e in examples]
        words, word_mask = _pad(rows)
        exponents, exponent_mask = _pad(exps)
        return cls(words, word_mask, exponents, exponent_mask)

    def __len__(self):
        return self.words.shape[0]

    def take(self, index):
        return Batch(
            self.words[index], self.word_mask[index],
            self.exponents[index], self.exponent_mask[index],
        )


def _pad(rows):
    width = max([len(r) for r in rows] + [1])
    ids = np.zeros((len(rows), width), dtype=np.int64)
    mask = np.zeros((len(rows), width), dtype=bool)
    for i, row in enumerate(rows):
        ids[i, :len(row)] = row
        mask[i, :len(row)] = True
    return ids, mask


class ContextEncoder(object):
    """
    Mean-pooled embedding bag: the context vector is the mean of the word
    embeddings and of one exponent embedding per number in the sentence.
    """

    def __init__(self, vocab, embeddings, exponent_embeddings):
        self.vocab = vocab
        self.embeddings = embeddings
        self.exponent_embeddings = exponent_embeddings

    @classmethod
    def init(cls, vocab, dim, rng, scale=1.0):
        return cls(
            vocab,
            rng.normal(0.0, scale, size=(len(vocab), dim)),
            rng.normal(0.0, scale, size=(N_EXPONENTS, dim)),
        )

    @property
    def dim(self):
        return self.embeddings.shape[1]

    def params(self):
        return {
            'embeddings': self.embeddings,
            'exponent_embeddings': self.exponent_embeddings,
        }

    def _denominator(self, batch):
        count = batch.word_mask.sum(axis=1) + batch.exponent_mask.sum(axis=1)
        return np.maximum(count, 1)[:, None].astype(float)

    def forward(self, batch):
        words = self.embeddings[batch.words] * batch.word_mask[..., None]
        numbers = self.exponent_embeddings[batch.exponents] * batch.exponent_mask[..., None]
        return (words.sum(axis=1) + numbers.sum(axis=1)) / self._denominator(batch)

    encode = forward

    def backward(self, batch, d_context):
        """
        :return: gradients keyed like `params`.
        """
        d_mean = d_context / self._denominator(batch)
        d_embeddings = np.zeros_like(self.embeddings)
        rows, cols = np.nonzero(batch.word_mask)
        np.add.at(d_embeddings, batch.words[rows, cols], d_mean[rows])
        d_exponents = np.zeros_like(self.exponent_embeddings)
        rows, cols = np.nonzero(batch.exponent_mask)
        np.add.at(d_exponents, batch.exponents[rows, cols], d_mean[rows])
        return {'embeddings': d_embeddings, 'exponent_embeddings': d_exponents}

    def to_json(self):
        return {
            'vocab': list(self.vocab.tokens),
            'embeddings': self.embeddings.tolist(),
            'exponent_embeddings': self.exponent_embeddings.tolist(),
        }

    @classmethod
    def from_json(cls, doc):
        vocab = Vocab(doc['vocab'])
        return cls(
            vocab,
            np.array(doc['embeddings'], dtype=float),
            np.array(doc['exponent_embeddings'], dtype=float),
        )
