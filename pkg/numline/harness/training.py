import copy
import dataclasses
import json
import logging
import math

import numpy as np

from .. import __version__
from ..config import TrainConfig
from . import NonFiniteLoss, heads
from .encoder import Batch, ContextEncoder, Vocab
from .optim import Adam

__all__ = [
    'Epoch',
    'Model',
    'train',
    'predict',
]

logger = logging.getLogger(__name__)

EVAL_BATCH = 1024


@dataclasses.dataclass(frozen=True)
class Epoch:

    epoch: int
    train_loss: float
    dev_loss: float


class Model(object):
    """
    A trained context encoder plus decoder head.
    """

    def __init__(self, kind, encoder, head, history=(), best_epoch=None, config=None):
        self.kind = kind
        self.encoder = encoder
        self.head = head
        self.history = list(history)
        self.best_epoch = best_epoch
        self.config = config

    @property
    def dev_loss(self):
        for epoch in self.history:
            if epoch.epoch == self.best_epoch:
                return epoch.dev_loss
        return None

    def predict(self, examples):
        """
        Predictions for `examples`, `INVALID` where a token head emitted an
        unparseable sequence.
        """
        predictions = []
        for start in range(0, len(examples), EVAL_BATCH):
            batch = Batch.build(self.encoder.vocab, examples[start:start + EVAL_BATCH])
            predictions.extend(self.head.predict(self.encoder.forward(batch)))
        return predictions

    def loss(self, examples):
        total = 0.0
        for start in range(0, len(examples), EVAL_BATCH):
            chunk = examples[start:start + EVAL_BATCH]
            batch = Batch.build(self.encoder.vocab, chunk)
            targets = self.head.targets([e.answer for e in chunk])
            total += self.head.loss(self.encoder.forward(batch), targets) * len(chunk)
        return total / len(examples)

    def to_json(self):
        return {
            'version': __version__,
            'kind': self.kind,
            'config': self.config,
            'best_epoch': self.best_epoch,
            'history': [dataclasses.asdict(e) for e in self.history],
            'encoder': self.encoder.to_json(),
            'head': self.head.to_json(),
        }

    def save(self, fo):
        json.dump(self.to_json(), fo)

    @classmethod
    def from_json(cls, doc):
        return cls(
            kind=doc['kind'],
            encoder=ContextEncoder.from_json(doc['encoder']),
            head=heads.from_json(doc['head']),
            history=[Epoch(**e) for e in doc.get('history', [])],
            best_epoch=doc.get('best_epoch'),
            config=doc.get('config'),
        )

    @classmethod
    def load(cls, path):
        with open(path, 'r', encoding='utf-8') as fo:
            return cls.from_json(json.load(fo))


def _snapshot(encoder, head):
    return copy.deepcopy(encoder.params()), copy.deepcopy(head.params())


def _restore(snapshot, encoder, head):
    for params, saved in zip((encoder.params(), head.params()), snapshot):
        for name, value in saved.items():
            params[name][...] = value


def train(head_kind, config, corpus):
    """
    Trains a fresh encoder and `head_kind` head on `corpus.train` with Adam,
    embeddings at `config.lr_pretrained` and head parameters at
    `config.lr_new`. Stops once dev loss has not improved for
    `config.patience` epochs and restores the best epoch's parameters.

    :raise NonFiniteLoss: a training batch loss is nan or infinite.
    """
    if not isinstance(config, TrainConfig):
        config = TrainConfig(config)
    rng = np.random.default_rng(config.seed)
    answers = corpus.answers('train')
    vocab = Vocab.build(corpus.train)
    encoder = ContextEncoder.init(vocab, config.dim, rng)
    head = heads.make_head(head_kind, answers, config.dim, rng, config.freq_bins)
    model = Model(head_kind, encoder, head, config=dict(config))
    if not head.trainable:
        logger.info('fit head=%s value=%r', head_kind, head.value)
        return model

    train_batch = Batch.build(vocab, corpus.train)
    train_targets = head.targets(answers)
    adam = Adam({
        'encoder': (encoder.params(), config.lr_pretrained),
        'head': (head.params(), config.lr_new),
    })

    best, best_epoch, snapshot, stale = math.inf, None, None, 0
    for epoch in range(1, config.max_epochs + 1):
        order = rng.permutation(len(train_batch))
        losses = []
        for step, start in enumerate(range(0, len(order), config.batch_size)):
            index = order[start:start + config.batch_size]
            batch = train_batch.take(index)
            h = encoder.forward(batch)
            loss, head_grads, d_h = head.loss_grad(h, train_targets[index])
            if not math.isfinite(loss):
                raise NonFiniteLoss(head_kind, epoch, step, loss)
            adam.step({'encoder': encoder.backward(batch, d_h), 'head': head_grads})
            head.post_step()
            losses.append(loss * len(index))
        train_loss = math.fsum(losses) / len(order)
        dev_loss = model.loss(corpus.dev)
        model.history.append(Epoch(epoch=epoch, train_loss=train_loss, dev_loss=dev_loss))
        logger.info(
            'epoch=%d head=%s train_loss=%.6f dev_loss=%.6f',
            epoch, head_kind, train_loss, dev_loss,
        )
        if dev_loss < best:
            best, best_epoch, stale = dev_loss, epoch, 0
            snapshot = _snapshot(encoder, head)
        else:
            stale += 1
            if stale >= config.patience:
                logger.info('early stop head=%s epoch=%d best_epoch=%s', head_kind, epoch, best_epoch)
                break

    if snapshot is not None:
        _restore(snapshot, encoder, head)
    model.best_epoch = best_epoch
    return model


def predict(model, example):
    """
    Prediction for one example: a positive real or `INVALID`.
    """
    return model.predict([example])[0]
