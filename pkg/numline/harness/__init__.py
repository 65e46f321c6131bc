"""
Desk-scale masked number prediction: a synthetic corpus, a mean-pooled
embedding-bag context encoder, one decoder head per number representation
and the train/evaluate loop comparing them.

    .. code:: python

        from numline import config, harness

        corpus = harness.gen_corpus(config.CorpusSpec({'seed': 1}))
        model = harness.train('vocab_am', config.TrainConfig(), corpus)
        model.predict(corpus.test[:5])

"""
from .. import Error

__all__ = [
    'InvalidSpec',
    'NonFiniteLoss',
    'MnpExample',
    'Corpus',
    'gen_corpus',
    'read_examples',
    'write_examples',
    'Vocab',
    'ContextEncoder',
    'make_head',
    'Adam',
    'Model',
    'train',
    'predict',
    'run_experiment',
    'ExperimentResult',
]


class InvalidSpec(Error):
    pass


class NonFiniteLoss(Error):

    def __init__(self, head, epoch, step, loss):
        super(NonFiniteLoss, self).__init__(
            'non-finite loss {0!r} for head {1} at epoch {2} step {3}'.format(
                loss, head, epoch, step,
            )
        )
        self.head, self.epoch, self.step, self.loss = head, epoch, step, loss


from .corpus import MnpExample, Corpus, gen_corpus, read_examples, write_examples
from .encoder import Vocab, ContextEncoder
from .heads import make_head
from .optim import Adam
from .training import Model, train, predict
from .experiment import ExperimentResult, run_experiment
