"""
Synthetic masked number prediction corpora.

Each `TemplateSpec` yields sentences with one ``[MASK]`` whose answer's
decade is predictable from the words (or, for relative templates, from a
number in the sentence). Held-out templates only feed the transfer split.
"""
import dataclasses
import json
import logging
import typing

import numpy as np

from .. import MIN_VALUE, MAX_VALUE, InvalidInput
from ..numparse import MASK_TOKEN, ParsedNumber, decompose, tokenize_text
from . import InvalidSpec

__all__ = [
    'MnpExample',
    'Corpus',
    'gen_corpus',
    'read_examples',
    'write_examples',
]

logger = logging.getLogger(__name__)

SPLITS = ('train', 'dev', 'test', 'transfer')

#: Fewest trainable templates a corpus spec may name.
MIN_TEMPLATES = 5


@dataclasses.dataclass(frozen=True)
class MnpExample:

    template_tokens: typing.Tuple[str, ...]
    answer: typing.Union[int, float]
    context_numbers: typing.Tuple[ParsedNumber, ...] = ()
    text: typing.Optional[str] = None
    template: typing.Optional[str] = None

    def __post_init__(self):
        if list(self.template_tokens).count(MASK_TOKEN) != 1:
            raise InvalidInput('{0!r} must contain {1} exactly once'.format(
                self.text or ' '.join(self.template_tokens), MASK_TOKEN,
            ))
        decompose(self.answer)

    @classmethod
    def from_text(cls, text, answer, template=None):
        tokens, numbers = tokenize_text(text)
        return cls(
            template_tokens=tuple(tokens), answer=answer,
            context_numbers=tuple(numbers), text=text, template=template,
        )

    def to_json(self, split=None):
        doc = {'text': self.text, 'answer': self.answer}
        if self.template is not None:
            doc['template'] = self.template
        if split is not None:
            doc['split'] = split
        return doc


@dataclasses.dataclass(frozen=True)
class Corpus:

    train: typing.List[MnpExample]
    dev: typing.List[MnpExample]
    test: typing.List[MnpExample]
    transfer: typing.List[MnpExample] = dataclasses.field(default_factory=list)

    def split(self, name):
        if name not in SPLITS:
            raise InvalidInput('unknown split {0!r}'.format(name))
        return getattr(self, name)

    def answers(self, name):
        return [e.answer for e in self.split(name)]


def _round(value, decimals):
    value = min(max(value, MIN_VALUE), MAX_VALUE)
    if decimals == 0:
        return int(round(value))
    value = round(value, decimals)
    return max(value, MIN_VALUE)


def _grouped(value):
    return '{0:,}'.format(value) if isinstance(value, int) else repr(value)


def _draw(template, rng):
    """
    :return: (text, answer)
    """
    text = template.texts[int(rng.integers(len(template.texts)))]
    if template.kind == 'year':
        year = rng.normal(template.center, template.spread)
        answer = int(round(min(max(year, template.low), template.high)))
    elif template.kind == 'relative':
        context = _round(10 ** rng.uniform(template.context_low, template.context_high), 0)
        ratio = 10 ** rng.normal(template.log10_mean, template.log10_sd)
        answer = _round(context * ratio, template.decimals)
        text = text.replace('{context}', _grouped(context))
    else:
        answer = _round(10 ** rng.normal(template.log10_mean, template.log10_sd), template.decimals)
    return text, answer


def _check(spec):
    trainable = [t for t in spec.templates if not t.held_out]
    if len(trainable) < MIN_TEMPLATES:
        raise InvalidSpec('need >= {0} trainable templates, got {1}'.format(
            MIN_TEMPLATES, len(trainable),
        ))
    if not any(t.kind == 'year' for t in trainable):
        raise InvalidSpec('need a year template')
    names = [t.name for t in spec.templates]
    if len(set(names)) != len(names):
        raise InvalidSpec('template names must be unique')
    for t in spec.templates:
        if t.low > t.high or t.context_low > t.context_high:
            raise InvalidSpec('{0} - bounds are inverted'.format(t.name))
    if spec.n_transfer and len(trainable) == len(spec.templates):
        raise InvalidSpec('n_transfer={0} needs a held-out template'.format(spec.n_transfer))
    return trainable, [t for t in spec.templates if t.held_out]


def _sample(templates, n, rng):
    weights = np.array([t.weight for t in templates], dtype=float)
    picks = rng.choice(len(templates), size=n, p=weights / weights.sum())
    examples = []
    for i in picks:
        text, answer = _draw(templates[i], rng)
        examples.append(MnpExample.from_text(text, answer, template=templates[i].name))
    return examples


def gen_corpus(spec, rng=None):
    """
    Generates train/dev/test splits from the trainable templates and a
    transfer split from the held-out ones.

    :param spec: `numline.config.CorpusSpec`.
    :param rng: `numpy.random.Generator`, defaults to one seeded with
        `spec.seed`.
    :raise InvalidSpec: fewer than 5 trainable templates, no year template,
        or inconsistent bounds.
    """
    trainable, held_out = _check(spec)
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    corpus = Corpus(
        train=_sample(trainable, spec.n_train, rng),
        dev=_sample(trainable, spec.n_dev, rng),
        test=_sample(trainable, spec.n_test, rng),
        transfer=_sample(held_out, spec.n_transfer, rng) if spec.n_transfer else [],
    )
    logger.info(
        'generated corpus train=%d dev=%d test=%d transfer=%d',
        len(corpus.train), len(corpus.dev), len(corpus.test), len(corpus.transfer),
    )
    return corpus


def write_examples(fo, examples, split=None):
    for example in examples:
        fo.write(json.dumps(example.to_json(split), sort_keys=True, ensure_ascii=False))
        fo.write('\n')


def read_examples(fo, split=None):
    """
    Reads JSON lines `{"text": ..., "answer": ...}`, keeping only lines of
    `split` when given (lines without a split always match).
    """
    examples = []
    for line_no, line in enumerate(fo, 1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
            if split is not None and doc.get('split', split) != split:
                continue
            examples.append(MnpExample.from_text(
                doc['text'], doc['answer'], template=doc.get('template'),
            ))
        except (ValueError, KeyError, TypeError) as ex:
            raise InvalidInput('line {0} - {1}'.format(line_no, ex))
    return examples
