"""
Configuration forms for corpus generation, training and experiments. Each
resolves from any `Source`, so a JSON file, a dict or a union of command
line flags over a file all work:

    .. code:: python

        config = ExperimentConfig(JsonSource.from_file('experiment.json'))
        config.train.batch_size  # 32

Mapped forms are plain dicts, so `json.dumps(config)` gives the fully
resolved configuration.
"""
from . import fields

__all__ = [
    'HEAD_KINDS',
    'TOKEN_HEADS',
    'TrainConfig',
    'TemplateSpec',
    'CorpusSpec',
    'ExperimentConfig',
    'RunConfig',
    'DEFAULT_TEMPLATES',
]

TOKEN_HEADS = ('subword_pad8', 'digit_pad17', 'scientific_pad8')

HEAD_KINDS = TOKEN_HEADS + (
    'vocab_am',
    'vocab_gm',
    'vocab_freq',
    'dexp',
    'const_mean',
    'const_median',
    'const_mode',
)


class TrainConfig(fields.Form):

    batch_size = fields.Integer(default=32).min(1)

    max_epochs = fields.Integer(default=10).min(1)

    patience = fields.Integer(default=3).min(1)

    @patience.validate
    def patience(self, value):
        if 'max_epochs' in self and value >= self.max_epochs:
            self.ctx.errors.invalid('must be < max_epochs ({0})'.format(self.max_epochs))
            return False
        return True

    #: Embedding tables.
    lr_pretrained = fields.Float(default=3e-5).min(0, exclusive=True)

    #: Decoder head parameters.
    lr_new = fields.Float(default=1e-2).min(0, exclusive=True)

    dim = fields.Integer(default=64).min(1)

    #: Equal-frequency bins of the vocab_freq head.
    freq_bins = fields.Integer(default=21).min(1)

    seed = fields.Integer(default=0).min(0)


class TemplateSpec(fields.Form):
    """
    A sentence family with one masked number.

    `lognormal`
        answer = 10**N(log10_mean, log10_sd), rounded to `decimals`.

    `year`
        answer = round(N(center, spread)) clipped to [low, high].

    `relative`
        a context number 10**U(context_low, context_high) is written into
        the sentence at ``{context}`` and the answer is that number times
        10**N(log10_mean, log10_sd).

    """

    name = fields.String(min_length=1)

    kind = fields.String(default='lognormal', choices=['lognormal', 'year', 'relative'])

    texts = fields.List(fields.String(min_length=1), min_length=1)

    @texts.validate
    def texts(self, value):
        for text in value:
            if text.count('[MASK]') != 1:
                self.ctx.errors.invalid('"{0}" must contain [MASK] once'.format(text))
                return False
            if self.get('kind') == 'relative' and '{context}' not in text:
                self.ctx.errors.invalid('"{0}" has no {{context}} slot'.format(text))
                return False
        return True

    log10_mean = fields.Float(default=2.0)

    log10_sd = fields.Float(default=0.25).min(0)

    decimals = fields.Integer(default=0).range(0, 4)

    center = fields.Float(default=2012.0)

    spread = fields.Float(default=6.0).min(0)

    low = fields.Float(default=1990.0).min(1)

    high = fields.Float(default=2030.0).min(1)

    context_low = fields.Float(default=3.0).range(0, 16)

    context_high = fields.Float(default=12.0).range(0, 16)

    held_out = fields.Boolean(default=False)

    weight = fields.Float(default=1.0).min(0, exclusive=True)


DEFAULT_TEMPLATES = [
    {
        'name': 'tiger',
        'texts': [
            'Tigers weigh [MASK] lbs.',
            'An adult tiger can weigh [MASK] pounds.',
        ],
        'log10_mean': 2.78, 'log10_sd': 0.12,
    },
    {
        'name': 'revenue',
        'texts': [
            'The company reported annual revenue of $[MASK] last year.',
            'Revenue rose to $[MASK] in the fiscal year.',
        ],
        'log10_mean': 8.5, 'log10_sd': 0.2,
    },
    {
        'name': 'share_price',
        'texts': [
            'Shares closed at $[MASK] on Friday.',
            'The stock traded at $[MASK] per share.',
        ],
        'log10_mean': 1.5, 'log10_sd': 0.15, 'decimals': 2,
    },
    {
        'name': 'year',
        'kind': 'year',
        'texts': [
            'The deal closed in [MASK] after months of talks.',
            'The firm was founded in [MASK].',
            'Sales peaked in [MASK], analysts said.',
        ],
        'weight': 2.0,
    },
    {
        'name': 'population',
        'texts': [
            'The city has a population of [MASK] people.',
            'About [MASK] residents live in the region.',
        ],
        'log10_mean': 5.5, 'log10_sd': 0.2,
    },
    {
        'name': 'acquisition',
        'texts': [
            'The acquisition was valued at $[MASK].',
            'The merger is worth $[MASK], according to the filing.',
        ],
        'log10_mean': 10.5, 'log10_sd': 0.2,
    },
    {
        'name': 'national_debt',
        'texts': [
            'The national debt reached $[MASK] this year.',
        ],
        'log10_mean': 13.5, 'log10_sd': 0.15,
    },
    {
        'name': 'star_distance',
        'texts': [
            'The star lies [MASK] kilometers from Earth.',
        ],
        'log10_mean': 15.5, 'log10_sd': 0.2,
    },
    {
        'name': 'employees',
        'texts': [
            'The firm employs [MASK] people worldwide.',
            'The company cut its workforce to [MASK] employees.',
        ],
        'log10_mean': 3.5, 'log10_sd': 0.15,
    },
    {
        'name': 'stadium',
        'texts': [
            'The stadium seats [MASK] fans.',
        ],
        'log10_mean': 4.5, 'log10_sd': 0.15,
    },
    {
        'name': 'profit',
        'kind': 'relative',
        'texts': [
            'Profit was $[MASK] on revenue of ${context}.',
            'On sales of ${context} the unit earned $[MASK].',
        ],
        'log10_mean': -1.0, 'log10_sd': 0.1,
        'context_low': 4.0, 'context_high': 12.0,
    },
    {
        'name': 'ship_weight',
        'texts': [
            'The cargo ship weighs [MASK] tons.',
        ],
        'log10_mean': 4.5, 'log10_sd': 0.15,
        'held_out': True,
    },
    {
        'name': 'bridge_cost',
        'texts': [
            'The bridge cost $[MASK] to build.',
        ],
        'log10_mean': 8.5, 'log10_sd': 0.2,
        'held_out': True,
    },
]


class CorpusSpec(fields.Form):

    seed = fields.Integer(default=0).min(0)

    n_train = fields.Integer(default=20000).min(1)

    n_dev = fields.Integer(default=2000).min(1)

    n_test = fields.Integer(default=2000).min(1)

    #: Drawn from held-out templates only.
    n_transfer = fields.Integer(default=2000).min(0)

    templates = fields.List(
        fields.SubForm(TemplateSpec),
        default=lambda: [TemplateSpec(t) for t in DEFAULT_TEMPLATES],
        min_length=1,
    )


class ExperimentConfig(fields.Form):

    seed = fields.Integer(default=0).min(0)

    corpus = fields.SubForm(CorpusSpec)

    train = fields.SubForm(TrainConfig)

    heads = fields.List(
        fields.String(choices=HEAD_KINDS), default=list(HEAD_KINDS), min_length=1,
    )

    #: Normal quantile of the E-Acc confidence halfwidth.
    z = fields.Float(default=2.58).min(0, exclusive=True)

    bootstrap_k = fields.Integer(default=10).min(1)

    bootstrap_frac = fields.Float(default=0.75).min(0, exclusive=True).max(1)

    workers = fields.Integer(default=1).min(1)

    mantissa_bins = fields.Integer(default=18).min(2)


class RunConfig(fields.Form):
    """
    What the command line resolved for one invocation, written to the run
    manifest.
    """

    command = fields.String()

    seed = fields.Integer(default=0).min(0)

    out = fields.String(default=None)

    inputs = fields.List(fields.String(), default=list)

    params = fields.Field(default=dict)
