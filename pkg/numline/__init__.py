"""
Number-aware tokenization and number decoding for masked number prediction.
"""
__version__ = '0.1.0'

__all__ = [
    'NOT_SET',
    'NONE',
    'ERROR',
    'IGNORE',
    'MIN_VALUE',
    'MAX_VALUE',
    'N_EXPONENTS',
    'Error',
    'OutOfRange',
    'EmptyInput',
    'InvalidInput',
    'LengthMismatch',
    'IndexOutOfRange',
    'ctx',
    'source',
    'Source',
    'SourceError',
    'fields',
    'Field',
    'FieldError',
    'Form',
    'numparse',
    'notation',
    'binning',
    'dexp',
    'metrics',
    'analysis',
]


class _Constant(object):

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return '{0}("{1}")'.format(type(self).__name__, self.name)


NOT_SET = _Constant('NOT_SET')

NONE = _Constant('NONE')

ERROR = _Constant('ERROR')

IGNORE = (NONE, ERROR, NOT_SET)

#: Closed range every corpus number must lie in.
MIN_VALUE = 1

MAX_VALUE = 10 ** 16

#: Exponents 0..16.
N_EXPONENTS = 17


class Error(ValueError):
    """
    Base class for all `numline` domain errors.
    """


class OutOfRange(Error):

    def __init__(self, value, lower=MIN_VALUE, upper=MAX_VALUE):
        super(OutOfRange, self).__init__(
            '{0!r} is not in [{1}, {2}]'.format(value, lower, upper)
        )
        self.value = value


class EmptyInput(Error):

    def __init__(self, what='values'):
        super(EmptyInput, self).__init__('{0} must not be empty'.format(what))


class InvalidInput(Error):
    pass


class LengthMismatch(Error):

    def __init__(self, left, right):
        super(LengthMismatch, self).__init__(
            'length mismatch {0} != {1}'.format(left, right)
        )
        self.left, self.right = left, right


class IndexOutOfRange(Error):

    def __init__(self, index, size):
        super(IndexOutOfRange, self).__init__(
            'index {0} not in [0, {1})'.format(index, size)
        )
        self.index = index


from . import source
from .source import Source, SourceError, DefaultSource, UnionSource
from .context import ctx, ContextMixin, Close
from . import fields
from .fields import Field, FieldError, Missing, Invalid, Form
from . import numparse, notation, binning, dexp, metrics, analysis
