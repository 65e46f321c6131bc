"""
Numeric literal extraction and canonical decade decomposition.

Every in-range value `v` (1 <= v <= 10**16) decomposes as
`v = mantissa * 10**exponent` with `mantissa` in [1, 10), except 10**16
itself which is `(16, 1.0)`:

    .. code:: python

        >>> decompose(600)
        ParsedNumber(value=600, exponent=2, mantissa=6.0)

Integers are kept as Python `int` so values above 2**53 stay exact.
"""
import dataclasses
import enum
import logging
import math
import numbers
import re
import typing

from . import MIN_VALUE, MAX_VALUE, N_EXPONENTS, OutOfRange

__all__ = [
    'ParsedNumber',
    'NumberSpan',
    'SpanStatus',
    'decompose',
    'recompose',
    'extract',
    'canonical_decimal',
    'tokenize_text',
    'NUM_TOKEN',
    'MASK_TOKEN',
]

logger = logging.getLogger(__name__)

MASK_TOKEN = '[MASK]'

NUM_TOKEN = '[NUM]'

#: Powers of ten are exact doubles up to 10**22.
_POW10 = [10 ** k for k in range(N_EXPONENTS + 1)]


@dataclasses.dataclass(frozen=True)
class ParsedNumber:

    value: numbers.Real
    exponent: int
    mantissa: float


class SpanStatus(str, enum.Enum):

    OK = 'ok'
    NEGATIVE = 'negative'
    ZERO = 'zero'
    BELOW_RANGE = 'below_range'
    ABOVE_RANGE = 'above_range'
    MALFORMED = 'malformed'


@dataclasses.dataclass(frozen=True)
class NumberSpan:
    """
    `start`/`end` index the Python string; `byte_start`/`byte_end` index
    its UTF-8 encoding.
    """

    start: int
    end: int
    byte_start: int
    byte_end: int
    surface: str
    value: typing.Optional[float]
    status: SpanStatus
    parsed: typing.Optional[ParsedNumber] = None


def _check(value):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise OutOfRange(value)
    if isinstance(value, numbers.Integral):
        value = int(value)
    else:
        value = float(value)
        if not math.isfinite(value):
            raise OutOfRange(value)
    if value < MIN_VALUE or value > MAX_VALUE:
        raise OutOfRange(value)
    return value


def decompose(value):
    """
    Splits `value` into its `ParsedNumber` decade form.

    :raise OutOfRange: `value` is not a finite real in [1, 10**16].
    """
    value = _check(value)
    if isinstance(value, int):
        exponent = len(str(value)) - 1
    else:
        exponent = int(math.floor(math.log10(value)))
        # log10 is not exact near powers of ten (log10(1000) -> 2.9999...)
        while exponent > 0 and value < _POW10[exponent]:
            exponent -= 1
        while exponent < N_EXPONENTS - 1 and value >= _POW10[exponent + 1]:
            exponent += 1
    return ParsedNumber(value=value, exponent=exponent, mantissa=value / _POW10[exponent])


def recompose(exponent, mantissa):
    """
    Inverse of `decompose`: `mantissa * 10**exponent`.
    """
    if isinstance(exponent, bool) or not isinstance(exponent, numbers.Integral):
        raise OutOfRange(exponent, 0, N_EXPONENTS - 1)
    if not 0 <= exponent <= N_EXPONENTS - 1:
        raise OutOfRange(exponent, 0, N_EXPONENTS - 1)
    if not (isinstance(mantissa, numbers.Real) and math.isfinite(mantissa)):
        raise OutOfRange(mantissa, 1, 10)
    if exponent == N_EXPONENTS - 1:
        if mantissa != 1:
            raise OutOfRange(mantissa, 1, 1)
    elif not 1 <= mantissa < 10:
        raise OutOfRange(mantissa, 1, 10)
    return float(mantissa) * _POW10[exponent]


def canonical_decimal(value):
    """
    Decimal rendering shared by the notation renderers: integral values have
    no point, others use the shortest round-tripping representation.
    """
    if isinstance(value, numbers.Integral):
        return str(int(value))
    value = float(value)
    if value.is_integer():
        return str(int(value))
    text = repr(value)
    if 'e' in text or 'E' in text:
        text = format(value, 'f').rstrip('0')
    return text


NUMBER_RE = re.compile(
    r"""
    (?<![\w.,])                         # not inside a word or another literal
    (?P<currency>[$€£¥])?
    (?P<sign>[-+−])?
    (?P<number>
        \d(?:[\d,]*\d)?                 # grouping checked in _classify
        (?:\.\d+)?
        (?:[eE][-+]?\d+)?
    )
    """,
    re.VERBOSE,
)

GROUPED_RE = re.compile(r'\d{1,3}(?:,\d{3})+')

WORD_RE = re.compile(r'\[NUM\]|\[MASK\]|\w+|[^\w\s]')


def _classify(sign, text):
    integer = re.split(r'[.eE]', text, 1)[0]
    if ',' in integer and not GROUPED_RE.fullmatch(integer):
        return None, SpanStatus.MALFORMED
    try:
        value = float(text.replace(',', ''))
    except ValueError:
        return None, SpanStatus.MALFORMED
    if not math.isfinite(value):
        return None, SpanStatus.MALFORMED
    if sign in ('-', '−'):
        value = -value
    if value == 0:
        return value, SpanStatus.ZERO
    if value < 0:
        return value, SpanStatus.NEGATIVE
    if value < MIN_VALUE:
        return value, SpanStatus.BELOW_RANGE
    if value > MAX_VALUE:
        return value, SpanStatus.ABOVE_RANGE
    return value, SpanStatus.OK


def extract(text):
    """
    Finds every maximal numeric literal in `text`, left to right. A leading
    currency symbol is stripped from the surface; a sign is kept so that
    negative literals can be flagged.

    :return: list of `NumberSpan`; only `SpanStatus.OK` spans carry `parsed`.
    """
    spans = []
    for match in NUMBER_RE.finditer(text):
        start = match.start('sign') if match.group('sign') else match.start('number')
        end = match.end('number')
        surface = text[start:end]
        value, status = _classify(match.group('sign'), match.group('number'))
        parsed = None
        if status is SpanStatus.OK:
            literal = match.group('number').replace(',', '')
            if re.fullmatch(r'\d+', literal):
                parsed = decompose(int(literal))
            else:
                parsed = decompose(value)
        else:
            logger.debug('flagged literal surface=%r status=%s', surface, status.value)
        byte_start = len(text[:start].encode('utf-8'))
        spans.append(NumberSpan(
            start=start, end=end,
            byte_start=byte_start, byte_end=byte_start + len(surface.encode('utf-8')),
            surface=surface, value=value,
            status=status, parsed=parsed,
        ))
    return spans


def tokenize_text(text):
    """
    Lowercased word and punctuation tokens with every numeric literal
    replaced by `NUM_TOKEN`; in-range literals are returned as context
    numbers.

    :return: (tokens, list of `ParsedNumber`)
    """
    pieces, numbers_, last = [], [], 0
    for span in extract(text):
        pieces.append(text[last:span.start])
        pieces.append(' {0} '.format(NUM_TOKEN))
        if span.parsed is not None:
            numbers_.append(span.parsed)
        last = span.end
    pieces.append(text[last:])
    tokens = []
    for token in WORD_RE.findall(''.join(pieces)):
        tokens.append(token if token in (NUM_TOKEN, MASK_TOKEN) else token.lower())
    return tokens, numbers_
