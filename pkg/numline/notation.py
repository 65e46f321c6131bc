"""
Notation-change renderings of numbers as fixed-length token sequences and
their strict inverse.

    .. code:: python

        >>> to_digits(decompose(600)).tokens[:4]
        ('6', '0', '0', '[PAD]')
        >>> to_scientific(decompose(600)).stripped()
        ('6', 'e', '2')
        >>> to_scientific(decompose(329), NUMBERT).stripped()
        ('329', '[EXP]', '2')

`parse_tokens` only accepts what the renderer of the scheme could have
produced; anything else is `INVALID`.
"""
import dataclasses
import enum
import re
import typing

from . import MIN_VALUE, MAX_VALUE, Error, InvalidInput, OutOfRange
from .numparse import ParsedNumber, canonical_decimal, decompose

__all__ = [
    'Kind',
    'NotationScheme',
    'NumberToken',
    'Overflow',
    'INVALID',
    'to_digits',
    'to_subword',
    'to_scientific',
    'render',
    'parse_tokens',
    'SUBWORD_PAD8',
    'DIGIT_PAD17',
    'SCIENTIFIC_PAD8',
    'NUMBERT',
    'NUMBERT_X',
]

PAD_TOKEN = '[PAD]'

CONTINUATION = '##'

#: Significant digits kept by the scientific mantissa.
SCIENTIFIC_DIGITS = 4

PIECE_LEN = 3

DIGITS = tuple('0123456789')

_DECIMAL_RE = re.compile(r'[1-9]\d*(?:\.\d+)?')
_MANTISSA_RE = re.compile(r'[1-9](?:\.\d*[1-9])?')
_EXPONENT_RE = re.compile(r'0|[1-9]\d*')
_SIGNIFICAND_RE = re.compile(r'[1-9]\d*')


class Overflow(Error):

    def __init__(self, tokens, pad_len):
        super(Overflow, self).__init__(
            '{0} tokens do not fit pad length {1}: {2}'.format(
                len(tokens), pad_len, ' '.join(tokens),
            )
        )
        self.tokens = tokens


class _Invalid(object):
    """
    Result of parsing a token sequence the scheme could not have produced.
    """

    def __repr__(self):
        return 'INVALID'

    def __bool__(self):
        return False

    def __reduce__(self):
        return 'INVALID'


INVALID = _Invalid()


class Kind(str, enum.Enum):

    DECIMAL = 'decimal'
    DIGITS = 'digits'
    SCIENTIFIC = 'scientific'
    NUMBERT = 'numbert'


#: Shortest pad that fits every integer in range, per kind.
_MIN_PAD = {
    Kind.DECIMAL: -(-17 // PIECE_LEN),
    Kind.DIGITS: 17,
    Kind.SCIENTIFIC: 8,
    Kind.NUMBERT: 3,
}

_DEFAULT_SEPARATOR = {
    Kind.SCIENTIFIC: 'e',
    Kind.NUMBERT: '[EXP]',
}


@dataclasses.dataclass(frozen=True)
class NotationScheme:
    """
    `exp_separator` is used by the scientific and NumBERT kinds. A NumBERT
    scheme with separator ``x`` renders the lead-split variant
    ``3 x 29 2`` (lead digit, ``x``, remaining digits, exponent), with
    `include_exponent` controlling the trailing exponent token.
    """

    kind: Kind
    pad_len: int
    pad_token: str = PAD_TOKEN
    exp_separator: typing.Optional[str] = None
    include_exponent: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'kind', Kind(self.kind))
        if self.exp_separator is None:
            object.__setattr__(self, 'exp_separator', _DEFAULT_SEPARATOR.get(self.kind))
        if self.pad_token in DIGITS or self.pad_token in ('.', self.exp_separator):
            raise InvalidInput('pad token {0!r} collides with number tokens'.format(
                self.pad_token,
            ))
        if self.lead_split and self.exp_separator in DIGITS:
            raise InvalidInput('separator must not be a digit')
        minimum = _MIN_PAD[self.kind] + (1 if self.lead_split else 0)
        if not self.include_exponent:
            if not self.lead_split:
                raise InvalidInput('include_exponent=False needs the lead-split variant')
            minimum -= 1
        if self.pad_len < minimum:
            raise InvalidInput('{0} needs pad_len >= {1}, got {2}'.format(
                self.kind.value, minimum, self.pad_len,
            ))

    @property
    def lead_split(self):
        return self.kind is Kind.NUMBERT and self.exp_separator == 'x'

    @property
    def name(self):
        if self.lead_split:
            return 'numbert-x'
        return '{0}-pad{1}'.format(self.kind.value, self.pad_len)


@dataclasses.dataclass(frozen=True)
class NumberToken:

    tokens: typing.Tuple[str, ...]
    scheme: NotationScheme

    def stripped(self):
        return tuple(t for t in self.tokens if t != self.scheme.pad_token)


SUBWORD_PAD8 = NotationScheme(Kind.DECIMAL, 8)

DIGIT_PAD17 = NotationScheme(Kind.DIGITS, 17)

SCIENTIFIC_PAD8 = NotationScheme(Kind.SCIENTIFIC, 8)

NUMBERT = NotationScheme(Kind.NUMBERT, 8)

NUMBERT_X = NotationScheme(Kind.NUMBERT, 8, exp_separator='x')


def _parsed(n):
    return n if isinstance(n, ParsedNumber) else decompose(n)


def _pad(tokens, scheme):
    if len(tokens) > scheme.pad_len:
        raise Overflow(tokens, scheme.pad_len)
    tokens = tokens + [scheme.pad_token] * (scheme.pad_len - len(tokens))
    return NumberToken(tokens=tuple(tokens), scheme=scheme)


def to_digits(n, scheme=DIGIT_PAD17):
    """
    One token per character of the canonical decimal rendering.
    """
    return _pad(list(canonical_decimal(_parsed(n).value)), scheme)


def to_subword(n, scheme=SUBWORD_PAD8):
    """
    Word-piece style rendering: the canonical decimal cut left to right into
    pieces of at most 3 characters, continuations prefixed with ``##``.
    """
    text = canonical_decimal(_parsed(n).value)
    pieces = [text[i:i + PIECE_LEN] for i in range(0, len(text), PIECE_LEN)]
    tokens = pieces[:1] + [CONTINUATION + piece for piece in pieces[1:]]
    return _pad(tokens, scheme)


def _significand(n):
    text = canonical_decimal(n.value)
    if '.' in text:
        return text.replace('.', '').lstrip('0')
    return text.rstrip('0')


def to_scientific(n, scheme=SCIENTIFIC_PAD8):
    """
    Mantissa, separator, exponent. The scientific kind keeps at most 4
    significant mantissa digits, one token per character; the NumBERT kind
    keeps every significant digit in a single token.
    """
    n = _parsed(n)
    if scheme.kind is Kind.NUMBERT:
        return _to_numbert(n, scheme)
    if scheme.kind is not Kind.SCIENTIFIC:
        raise InvalidInput('{0} is not a scientific scheme'.format(scheme.name))
    mantissa, exponent = format(n.value, '.{0}e'.format(SCIENTIFIC_DIGITS - 1)).split('e')
    if '.' in mantissa:
        mantissa = mantissa.rstrip('0').rstrip('.')
    tokens = list(mantissa) + [scheme.exp_separator] + list(str(int(exponent)))
    return _pad(tokens, scheme)


def _to_numbert(n, scheme):
    significand = _significand(n)
    if not scheme.lead_split:
        return _pad([significand, scheme.exp_separator, str(n.exponent)], scheme)
    if scheme.include_exponent:
        rest = significand[1:]
    else:
        text = canonical_decimal(n.value)
        if '.' in text:
            raise InvalidInput(
                '{0} needs an exponent token for non-integers'.format(text)
            )
        rest = text[1:]
    tokens = [significand[0], scheme.exp_separator]
    if rest:
        tokens.append(rest)
    if scheme.include_exponent:
        tokens.append(str(n.exponent))
    return _pad(tokens, scheme)


def render(n, scheme):
    """
    Renders `n` (a `ParsedNumber` or an in-range value) under `scheme`.

    :raise Overflow: the rendering does not fit `scheme.pad_len`.
    """
    if scheme.kind is Kind.DIGITS:
        return to_digits(n, scheme)
    if scheme.kind is Kind.DECIMAL:
        return to_subword(n, scheme)
    return to_scientific(n, scheme)


def _number(text):
    if not _DECIMAL_RE.fullmatch(text):
        return INVALID
    return float(text) if '.' in text else int(text)


def _decode_chars(tokens):
    if not all(len(t) == 1 for t in tokens):
        return INVALID
    return _number(''.join(tokens))


def _decode_subword(tokens):
    if not tokens or tokens[0].startswith(CONTINUATION):
        return INVALID
    pieces = [tokens[0]]
    for token in tokens[1:]:
        if not token.startswith(CONTINUATION):
            return INVALID
        pieces.append(token[len(CONTINUATION):])
    return _number(''.join(pieces))


def _decode_scientific(tokens, scheme):
    if tokens.count(scheme.exp_separator) != 1:
        return INVALID
    i = tokens.index(scheme.exp_separator)
    mantissa, exponent = tokens[:i], tokens[i + 1:]
    if not all(len(t) == 1 for t in mantissa + exponent):
        return INVALID
    mantissa, exponent = ''.join(mantissa), ''.join(exponent)
    if not (_MANTISSA_RE.fullmatch(mantissa) and _EXPONENT_RE.fullmatch(exponent)):
        return INVALID
    if len(exponent) > 2:
        return INVALID
    return float('{0}e{1}'.format(mantissa, exponent))


def _from_significand(significand, exponent):
    shift = exponent - (len(significand) - 1)
    if shift >= 0:
        return int(significand) * 10 ** shift
    return float('{0}.{1}e{2}'.format(significand[0], significand[1:], exponent))


def _decode_numbert(tokens, scheme):
    sep = scheme.exp_separator
    if not scheme.lead_split:
        if len(tokens) != 3 or tokens[1] != sep:
            return INVALID
        significand, exponent = tokens[0], tokens[2]
    else:
        if len(tokens) < 2 or tokens[1] != sep or tokens[0] not in DIGITS[1:]:
            return INVALID
        tail = list(tokens[2:])
        if scheme.include_exponent:
            if not tail:
                return INVALID
            exponent = tail.pop()
        if len(tail) > 1:
            return INVALID
        rest = tail[0] if tail else ''
        if not re.fullmatch(r'\d*', rest):
            return INVALID
        if not scheme.include_exponent:
            return int(tokens[0] + rest)
        significand = tokens[0] + rest
    if not (_SIGNIFICAND_RE.fullmatch(significand) and _EXPONENT_RE.fullmatch(exponent)):
        return INVALID
    if len(exponent) > 2:
        return INVALID
    return _from_significand(significand, int(exponent))


def parse_tokens(t, scheme=None):
    """
    Strict inverse of `render`.

    :param t: a `NumberToken`, or a token sequence together with `scheme`.
    :return: `ParsedNumber`, or `INVALID` for any sequence the renderer of
        the scheme would not emit (stray pads, repeated separators, empty
        mantissa, out-of-range values, non-canonical digits).
    """
    if isinstance(t, NumberToken):
        tokens, scheme = tuple(t.tokens), t.scheme
    else:
        tokens = tuple(t)
    if scheme is None:
        raise InvalidInput('scheme is required for raw token sequences')
    if len(tokens) != scheme.pad_len:
        return INVALID
    pad = scheme.pad_token
    core = tokens.index(pad) if pad in tokens else len(tokens)
    if any(token != pad for token in tokens[core:]):
        return INVALID
    core = list(tokens[:core])
    if not core:
        return INVALID

    if scheme.kind is Kind.DIGITS:
        value = _decode_chars(core)
    elif scheme.kind is Kind.DECIMAL:
        value = _decode_subword(core)
    elif scheme.kind is Kind.SCIENTIFIC:
        value = _decode_scientific(core, scheme)
    else:
        value = _decode_numbert(core, scheme)
    if value is INVALID or not MIN_VALUE <= value <= MAX_VALUE:
        return INVALID

    parsed = decompose(value)
    try:
        if render(parsed, scheme).tokens != tokens:
            return INVALID
    except (Overflow, OutOfRange, InvalidInput):
        return INVALID
    return parsed
