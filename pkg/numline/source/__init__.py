"""
A `Source` is where a configuration `Form` resolves and parses its values
from. There is a `DefaultSource` for native containers (dicts, lists,
tuples) and primitives, a `JsonSource` for JSON config files, and a
`UnionSource` which layers several sources so that, e.g., command-line
flags shadow the keys of a config file:

    .. code:: python

        src = UnionSource([
            DefaultSource({'train': {'lr_new': '0.02'}}, location='flags'),
            JsonSource.from_file('experiment.json'),
        ])
        config = ExperimentConfig(src)

"""
import collections.abc

from .. import NONE

__all__ = [
    'SourceError',
    'Path',
    'Source',
    'DefaultSource',
    'JsonSource',
    'UnionSource',
]


class SourceError(Exception):
    """
    Base class for all `Source` errors.
    """

    def __init__(self, path, message):
        super(SourceError, self).__init__(
            '{0} - {1}'.format(path, message) if str(path) else message
        )
        self.path = path
        self.message = message


class Path(collections.abc.MutableSequence):
    """
    Represents a path (list of keys and indices) to a value within a
    `Source`.

    `src`
        The source this path resolves against.

    `root`
        The root container of `src`.

    `location`
        Optional label (e.g. a file name) prefixed to `str(path)`.

    """

    def __init__(self, src, root, location=None):
        self.src = src
        self.root = root
        self.location = location
        self.parts = []

    def __str__(self):
        text = ''
        for i, key in enumerate(self.parts):
            if isinstance(key, int):
                text += '[{0}]'.format(key)
            else:
                text += key if i == 0 else '.' + key
        if self.location:
            return '{0}:{1}'.format(self.location, text)
        return text

    @property
    def value(self):
        value = self.root
        for key in self.parts:
            value = self.resolve(value, key)
            if value is NONE:
                break
        return value

    def resolve(self, container, key):
        raise NotImplementedError()

    @property
    def name(self):
        return self.parts[-1]

    @property
    def exists(self):
        return self.value is not NONE

    @property
    def is_null(self):
        return self.value is None

    def primitive(self, *types):
        return self.src.primitive(self, *types)

    def sequence(self):
        return self.src.sequence(self)

    def mapping(self):
        return self.src.mapping(self)

    # collections.abc.Sequence

    def __getitem__(self, index):
        return self.parts[index]

    def __len__(self):
        return len(self.parts)

    # collections.abc.MutableSequence

    def __setitem__(self, index, key):
        self.parts[index] = key

    def __delitem__(self, index):
        del self.parts[index]

    def insert(self, index, key):
        self.parts.insert(index, key)


class Source(object):
    """
    Interface for creating paths and resolving them to primitives (string,
    integer, float, boolean) and containers (sequence, mapping).
    """

    #: Used to construct an error when resolving a path for this source fails.
    error = SourceError

    def path(self):
        """
        Constructs a root path for this source.
        """
        raise NotImplementedError()

    def mapping(self, path):
        """
        Resolves a path to the keys of a mapping within this source.
        """
        raise NotImplementedError('{0} does not support mappings!'.format(type(self)))

    def sequence(self, path):
        """
        Resolves a path to the length of a sequence within this source.
        """
        raise NotImplementedError('{0} does not support sequences!'.format(type(self)))

    def primitive(self, path, *types):
        """
        Resolves a path to a primitive within this source. If no type is given
        then it'll be inferred if possible.
        """
        raise NotImplementedError('{0} does not support primitives!'.format(type(self)))


class ParserMixin(object):
    """
    Mixin for adding lenient primitive parsing to a `Source`: strings such as
    flag values ("32", "3e-5", "true") are coerced to the requested type.
    """

    def as_string(self, path, value):
        if isinstance(value, str):
            return value
        raise self.error(path, '"{0}" is not a string'.format(value))

    def as_int(self, path, value):
        if isinstance(value, bool):
            raise self.error(path, '"{0}" is not an integer'.format(value))
        if isinstance(value, int):
            return value
        if isinstance(value, float):
            if not value.is_integer():
                raise self.error(path, '"{0}" is not an integer'.format(value))
            return int(value)
        if isinstance(value, str):
            try:
                return int(value)
            except ValueError:
                pass
        raise self.error(path, '"{0}" is not an integer'.format(value))

    def as_float(self, path, value):
        if isinstance(value, bool):
            raise self.error(path, '"{0}" is not a float'.format(value))
        if isinstance(value, (int, float)):
            return float(value)
        if isinstance(value, str):
            try:
                return float(value)
            except ValueError:
                pass
        raise self.error(path, '"{0}" is not a float'.format(value))

    def as_bool(self, path, value):
        if isinstance(value, bool):
            return value
        if isinstance(value, int):
            return value != 0
        if isinstance(value, str):
            if value.lower() in ('0', 'f', 'false', 'no'):
                return False
            if value.lower() in ('1', 't', 'true', 'yes'):
                return True
        raise self.error(path, '"{0}" is not a boolean'.format(value))

    def as_auto(self, path, value):
        return value

    parsers = {
        str: as_string,
        int: as_int,
        float: as_float,
        bool: as_bool,
        None: as_auto,
    }

    def parser(self, types):
        if not types:
            types = [None]
        for t in types:
            if t in self.parsers:
                return getattr(self, self.parsers[t].__name__)
        raise ValueError('No parser for type(s) {0}'.format(types))


from .default import DefaultSource, DefaultPath
from .json import JsonSource, JsonPath
from .union import UnionSource, UnionPath
