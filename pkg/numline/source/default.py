import collections.abc

from . import Source, Path, ParserMixin, NONE


class DefaultPath(Path):

    def __init__(self, src, location=None):
        super(DefaultPath, self).__init__(src, src.data, location)

    def resolve(self, container, key):
        try:
            return container[key]
        except (IndexError, KeyError, TypeError):
            pass
        # dotted keys address nested mappings, e.g. {'train.lr_new': ...}
        if isinstance(key, str) and '.' in key:
            value = container
            for atom in key.split('.'):
                value = self.resolve(value, atom)
                if value is NONE:
                    break
            return value
        return NONE


class DefaultSource(Source, ParserMixin):

    def __init__(self, data, location=None):
        self.data = data
        self.location = location

    # Source

    def path(self):
        return DefaultPath(self, self.location)

    def sequence(self, path):
        value = path.value
        if isinstance(value, (list, tuple)):
            return len(value)
        raise self.error(path, 'is not a sequence')

    def mapping(self, path):
        value = path.value
        if isinstance(value, collections.abc.Mapping):
            return list(value.keys())
        raise self.error(path, 'is not a mapping')

    def primitive(self, path, *types):
        return self.parser(types)(path, path.value)
