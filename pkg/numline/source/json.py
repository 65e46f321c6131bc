import json

from . import Source, Path, ParserMixin, NONE


class JsonPath(Path):

    def __init__(self, src, location=None):
        super(JsonPath, self).__init__(src, src.data, location=location)

    def resolve(self, container, key):
        try:
            return container[key]
        except (IndexError, KeyError, TypeError):
            return NONE


class JsonSource(Source, ParserMixin):
    """
    JSON document source. With `strict` values must already have the JSON
    type a field asks for; otherwise strings are coerced like flags are.
    """

    @classmethod
    def from_file(cls, path, **kwargs):
        kwargs.setdefault('location', path)
        with open(path, 'r', encoding='utf-8') as fo:
            return cls(fo.read(), **kwargs)

    def __init__(self, text, strict=False, location=None):
        super(JsonSource, self).__init__()
        self.strict = strict
        self.location = location
        self.text = text
        try:
            self.data = json.loads(text)
        except ValueError as ex:
            raise self.error(location or '<json>', 'invalid json: {0}'.format(ex))

    def as_int(self, path, value):
        if self.strict and isinstance(value, str):
            raise self.error(path, '{0} is not an integer'.format(value))
        return super(JsonSource, self).as_int(path, value)

    def as_float(self, path, value):
        if self.strict and isinstance(value, str):
            raise self.error(path, '{0} is not a float'.format(value))
        return super(JsonSource, self).as_float(path, value)

    # Source

    def path(self):
        return JsonPath(self, self.location)

    def sequence(self, path):
        if not isinstance(path.value, list):
            raise self.error(path, 'not a sequence')
        return len(path.value)

    def mapping(self, path):
        if not isinstance(path.value, dict):
            raise self.error(path, 'not a mapping')
        return list(path.value.keys())

    def primitive(self, path, *types):
        return self.parser(types)(path, path.value)
