import collections.abc

from . import Path, Source, NONE, DefaultSource


class UnionPath(Path):

    def __init__(self, src, paths):
        super(UnionPath, self).__init__(src, root=None)
        self.paths = paths

    def __str__(self):
        path = self.first
        if path is not None:
            return str(path)
        return super(UnionPath, self).__str__()

    @property
    def first(self):
        """
        First member path that resolves to a value, or None.
        """
        for path in self.paths:
            if path.exists:
                return path
        return None

    # Path

    @property
    def value(self):
        path = self.first
        return NONE if path is None else path.value

    # collections.abc.MutableSequence

    def __setitem__(self, index, key):
        super(UnionPath, self).__setitem__(index, key)
        for path in self.paths:
            path[index] = key

    def __delitem__(self, index):
        super(UnionPath, self).__delitem__(index)
        for path in self.paths:
            del path[index]

    def insert(self, index, key):
        super(UnionPath, self).insert(index, key)
        for path in self.paths:
            path.insert(index, key)


class UnionSource(Source):
    """
    Layers `srcs` in priority order: a primitive or sequence comes from the
    first source defining it, mapping keys are the union over all sources.
    """

    def __init__(self, srcs):
        super(UnionSource, self).__init__()
        srcs = list(srcs)
        for i, src in enumerate(srcs):
            if isinstance(src, Source):
                continue
            if isinstance(src, collections.abc.Mapping):
                srcs[i] = DefaultSource(src)
                continue
            raise TypeError(
                'src[{0}]={1!r} is not Source or mapping'.format(i, src)
            )
        self.srcs = srcs

    # Source

    def path(self):
        return UnionPath(self, [src.path() for src in self.srcs])

    def mapping(self, path):
        keys, found = [], False
        for member in path.paths:
            if not member.exists or member.is_null:
                continue
            try:
                member_keys = member.mapping()
            except member.src.error:
                continue
            found = True
            keys.extend(key for key in member_keys if key not in keys)
        if not found:
            raise self.error(path, 'not a mapping')
        return keys

    def sequence(self, path):
        member = path.first
        if member is None:
            raise self.error(path, 'not a sequence')
        return member.sequence()

    def primitive(self, path, *types):
        member = path.first
        if member is None:
            return NONE
        return member.primitive(*types)
