"""
This defines `Form` and the `Field`s used to declare run configurations.
Use it like:

    .. code:: python

        from numline import fields

        class Optim(fields.Form):

            lr = fields.Float(default=1e-2).min(0)

            epochs = fields.Integer(default=10).min(1)

            patience = fields.Integer(default=3).min(1)

            @patience.validate
            def patience(self, value):
                if 'epochs' in self and value >= self.epochs:
                    self.ctx.errors.invalid('must be < epochs')
                    return False
                return True

        optim = Optim({'lr': '0.02'})
        print(optim.lr, optim.epochs)  # 0.02 10

A mapped form is a plain `dict`, so it serializes straight to JSON.
"""
import copy
import inspect

from . import (
    NONE, NOT_SET, ERROR, IGNORE, ctx, ContextMixin, Close, Source, SourceError,
    DefaultSource,
)

__all__ = [
    'Field',
    'String',
    'Integer',
    'Float',
    'Boolean',
    'List',
    'SubForm',
    'Form',
]


class FieldError(ValueError):

    def __init__(self, message, field):
        super(FieldError, self).__init__(message)
        self.field = field
        self.path = str(ctx.src_path)


class Missing(FieldError):

    def __init__(self, field):
        super(Missing, self).__init__(
            '{0} - missing'.format(ctx.src_path), field,
        )


class Invalid(FieldError):

    def __init__(self, field, violation):
        super(Invalid, self).__init__(
            '{0} - {1}'.format(ctx.src_path, violation), field,
        )
        self.violation = violation


class Errors(object):

    def __call__(self, *ex):
        raise NotImplementedError

    def missing(self):
        return self(Missing(ctx.field))

    def invalid(self, violation):
        return self(Invalid(ctx.field, violation))


class RaiseErrors(list, Errors):

    def __call__(self, *ex):
        self.extend(ex)
        raise ex[0]


class CollectErrors(list, Errors):

    def __call__(self, *ex):
        self.extend(ex)


class CreatedCountMixin(object):
    """
    Adds a `._count` used to sort instances in creation order.
    """

    _created_count = 0

    def __init__(self):
        CreatedCountMixin._created_count += 1
        self._count = CreatedCountMixin._created_count


class Hook(object):
    """
    Override-able step of `Field.map`. Registering a function keeps the
    class attribute bound to the field:

    .. code:: python

        class Form(fields.Form):

            text = fields.String()

            @text.munge
            def text(self, value):
                return value.strip()

    """

    def __init__(self, parent, spec):
        self.parent = parent
        self.func = None
        self.arity = len(inspect.signature(spec).parameters)

    def __bool__(self):
        return self.func is not None

    def __call__(self, *args):
        # register
        if self.func is None and len(args) == 1 and callable(args[0]):
            func = args[0]
            # the form instance comes first
            if len(inspect.signature(func).parameters) != self.arity + 1:
                raise TypeError('{0} signature does not match {1} hook'.format(
                    func.__name__, self.parent,
                ))
            self.func = func
            return self.parent

        # invoke
        return self.func(ctx.form, *args)


class Field(CreatedCountMixin, ContextMixin):
    """
    A field maps a value from a `Source` to a named form entry in these steps:

        - resolve (push `src` onto `ctx`)
        - compute (see `Field._compute`, which calls `Field._parse`)
        - munge  (see `Field._munge` and the `munge` hook)
        - validate  (see `Field._validate` and the `validate` hook)

    `name`
        The attribute name of this field in its `Form`.

    `src`
        The key of this field in a `Source`, defaults to `name`.

    `default`
        Used when `src` is absent. A callable is called, containers are
        copied. Without a default a missing key is an error.

    `nullable`
        Whether None is acceptable. Defaults to True when `default` is None.

    """

    def __init__(self, src=NONE, **options):
        super(Field, self).__init__()
        self.munge = Hook(self, self._munge)
        self.validate = Hook(self, self._validate)
        self.parent = None
        self.name = None
        self.src = src
        self.default = NOT_SET
        self.nullable = False
        self.options(**options)

    def options(self, nullable=NOT_SET, default=NOT_SET, optional=NOT_SET):
        if nullable is not NOT_SET:
            self.nullable = nullable
        if optional is not NOT_SET and optional:
            self.default = NONE
        if default is not NOT_SET:
            self.default = default
            if default is None:
                self.nullable = True
        return self

    def __str__(self):
        return '{0}(name={1}, src={2})'.format(type(self).__name__, self.name, self.src)

    def attach(self, parent, name=None):
        self.parent, self.name = parent, name
        if self.src is NONE:
            self.src = self.name
        return self

    @property
    def is_attached(self):
        return self.parent is not None

    def _compute(self):
        src_path = self.ctx.src_path
        if not src_path.exists:
            return NONE
        if src_path.is_null:
            return None
        try:
            return self._parse(src_path)
        except (SourceError, ValueError) as ex:
            if isinstance(ex, FieldError):
                raise
            self.ctx.errors.invalid(getattr(ex, 'message', str(ex)))
            return ERROR

    def _resolve(self):
        if self.src in (None, NONE):
            return Close.dummy
        return self.ctx(src=self.src)

    def _parse(self, path):
        return path.primitive()

    def _munge(self, value):
        return value

    def _validate(self, value):
        if value is None and not self.nullable:
            self.ctx.errors.invalid('not nullable')
            return False
        return True

    def _default(self):
        if self.default is NOT_SET:
            self.ctx.errors.missing()
            return NOT_SET
        if self.default in IGNORE:
            return self.default
        if callable(self.default):
            return self.default()
        return copy.deepcopy(self.default)

    def map(self):
        """
        Maps this field's value from `ctx.src`.

        :return: The mapped value or:

            - NONE if absent without default
            - ERROR if present but invalid.

        """
        with self.ctx(field=self), self._resolve():
            value = self._compute()
            if value is NONE:
                return self._default()
            if value in IGNORE:
                return value
            value = self._munge(value)
            if self.munge:
                value = self.munge(value)
            if not self._validate(value) or (self.validate and not self.validate(value)):
                return ERROR
        return value

    #: Alias for `map`.
    __call__ = map

    def __get__(self, form, form_type=None):
        if form is None:
            return self
        try:
            return form[self.name]
        except KeyError:
            raise AttributeError(
                '"{0}" form has no value for field "{1}"'.format(
                    type(form).__name__, self.name,
                )
            )

    def __set__(self, form, value):
        form[self.name] = value

    def __delete__(self, form):
        form.pop(self.name, None)


class String(Field):

    def __init__(self, *args, **kwargs):
        self.min_length = kwargs.pop('min_length', None)
        self.choices = kwargs.pop('choices', None)
        super(String, self).__init__(*args, **kwargs)

    def _parse(self, path):
        return path.primitive(str)

    def _validate(self, value):
        if not super(String, self)._validate(value):
            return False
        if value is None:
            return True
        if self.min_length is not None and len(value) < self.min_length:
            self.ctx.errors.invalid('"{0}" must have length >= {1}'.format(
                value, self.min_length
            ))
            return False
        if self.choices and value not in self.choices:
            self.ctx.errors.invalid('"{0}" is not one of {1}'.format(
                value, ', '.join('"{0}"'.format(c) for c in self.choices),
            ))
            return False
        return True


class Number(Field):

    def __init__(self, *args, **kwargs):
        self.min_value = kwargs.pop('min_value', None)
        self.max_value = kwargs.pop('max_value', None)
        self.exclusive_min = kwargs.pop('exclusive_min', False)
        super(Number, self).__init__(*args, **kwargs)

    def min(self, value, exclusive=False):
        self.min_value = value
        self.exclusive_min = exclusive
        return self

    def max(self, value):
        self.max_value = value
        return self

    def range(self, l, r):
        return self.min(l).max(r)

    def _validate(self, value):
        if not super(Number, self)._validate(value):
            return False
        if value is None:
            return True
        if self.min_value is not None:
            if value < self.min_value or (self.exclusive_min and value == self.min_value):
                self.ctx.errors.invalid('"{0}" must be {1} {2}'.format(
                    value, '>' if self.exclusive_min else '>=', self.min_value
                ))
                return False
        if self.max_value is not None and value > self.max_value:
            self.ctx.errors.invalid('"{0}" must be <= {1}'.format(
                value, self.max_value
            ))
            return False
        return True


class Integer(Number):

    def _parse(self, path):
        return path.primitive(int)


class Float(Number):

    def _parse(self, path):
        return path.primitive(float)


class Boolean(Field):

    def _parse(self, path):
        return path.primitive(bool)


class List(Field):

    def __init__(self, field, *args, **kwargs):
        if inspect.isclass(field) and issubclass(field, Form):
            field = SubForm(field)
        if not isinstance(field, Field):
            raise TypeError('{0!r} is not a field'.format(field))
        self.field = field.attach(self, None)
        self.min_length = kwargs.pop('min_length', None)
        self.max_length = kwargs.pop('max_length', None)
        super(List, self).__init__(*args, **kwargs)

    def _parse(self, path):
        value = []
        for i in range(path.sequence()):
            with self.ctx(src=i):
                item = self.field.map()
            if item is ERROR:
                return ERROR
            if item in IGNORE:
                continue
            value.append(item)
        return value

    def _validate(self, value):
        if not super(List, self)._validate(value):
            return False
        if value is None:
            return True
        if self.min_length is not None and len(value) < self.min_length:
            self.ctx.errors.invalid('must have {0} or more items'.format(self.min_length))
            return False
        if self.max_length is not None and len(value) > self.max_length:
            self.ctx.errors.invalid('must have {0} or fewer items'.format(self.max_length))
            return False
        return True


class SubForm(Field):
    """
    Nests a `Form`. When the key is absent and no default is given the nested
    form is mapped from an empty mapping, so its own field defaults apply.
    """

    def __init__(self, form_type, *args, **kwargs):
        if not (inspect.isclass(form_type) and issubclass(form_type, Form)):
            raise TypeError('{0!r} is not a form type'.format(form_type))
        self.form_type = form_type
        super(SubForm, self).__init__(*args, **kwargs)
        if self.default is NOT_SET:
            self.default = form_type.defaults

    def _parse(self, path):
        form = self.form_type()
        errors = form.map()
        if errors:
            return ERROR
        return form


class FormMeta(type):
    """
    Registers a `Form`'s fields: each is attached under its attribute name
    and `cls.fields` lists them in declaration order.
    """

    def __new__(mcs, name, bases, dikt):
        cls = type.__new__(mcs, name, bases, dikt)
        fields, field_ids = [], set()
        for attr, field in inspect.getmembers(cls, lambda x: isinstance(x, Field)):
            if not field.is_attached:
                field.attach(cls, attr)
            if id(field) not in field_ids:
                fields.append(field)
                field_ids.add(id(field))
        fields.sort(key=lambda x: x._count)
        cls.fields = fields
        return cls


class Form(dict, CreatedCountMixin, ContextMixin, metaclass=FormMeta):
    """
    A `dict` with an associated list of attached fields, mapped from a
    `Source`:

    .. code:: python

        config = TrainConfig({'batch_size': 16})
        config = TrainConfig(JsonSource.from_file('train.json'))

    Constructing with a source raises the first `FieldError`; use `map` with
    `error='collect'` to get all of them.
    """

    fields = None

    @classmethod
    def defaults(cls):
        return cls({})

    def __init__(self, *args, **kwargs):
        CreatedCountMixin.__init__(self)
        src = None
        if args:
            src, args = args[0], args[1:]
        elif kwargs:
            src, kwargs = kwargs, {}
        dict.__init__(self, *args, **kwargs)
        if src is not None:
            errors = self.map(src)
            if errors:
                raise errors[0]

    def _map(self):
        self.ctx.src_path.mapping()
        with self.ctx(form=self):
            for field in type(self).fields:
                value = field.map()
                if value not in IGNORE:
                    self[field.name] = value

    def map(self, src=None, error='collect'):
        errors = (CollectErrors if error == 'collect' else RaiseErrors)()
        if src is None and self.ctx.src is not None:
            # nested in a parent form, share its source
            with self.ctx(errors=errors):
                try:
                    self._map()
                except SourceError as ex:
                    self.ctx.errors.invalid(ex.message)
            self.ctx.errors.extend(errors)
        else:
            if src is None:
                src = {}
            if not isinstance(src, Source):
                src = DefaultSource(src)
            with self.ctx(src=src, errors=errors, field=None):
                try:
                    self._map()
                except SourceError as ex:
                    self.ctx.errors(Invalid(None, ex.message))
        if error == 'collect':
            return errors
        if errors:
            raise errors[0]
        return self
