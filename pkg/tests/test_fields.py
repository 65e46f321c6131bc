import json

import numline
from numline import config, fields

from tests import TestCase


class TestForm(TestCase):

    def test_basic(self):

        class MySubForm(fields.Form):

            sfield1 = fields.Float(default=12.0)

            sfield2 = fields.List(fields.Integer().min(10), default=None)

        class MyForm(fields.Form):

            field1 = fields.Integer().min(10).max(100)

            @field1.munge
            def field1(self, value):
                return value + 1

            field2 = fields.Boolean('ff2', default=None)

            field3 = fields.SubForm(MySubForm, 'payload')

        form = MyForm({
            'field1': 55,
            'ff2': 't',
            'payload': {
                'sfield2': ['11', 456],
            }
        })
        self.assertDictEqual(form, {
            'field1': 56,
            'field2': True,
            'field3': {
                'sfield1': 12.0,
                'sfield2': [11, 456],
            }
        })
        self.assertEqual(form.field3.sfield1, 12.0)

    def test_defaults(self):

        class MyForm(fields.Form):

            a = fields.Integer(default=3)

            b = fields.List(fields.String(), default=list)

            c = fields.String(default=None)

        form = MyForm.defaults()
        self.assertEqual(form, {'a': 3, 'b': [], 'c': None})
        other = MyForm.defaults()
        other.b.append('x')
        self.assertEqual(form.b, [])

    def test_collect(self):

        class MyForm(fields.Form):

            a = fields.Integer()

            b = fields.String(choices=['x', 'y'])

            c = fields.Float(default=1.0).min(0, exclusive=True)

        form = MyForm()
        errors = form.map({'b': 'z', 'c': 0})
        self.assertEqual(
            [type(e) for e in errors], [numline.fields.Missing, numline.fields.Invalid, numline.fields.Invalid],
        )
        self.assertEqual(
            [str(e) for e in errors],
            ['a - missing', 'b - "z" is not one of "x", "y"', 'c - "0.0" must be > 0'],
        )

    def test_raise(self):

        class MyForm(fields.Form):

            a = fields.Integer().range(1, 5)

        with self.assertRaises(numline.fields.Invalid) as ex:
            MyForm({'a': 7})
        self.assertEqual(str(ex.exception), 'a - "7" must be <= 5')
        self.assertEqual(ex.exception.path, 'a')
        with self.assertRaises(numline.fields.Invalid):
            MyForm().map({'a': 'seven'}, error='raise')

    def test_nested_path(self):
        with self.assertRaises(numline.FieldError) as ex:
            config.ExperimentConfig({'train': {'max_epochs': 4, 'patience': 4}})
        self.assertEqual(str(ex.exception), 'train.patience - must be < max_epochs (4)')

    def test_list_item_path(self):
        templates = [dict(t) for t in config.DEFAULT_TEMPLATES]
        templates[1] = dict(templates[1], texts=['no mask here'])
        errors = config.CorpusSpec().map({'templates': templates})
        self.assertEqual(len(errors), 1)
        self.assertTrue(str(errors[0]).startswith('templates[1].texts - '))

    def test_nullable(self):

        class MyForm(fields.Form):

            a = fields.String()

        errors = MyForm().map({'a': None})
        self.assertEqual([str(e) for e in errors], ['a - not nullable'])

    def test_hook_signature(self):
        field = fields.String()
        with self.assertRaises(TypeError):
            @field.validate
            def field(value):
                return True

    def test_json(self):
        experiment = config.ExperimentConfig({'seed': '9'})
        doc = json.loads(json.dumps(experiment))
        self.assertEqual(doc['seed'], 9)
        self.assertEqual(doc['train']['batch_size'], 32)
        self.assertEqual(len(doc['corpus']['templates']), len(config.DEFAULT_TEMPLATES))


class TestConfig(TestCase):

    def test_train_defaults(self):
        train = config.TrainConfig.defaults()
        self.assertEqual(train, {
            'batch_size': 32,
            'max_epochs': 10,
            'patience': 3,
            'lr_pretrained': 3e-5,
            'lr_new': 1e-2,
            'dim': 64,
            'freq_bins': 21,
            'seed': 0,
        })

    def test_heads(self):
        with self.assertRaises(numline.FieldError):
            config.ExperimentConfig({'heads': ['dexp', 'gpt']})
        with self.assertRaises(numline.FieldError):
            config.ExperimentConfig({'heads': []})
        experiment = config.ExperimentConfig({'heads': ['dexp']})
        self.assertEqual(experiment.heads, ['dexp'])

    def test_relative_template(self):
        with self.assertRaises(numline.FieldError):
            config.TemplateSpec({
                'name': 'profit', 'kind': 'relative', 'texts': ['Profit was $[MASK].'],
            })
        spec = config.TemplateSpec({
            'name': 'profit', 'kind': 'relative', 'texts': ['$[MASK] on ${context}.'],
        })
        self.assertEqual(spec.context_low, 3.0)

    def test_run_config(self):
        run = config.RunConfig({'command': 'eval', 'params': {'z': 2.58}})
        self.assertEqual(run, {
            'command': 'eval', 'seed': 0, 'out': None, 'inputs': [], 'params': {'z': 2.58},
        })
