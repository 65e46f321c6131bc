import contextlib
import io
import os
import shutil
import sys
import tempfile
import unittest


class TestCase(unittest.TestCase):

    @classmethod
    def fixture(cls, *path):
        return os.path.join(
            os.path.abspath(os.path.dirname(__file__)),
            'fixtures',
            *path
        )

    @classmethod
    def open_fixture(cls, *path):
        return open(cls.fixture(*path), 'r', encoding='utf-8')

    @classmethod
    def read_fixture(cls, *path):
        with cls.open_fixture(*path) as fo:
            return fo.read()

    def tmp_dir(self):
        path = tempfile.mkdtemp(prefix='numline-')
        self.addCleanup(shutil.rmtree, path, True)
        return path

    @contextlib.contextmanager
    def captured(self):
        """
        Captures stdout and stderr as `(out, err)` `StringIO`s.
        """
        out, err = io.StringIO(), io.StringIO()
        saved = sys.stdout, sys.stderr
        sys.stdout, sys.stderr = out, err
        try:
            yield out, err
        finally:
            sys.stdout, sys.stderr = saved


class TestInterface(TestCase):

    def test_all(self):
        import numline

        for name in numline.__all__:
            self.assertTrue(hasattr(numline, name), name)
