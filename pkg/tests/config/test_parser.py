"""
Unit tests for config files, overrides and the worker cap.
"""

import os
import shutil
import tempfile
import unittest
from unittest import mock

from crowd_refiner.config import (
    THREADS_ENV,
    ConfigFileParser,
    RunConfig,
    load_run_config,
    parse_bool,
    worker_count,
)
from crowd_refiner.stn import TransformMode
from crowd_refiner.validators.base.error_handler import ConfigError


class TestConfigFileParser(unittest.TestCase):
    """Test cases for ConfigFileParser."""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def _write(self, text: str) -> str:
        path = os.path.join(self.test_dir, "run.cfg")
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        return path

    def test_values_are_converted(self):
        path = self._write("# tiny run\nseed = 3\n\nmode = ts   # glimpse\ncontext = off\nlr0 = 5e-4\n")
        values = ConfigFileParser(path).parse()
        self.assertEqual(values, {'seed': 3, 'mode': TransformMode.TS, 'context': False, 'lr0': 5e-4})

    def test_unknown_key_names_line(self):
        path = self._write("seed = 3\nseeds = 4\n")
        with self.assertRaises(ConfigError) as ctx:
            ConfigFileParser(path).parse()
        self.assertIn(":2:", str(ctx.exception))
        self.assertIn("seeds", str(ctx.exception))

    def test_bad_value_names_line(self):
        path = self._write("iters = many\n")
        with self.assertRaises(ConfigError) as ctx:
            ConfigFileParser(path).parse()
        self.assertIn(":1:", str(ctx.exception))

    def test_line_without_equals(self):
        path = self._write("seed 3\n")
        with self.assertRaises(ConfigError):
            ConfigFileParser(path).parse()

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            ConfigFileParser(os.path.join(self.test_dir, "absent.cfg")).parse()

    def test_flags_override_file(self):
        path = self._write("n = 8\niters = 50\n")
        cfg = load_run_config(path, {'n': 4, 'seed': None})
        self.assertEqual(cfg['n'], 4)
        self.assertEqual(cfg['iters'], 50)
        self.assertEqual(cfg['seed'], 7)
        self.assertEqual(cfg.source, path)


class TestRunConfig(unittest.TestCase):
    """Test cases for RunConfig."""

    def test_defaults(self):
        cfg = load_run_config()
        self.assertEqual(cfg['n'], 30)
        self.assertIs(cfg['mode'], TransformMode.TSR)
        self.assertTrue(cfg['context'])

    def test_string_overrides_are_converted(self):
        cfg = RunConfig().override({'mode': 'raw', 'context': 'on', 'iters': '5'})
        self.assertIs(cfg['mode'], TransformMode.RAW)
        self.assertTrue(cfg['context'])
        self.assertEqual(cfg['iters'], 5)

    def test_unknown_override(self):
        with self.assertRaises(ConfigError):
            RunConfig().override({'colour': 3})

    def test_typed_configs(self):
        cfg = RunConfig().override({'image_h': 32, 'image_w': 32, 'n': 4, 'iters': 10, 'seed': 9})
        model = cfg.model_config(context=False)
        self.assertEqual((model.image_h, model.map_h), (32, 4))
        self.assertFalse(model.context)
        train = cfg.train_config()
        self.assertEqual((train.n, train.iterations, train.seed), (4, 10, 9))
        scene = cfg.scene_config()
        self.assertEqual((scene.height, scene.seed), (32, 9))

    def test_invalid_range_surfaces_from_typed_config(self):
        with self.assertRaises(ConfigError):
            RunConfig().override({'image_h': 30}).model_config()

    def test_describe_is_sorted(self):
        lines = RunConfig().describe()
        self.assertEqual(lines, sorted(lines))
        self.assertIn("n = 30", lines)

    def test_parse_bool(self):
        self.assertTrue(parse_bool("Yes"))
        self.assertFalse(parse_bool("0"))
        with self.assertRaises(ValueError):
            parse_bool("maybe")


class TestWorkerCount(unittest.TestCase):
    """Test cases for worker_count."""

    def test_unset_uses_default(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(worker_count(), 1)
            self.assertEqual(worker_count(4), 4)

    def test_reads_environment(self):
        with mock.patch.dict(os.environ, {THREADS_ENV: "3"}):
            self.assertEqual(worker_count(), 3)

    def test_rejects_non_positive(self):
        for raw in ("0", "-2", "lots"):
            with mock.patch.dict(os.environ, {THREADS_ENV: raw}):
                with self.assertRaises(ConfigError):
                    worker_count()


if __name__ == '__main__':
    unittest.main()
