"""
Tests for the command-line interface, run in-process through ``main``.
"""

import contextlib
import io
import json
import os
import shutil
import tempfile
import unittest

import numpy as np

from crowd_refiner.cli import build_parser, main
from crowd_refiner.config import load_run_config
from crowd_refiner.coordinators import AblationCoordinator
from crowd_refiner.data import load_annotations, write_pnm
from crowd_refiner.tensor_core import set_default_dtype

TINY_CONFIG = """\
# small enough to train in seconds
image_h = 32
image_w = 32
width = 0.25
hidden = 8
num_images = 2
n = 2
iters = 3
log_every = 1
"""


def run(*argv: str):
    """Run the CLI and return (exit status, captured stdout)."""
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        status = main(list(argv) + ['--log-level', 'ERROR'])
    return status, out.getvalue()


class TestCommandLine(unittest.TestCase):
    """Test cases for the gen-data, train, eval and predict commands."""

    @classmethod
    def setUpClass(cls):
        cls.test_dir = tempfile.mkdtemp()
        cls.config = os.path.join(cls.test_dir, "tiny.cfg")
        with open(cls.config, 'w', encoding='utf-8') as f:
            f.write(TINY_CONFIG)
        cls.data = os.path.join(cls.test_dir, "data")
        cls.run_dir = os.path.join(cls.test_dir, "run")
        status, _ = run('gen-data', '--config', cls.config, '--seed', '7', '--out', cls.data)
        assert status == 0
        status, _ = run('train', '--config', cls.config, '--data', cls.data, '--out', cls.run_dir)
        assert status == 0
        cls.checkpoint = os.path.join(cls.run_dir, "model.drsn")

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.test_dir)
        set_default_dtype('float64')

    def test_gen_data_layout(self):
        anns = load_annotations(os.path.join(self.data, "annotations.json"))
        self.assertEqual(len(anns), 2)
        self.assertEqual(anns[0].image_id, "images/img_0000.pgm")
        self.assertTrue(os.path.exists(os.path.join(self.data, "images", "img_0001.pgm")))

    def test_gen_data_count_flag(self):
        out = os.path.join(self.test_dir, "three")
        status, printed = run('gen-data', '--config', self.config, '--count', '3', '--out', out)
        self.assertEqual(status, 0)
        self.assertEqual(printed.strip(), os.path.join(out, "annotations.json"))
        self.assertEqual(len(load_annotations(printed.strip())), 3)

    def test_train_outputs(self):
        with open(os.path.join(self.run_dir, "metrics.log"), encoding='utf-8') as f:
            lines = f.read().splitlines()
        self.assertEqual([line.split()[0] for line in lines], ['1', '2', '3'])
        self.assertTrue(os.path.exists(self.checkpoint))

    def test_train_without_data_renders_suite(self):
        out = os.path.join(self.test_dir, "synthetic_run")
        status, printed = run('train', '--config', self.config, '--iters', '1', '--out', out)
        self.assertEqual(status, 0)
        self.assertEqual(printed.splitlines()[-1], os.path.join(out, "model.drsn"))

    def test_eval_report(self):
        out = os.path.join(self.test_dir, "eval")
        status, printed = run('eval', '--config', self.config, '--checkpoint', self.checkpoint,
                              '--data', self.data, '--out', out)
        self.assertEqual(status, 0)
        self.assertTrue(printed.startswith("MAE "))
        with open(os.path.join(out, "report.json"), encoding='utf-8') as f:
            report = json.load(f)
        self.assertEqual(report['images'], 2)
        self.assertEqual(report['n'], 2)
        self.assertTrue(os.path.exists(os.path.join(out, "report.txt")))

    def test_eval_with_empty_roi(self):
        roi = os.path.join(self.test_dir, "roi.pgm")
        write_pnm(roi, np.zeros((4, 4), dtype=np.uint8))
        out = os.path.join(self.test_dir, "eval_roi")
        status, _ = run('eval', '--config', self.config, '--checkpoint', self.checkpoint,
                        '--data', self.data, '--roi', roi, '--out', out)
        self.assertEqual(status, 0)
        with open(os.path.join(out, "report.json"), encoding='utf-8') as f:
            report = json.load(f)
        self.assertEqual(report['mae'], 0.0)

    def test_eval_roi_wrong_resolution(self):
        roi = os.path.join(self.test_dir, "big_roi.pgm")
        write_pnm(roi, np.full((32, 32), 255, dtype=np.uint8))
        status, _ = run('eval', '--config', self.config, '--checkpoint', self.checkpoint,
                        '--data', self.data, '--roi', roi, '--out', os.path.join(self.test_dir, "x"))
        self.assertEqual(status, 1)

    def test_eval_needs_data(self):
        status, _ = run('eval', '--config', self.config, '--checkpoint', self.checkpoint,
                        '--out', os.path.join(self.test_dir, "nodata"))
        self.assertEqual(status, 1)

    def test_eval_missing_checkpoint(self):
        status, _ = run('eval', '--config', self.config, '--checkpoint', os.path.join(self.test_dir, "none.drsn"),
                        '--data', self.data, '--out', os.path.join(self.test_dir, "nockpt"))
        self.assertEqual(status, 1)

    def test_eval_with_other_architecture(self):
        """A context-free network cannot read a checkpoint trained with context."""
        status, _ = run('eval', '--config', self.config, '--checkpoint', self.checkpoint, '--context', 'off',
                        '--data', self.data, '--out', os.path.join(self.test_dir, "arch"))
        self.assertEqual(status, 1)

    def test_predict_count_matches_csv(self):
        out = os.path.join(self.test_dir, "predict")
        image = os.path.join(self.data, "images", "img_0000.pgm")
        status, printed = run('predict', '--config', self.config, '--checkpoint', self.checkpoint,
                              '--out', out, image)
        self.assertEqual(status, 0)
        path, count = printed.split()
        self.assertEqual(path, image)
        density = np.loadtxt(os.path.join(out, "img_0000_density.csv"), delimiter=',', ndmin=2)
        self.assertEqual(density.shape, (4, 4))
        self.assertAlmostEqual(float(density.sum()), float(count), delta=1e-8)
        self.assertTrue(os.path.exists(os.path.join(out, "img_0000_density.pgm")))
        with open(os.path.join(out, "img_0000_trace.json"), encoding='utf-8') as f:
            trace = json.load(f)
        self.assertEqual([step['iteration'] for step in trace], [1, 2])
        self.assertEqual(trace[0]['mode'], 'T+S+R')

    def test_predict_missing_image(self):
        status, _ = run('predict', '--config', self.config, '--checkpoint', self.checkpoint,
                        '--out', os.path.join(self.test_dir, "p2"), os.path.join(self.test_dir, "none.pgm"))
        self.assertEqual(status, 1)


class TestCommandErrors(unittest.TestCase):
    """Test cases for configuration and argument errors."""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def test_unknown_config_key(self):
        path = os.path.join(self.test_dir, "bad.cfg")
        with open(path, 'w', encoding='utf-8') as f:
            f.write("n = 2\nrefinements = 4\n")
        status, _ = run('gen-data', '--config', path, '--out', os.path.join(self.test_dir, "d"))
        self.assertEqual(status, 1)

    def test_bad_flag_value_exits_with_two(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main(['train', '--mode', 'affine'])
        self.assertEqual(ctx.exception.code, 2)

    def test_seed_list(self):
        args = build_parser().parse_args(['ablate', '--seeds', '7,8,9'])
        self.assertEqual(args.seeds, [7, 8, 9])
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                build_parser().parse_args(['ablate', '--seeds', '7,x'])


class TestGradcheckAndAblate(unittest.TestCase):
    """Test cases for the gradcheck and ablate commands."""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp()
        self.config = os.path.join(self.test_dir, "tiny.cfg")
        with open(self.config, 'w', encoding='utf-8') as f:
            f.write(TINY_CONFIG.replace("iters = 3", "iters = 1"))

    def tearDown(self):
        shutil.rmtree(self.test_dir)
        set_default_dtype('float64')

    def test_gradcheck_primitives(self):
        status, printed = run('gradcheck', '--suite', 'primitive')
        self.assertEqual(status, 0)
        self.assertIn("conv2d", printed)
        self.assertIn("tolerance", printed)

    def test_ablate_table(self):
        out = os.path.join(self.test_dir, "ablate")
        status, printed = run('ablate', '--config', self.config, '--out', out, '--seeds', '7')
        self.assertEqual(status, 0)
        with open(os.path.join(out, "ablation.json"), encoding='utf-8') as f:
            report = json.load(f)
        self.assertEqual(len(report['rows']), 17)
        self.assertEqual(report['seeds'], [7])
        self.assertEqual(set(report['checks']), {'mode_ordering', 'context', 'refinement'})
        self.assertIn("mode_ordering:", printed)
        self.assertTrue(os.path.exists(os.path.join(out, "ablation.txt")))

    def test_ablation_defaults_to_three_seeds(self):
        cfg = load_run_config(self.config, {'seed': 11})
        self.assertEqual(AblationCoordinator(cfg).seeds, [11, 12, 13])
        self.assertEqual(AblationCoordinator(cfg, [4]).seeds, [4])


if __name__ == '__main__':
    unittest.main()
