"""
Unit tests for counting metrics and dataset evaluation.
"""

import unittest

import numpy as np

from crowd_refiner.data import Dataset, SceneConfig, gen_synthetic
from crowd_refiner.evaluation import EvalReport, ImageResult, evaluate, metrics
from crowd_refiner.model import ModelConfig
from crowd_refiner.stn import TransformMode
from crowd_refiner.training import init_params
from crowd_refiner.validators.base.error_handler import ContractError, DimensionError


class TestMetrics(unittest.TestCase):
    """Test cases for metrics."""

    def test_reference_pairs(self):
        mae, mse = metrics([(10, 13), (20, 16)])
        self.assertEqual(mae, 3.5)
        self.assertAlmostEqual(mse, 3.5355339059327378, places=15)

    def test_single_pair_mae_equals_mse(self):
        mae, mse = metrics([(4.0, 6.5)])
        self.assertEqual(mae, 2.5)
        self.assertEqual(mse, 2.5)

    def test_perfect_estimates(self):
        self.assertEqual(metrics([(3, 3), (0, 0)]), (0.0, 0.0))

    def test_empty(self):
        with self.assertRaises(ContractError):
            metrics([])


class TestEvalReport(unittest.TestCase):
    """Test cases for EvalReport rendering."""

    def setUp(self):
        self.report = EvalReport([
            ImageResult("images/img_0000.pgm", 10.0, 13.0, 12.0),
            ImageResult("images/img_0001.pgm", 20.0, 16.0, 15.0),
        ], n=4, mode='T+S+R')

    def test_aggregates(self):
        self.assertEqual(self.report.mae, 3.5)
        self.assertEqual(self.report.mae_initial, 3.5)
        self.assertEqual(self.report.count, 2)

    def test_to_dict(self):
        data = self.report.to_dict()
        self.assertEqual(data['n'], 4)
        self.assertEqual(data['images'], 2)
        self.assertEqual(data['rows'][1]['estimate'], 16.0)

    def test_to_table(self):
        lines = self.report.to_table().splitlines()
        self.assertEqual(len(lines), 5)
        self.assertTrue(lines[0].startswith("image"))
        self.assertTrue(lines[-2].startswith("MAE"))
        self.assertTrue(lines[-1].startswith("MSE"))
        self.assertIn("13.000", lines[1])


class TestEvaluate(unittest.TestCase):
    """Test cases for evaluate."""

    @classmethod
    def setUpClass(cls):
        images, anns = gen_synthetic(SceneConfig(seed=7, height=32, width=32), 2)
        cls.dataset = Dataset.from_arrays(images, anns)
        cls.params = init_params(ModelConfig(image_h=32, image_w=32, width=0.25, hidden=8), seed=7)

    def test_truth_matches_annotation_count(self):
        report = evaluate(self.params, self.dataset, n=2)
        self.assertEqual(report.count, 2)
        for row, sample in zip(report.rows, self.dataset):
            self.assertEqual(row.image_id, sample.image_id)
            self.assertAlmostEqual(row.truth, sample.count, delta=1e-6)
            self.assertGreaterEqual(row.estimate, 0.0)

    def test_zero_steps_estimate_is_initial(self):
        report = evaluate(self.params, self.dataset, n=0)
        for row in report.rows:
            self.assertEqual(row.estimate, row.initial)

    def test_mode_override(self):
        self.assertEqual(evaluate(self.params, self.dataset, n=1, mode=TransformMode.T).mode, 'T')

    def test_all_ones_roi_matches_unrestricted(self):
        plain = evaluate(self.params, self.dataset, n=1)
        masked = evaluate(self.params, self.dataset, n=1, roi=np.ones((4, 4)))
        self.assertEqual(plain.to_dict(), masked.to_dict())

    def test_all_zero_roi_counts_nothing(self):
        report = evaluate(self.params, self.dataset, n=1, roi=np.zeros((4, 4)))
        self.assertEqual(report.mae, 0.0)
        self.assertEqual(report.mse, 0.0)
        for row in report.rows:
            self.assertEqual((row.truth, row.estimate, row.initial), (0.0, 0.0, 0.0))

    def test_per_image_masks(self):
        masks = [np.ones((4, 4)), np.zeros((4, 4))]
        report = evaluate(self.params, self.dataset, n=1, roi=masks)
        self.assertGreater(report.rows[0].truth, 0.0)
        self.assertEqual(report.rows[1].truth, 0.0)

    def test_roi_shape_mismatch(self):
        with self.assertRaises(DimensionError) as ctx:
            evaluate(self.params, self.dataset, n=1, roi=np.ones((8, 8)))
        self.assertIn("roi", str(ctx.exception))

    def test_empty_dataset(self):
        with self.assertRaises(ContractError):
            evaluate(self.params, Dataset([]), n=1)


if __name__ == '__main__':
    unittest.main()
