"""
Unit tests for samples and dataset directories.
"""

import os
import shutil
import tempfile
import unittest

import numpy as np
from numpy.testing import assert_allclose

from crowd_refiner.data import Dataset, SceneConfig, gen_synthetic, save_annotations, write_pnm
from crowd_refiner.data.dataset import to_channels
from crowd_refiner.density import Annotation
from crowd_refiner.validators.base.error_handler import ContractError, DimensionError


class TestSample(unittest.TestCase):
    """Test cases for Sample."""

    def setUp(self):
        images, anns = gen_synthetic(SceneConfig(seed=7, height=32, width=32), 2)
        self.dataset = Dataset.from_arrays(images, anns)

    def test_tensor_shape(self):
        self.assertEqual(self.dataset[0].tensor().shape, (1, 1, 32, 32))

    def test_ground_truth_sums_to_count(self):
        for sample in self.dataset:
            truth = sample.ground_truth(4.0)
            self.assertEqual(truth.shape, (4, 4))
            self.assertAlmostEqual(float(truth.sum()), sample.count, delta=1e-9)

    def test_mean_count(self):
        expected = (self.dataset[0].count + self.dataset[1].count) / 2
        self.assertAlmostEqual(self.dataset.mean_count(), expected)


class TestToChannels(unittest.TestCase):
    """Test cases for to_channels."""

    def test_gray_to_colour_and_back(self):
        gray = np.arange(6.0).reshape(2, 3)
        colour = to_channels(gray, 3)
        self.assertEqual(colour.shape, (2, 3, 3))
        assert_allclose(to_channels(colour, 1), gray)


class TestDatasetFiles(unittest.TestCase):
    """Test cases for Dataset.save and Dataset.load."""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def test_save_then_load(self):
        images, anns = gen_synthetic(SceneConfig(seed=7, height=32, width=32), 3)
        document = Dataset.from_arrays(images, anns).save(self.test_dir)
        self.assertEqual(document, os.path.join(self.test_dir, "annotations.json"))
        self.assertTrue(os.path.exists(os.path.join(self.test_dir, "images", "img_0002.pgm")))

        loaded = Dataset.load(self.test_dir)
        self.assertEqual(len(loaded), 3)
        for sample, image, ann in zip(loaded, images, anns):
            self.assertEqual(sample.annotation, ann)
            assert_allclose(sample.image, image, atol=0.5 / 255 + 1e-12)

    def test_load_by_document_path(self):
        images, anns = gen_synthetic(SceneConfig(seed=2, height=16, width=16), 1)
        document = Dataset.from_arrays(images, anns).save(self.test_dir)
        self.assertEqual(len(Dataset.load(document)), 1)

    def test_image_extent_mismatch(self):
        write_pnm(os.path.join(self.test_dir, "a.pgm"), np.zeros((8, 8), dtype=np.uint8))
        save_annotations(os.path.join(self.test_dir, "annotations.json"),
                         [Annotation("a.pgm", [], height=16, width=8)])
        with self.assertRaises(DimensionError):
            Dataset.load(self.test_dir)

    def test_empty_document(self):
        save_annotations(os.path.join(self.test_dir, "annotations.json"), [])
        with self.assertRaises(ContractError):
            Dataset.load(self.test_dir)


if __name__ == '__main__':
    unittest.main()
