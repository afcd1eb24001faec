"""
Unit tests for the synthetic scene generator.
"""

import unittest

import numpy as np
from numpy.testing import assert_array_equal
from scipy import ndimage

from crowd_refiner.data import SceneConfig, gen_synthetic, render_scene
from crowd_refiner.data.synthetic import render_heads
from crowd_refiner.validators.base.error_handler import ConfigError


class TestSceneConfig(unittest.TestCase):
    """Test cases for SceneConfig validation."""

    def test_defaults(self):
        cfg = SceneConfig()
        self.assertEqual((cfg.height, cfg.width, cfg.count_min, cfg.count_max), (64, 64, 5, 25))

    def test_count_range(self):
        with self.assertRaises(ConfigError):
            SceneConfig(count_min=10, count_max=5)

    def test_extent_multiple_of_eight(self):
        with self.assertRaises(ConfigError):
            SceneConfig(height=50)

    def test_perspective_range(self):
        with self.assertRaises(ConfigError):
            SceneConfig(perspective=1.0)


class TestGenSynthetic(unittest.TestCase):
    """Test cases for gen_synthetic and render_scene."""

    def test_deterministic_per_seed(self):
        images_a, anns_a = gen_synthetic(SceneConfig(seed=3), 3)
        images_b, anns_b = gen_synthetic(SceneConfig(seed=3), 3)
        for a, b in zip(images_a, images_b):
            assert_array_equal(a, b)
        self.assertEqual([a.points for a in anns_a], [b.points for b in anns_b])

    def test_worker_count_does_not_change_output(self):
        serial, anns_serial = gen_synthetic(SceneConfig(seed=5), 4, workers=1)
        threaded, anns_threaded = gen_synthetic(SceneConfig(seed=5), 4, workers=3)
        for a, b in zip(serial, threaded):
            assert_array_equal(a, b)
        self.assertEqual([a.points for a in anns_serial], [b.points for b in anns_threaded])

    def test_seeds_differ(self):
        a, _ = gen_synthetic(SceneConfig(seed=1), 1)
        b, _ = gen_synthetic(SceneConfig(seed=2), 1)
        self.assertFalse(np.array_equal(a[0], b[0]))

    def test_one_blob_per_annotated_head(self):
        """Connected components of the noise-free render match the annotation count."""
        cfg = SceneConfig(seed=7)
        for index in range(10):
            _, ann, heads = render_scene(cfg, index)
            canvas = render_heads(heads, cfg.height, cfg.width)
            _, blobs = ndimage.label(canvas > 0.5, structure=np.ones((3, 3), dtype=int))
            with self.subTest(index=index):
                self.assertEqual(blobs, ann.count)
                self.assertGreaterEqual(ann.count, 1)
                self.assertLessEqual(ann.count, cfg.count_max)

    def test_points_inside_image_and_on_blobs(self):
        cfg = SceneConfig(seed=9)
        for index in range(5):
            image, ann, heads = render_scene(cfg, index)
            canvas = render_heads(heads, cfg.height, cfg.width)
            for x, y in ann.points:
                self.assertTrue(0 <= x < cfg.width and 0 <= y < cfg.height)
                self.assertEqual(canvas[int(y), int(x)], 1.0)
            self.assertGreaterEqual(image.min(), 0.0)
            self.assertLessEqual(image.max(), 1.0)

    def test_image_ids_and_shapes(self):
        images, anns = gen_synthetic(SceneConfig(seed=7, channels=3, height=32, width=40), 2)
        self.assertEqual(images[0].shape, (32, 40, 3))
        self.assertEqual(anns[1].image_id, "images/img_0001.ppm")
        self.assertEqual((anns[0].height, anns[0].width), (32, 40))

    def test_grayscale_image_id(self):
        _, anns = gen_synthetic(SceneConfig(seed=7), 1)
        self.assertEqual(anns[0].image_id, "images/img_0000.pgm")


if __name__ == '__main__':
    unittest.main()
