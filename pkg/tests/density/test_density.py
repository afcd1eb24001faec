"""
Unit tests for ground-truth density generation.
"""

import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from crowd_refiner.density import (
    Annotation,
    DensityMap,
    downsample_sum,
    generate_density,
    sum_count,
)
from crowd_refiner.validators.base.error_handler import AnnotationError, DimensionError


def random_annotation(rng: np.random.Generator, index: int) -> Annotation:
    height, width = 8 * int(rng.integers(2, 9)), 8 * int(rng.integers(2, 9))
    count = int(rng.integers(0, 40))
    xs = rng.uniform(0.0, width, size=count)
    ys = rng.uniform(0.0, height, size=count)
    # uniform() can return the upper bound after rounding
    points = [(min(x, width - 1e-9), min(y, height - 1e-9)) for x, y in zip(xs, ys)]
    return Annotation(f"img_{index}", points, height=height, width=width)


class TestGenerateDensity(unittest.TestCase):
    """Test cases for generate_density."""

    def test_mass_conserved_for_random_annotations(self):
        """Every map sums to the point count, border points included."""
        rng = np.random.default_rng(0)
        for index in range(200):
            ann = random_annotation(rng, index)
            sigma = float(rng.uniform(0.5, 6.0))
            with self.subTest(index=index):
                density = generate_density(ann, sigma)
                self.assertEqual(density.shape, (ann.height, ann.width))
                self.assertAlmostEqual(sum_count(density), ann.count, delta=1e-6)
                self.assertGreaterEqual(density.values.min(), 0.0)

    def test_mass_conserved_after_downsampling(self):
        rng = np.random.default_rng(1)
        for index in range(50):
            ann = random_annotation(rng, index)
            pooled = downsample_sum(generate_density(ann, 4.0), 8)
            self.assertEqual(pooled.scale, 8)
            self.assertEqual(pooled.shape, (ann.height // 8, ann.width // 8))
            self.assertAlmostEqual(sum_count(pooled), ann.count, delta=1e-6)

    def test_corner_point(self):
        ann = Annotation("corner", [(0.0, 0.0)], height=16, width=16)
        self.assertAlmostEqual(sum_count(generate_density(ann, 4.0)), 1.0, places=12)

    def test_tiny_sigma_puts_mass_on_one_pixel(self):
        ann = Annotation("tiny", [(3.2, 5.7)], height=8, width=8)
        values = generate_density(ann, 1e-3).values
        self.assertEqual(values[5, 3], 1.0)
        self.assertAlmostEqual(values.sum(), 1.0)

    def test_kernel_peaks_at_point(self):
        ann = Annotation("peak", [(10.5, 6.5)], height=16, width=24)
        values = generate_density(ann, 2.0).values
        self.assertEqual(np.unravel_index(values.argmax(), values.shape), (6, 10))

    def test_coincident_points_double_the_map(self):
        single = generate_density(Annotation("one", [(8.5, 8.5)], height=16, width=16), 2.0).values
        double = generate_density(Annotation("two", [(8.5, 8.5), (8.5, 8.5)], height=16, width=16), 2.0).values
        self.assertAlmostEqual(double.sum(), 2.0, places=12)
        self.assertAlmostEqual(double.max(), 2.0 * single.max(), places=12)

    def test_integer_shift_moves_map(self):
        base = Annotation("base", [(10.3, 12.6), (14.0, 9.5)], height=32, width=32)
        shifted = Annotation("shifted", [(x + 3, y + 2) for x, y in base.points], height=32, width=32)
        a = generate_density(base, 1.5).values
        b = generate_density(shifted, 1.5).values
        assert_allclose(b[2:, 3:], a[:-2, :-3], atol=1e-12)

    def test_empty_annotation(self):
        density = generate_density(Annotation("empty", [], height=8, width=8))
        assert_array_equal(density.values, np.zeros((8, 8)))

    def test_point_outside_image(self):
        ann = Annotation("bad", [(64.0, 3.0)], height=64, width=64)
        with self.assertRaises(AnnotationError) as ctx:
            generate_density(ann)
        self.assertIn("bad", str(ctx.exception))

    def test_sigma_must_be_positive(self):
        with self.assertRaises(ValueError):
            generate_density(Annotation("s", [], height=8, width=8), sigma=0.0)


class TestDownsampleAndCount(unittest.TestCase):
    """Test cases for downsample_sum and sum_count."""

    def test_indivisible_extent(self):
        with self.assertRaises(DimensionError) as ctx:
            downsample_sum(DensityMap(np.ones((12, 16))), 8)
        self.assertIn("height", str(ctx.exception))

    def test_block_sums(self):
        pooled = downsample_sum(DensityMap(np.arange(16.0).reshape(4, 4)), 2)
        assert_array_equal(pooled.values, [[10.0, 18.0], [42.0, 50.0]])

    def test_roi_restricts_count(self):
        density = DensityMap(np.ones((4, 4)))
        roi = np.zeros((4, 4))
        roi[:2, :] = 1.0
        self.assertEqual(sum_count(density, roi), 8.0)
        self.assertEqual(sum_count(density, np.ones((4, 4))), 16.0)
        self.assertEqual(sum_count(density, np.zeros((4, 4))), 0.0)


if __name__ == '__main__':
    unittest.main()
