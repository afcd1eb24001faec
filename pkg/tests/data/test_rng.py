"""
Unit tests for the SplitMix64 generator.
"""

import unittest

from crowd_refiner.data import SplitMix64, derive_seed


class TestSplitMix64(unittest.TestCase):
    """Test cases for SplitMix64."""

    def test_reference_value(self):
        self.assertEqual(SplitMix64(0).next_u64(), 16294208416658607535)

    def test_same_seed_same_stream(self):
        a, b = SplitMix64(42), SplitMix64(42)
        self.assertEqual([a.next_u64() for _ in range(10)], [b.next_u64() for _ in range(10)])

    def test_different_seeds_differ(self):
        self.assertNotEqual(SplitMix64(1).next_u64(), SplitMix64(2).next_u64())

    def test_uniform_range(self):
        rng = SplitMix64(5)
        values = [rng.uniform(2.0, 3.0) for _ in range(1000)]
        self.assertTrue(all(2.0 <= v < 3.0 for v in values))

    def test_randint_is_inclusive(self):
        rng = SplitMix64(9)
        seen = {rng.randint(0, 3) for _ in range(500)}
        self.assertEqual(seen, {0, 1, 2, 3})

    def test_permutation(self):
        order = SplitMix64(3).permutation(20)
        self.assertEqual(sorted(order), list(range(20)))
        self.assertEqual(order, SplitMix64(3).permutation(20))

    def test_normal_moments(self):
        rng = SplitMix64(11)
        values = [rng.normal() for _ in range(20000)]
        mean = sum(values) / len(values)
        var = sum((v - mean) ** 2 for v in values) / len(values)
        self.assertAlmostEqual(mean, 0.0, delta=0.05)
        self.assertAlmostEqual(var, 1.0, delta=0.05)

    def test_derive_seed(self):
        self.assertEqual(derive_seed(7, 3), 4)
        self.assertEqual(derive_seed(7, 0), 7)


if __name__ == '__main__':
    unittest.main()
