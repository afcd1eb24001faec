"""
Unit tests for the tape-based differentiation engine.
"""

import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from crowd_refiner.tensor_core import Graph, Tensor, get_default_dtype, set_default_dtype
from crowd_refiner.validators.base.error_handler import ConfigError, ContractError


class TestTensorBackward(unittest.TestCase):
    """Test cases for Tensor.backward."""

    def test_square_sum_gradient(self):
        """Gradient of sum(x * x) is 2x."""
        x = Tensor([1.0, 2.0, 3.0], requires_grad=True)
        (x * x).sum().backward()
        assert_array_equal(x.grad, [2.0, 4.0, 6.0])

    def test_backward_twice_accumulates(self):
        """Two backward passes without zeroing give twice the gradient."""
        x = Tensor([1.0, -2.0], requires_grad=True)
        y = (x * x).sum()
        y.backward()
        y.backward()
        assert_array_equal(x.grad, [4.0, -8.0])

    def test_zero_grad_resets(self):
        x = Tensor([3.0], requires_grad=True)
        (x * x).sum().backward()
        x.zero_grad()
        assert_array_equal(x.grad, [0.0])

    def test_non_scalar_backward_rejected(self):
        """backward on a tensor with several elements is a contract error."""
        x = Tensor([1.0, 2.0], requires_grad=True)
        with self.assertRaises(ContractError):
            (x * x).backward()

    def test_shared_subexpression(self):
        """A value used twice receives both contributions."""
        x = Tensor([1.5, -0.5], requires_grad=True)
        y = x * x
        (y + y).sum().backward()
        assert_allclose(x.grad, 4.0 * x.data)

    def test_broadcast_bias_gradient(self):
        """A bias broadcast over rows receives the row sum."""
        x = Tensor(np.arange(6.0).reshape(2, 3), requires_grad=True)
        b = Tensor(np.zeros(3), requires_grad=True)
        (x + b).sum().backward()
        assert_array_equal(b.grad, [2.0, 2.0, 2.0])
        assert_array_equal(x.grad, np.ones((2, 3)))

    def test_matmul_gradient(self):
        a = Tensor(np.array([[1.0, 2.0]]), requires_grad=True)
        w = Tensor(np.array([[3.0], [4.0]]), requires_grad=True)
        (a @ w).sum().backward()
        assert_array_equal(a.grad, [[3.0, 4.0]])
        assert_array_equal(w.grad, [[1.0], [2.0]])

    def test_constant_inputs_get_no_grad(self):
        x = Tensor([1.0, 2.0], requires_grad=True)
        c = Tensor([5.0, 6.0])
        (x * c).sum().backward()
        self.assertIsNone(c.grad)
        assert_array_equal(x.grad, [5.0, 6.0])

    def test_item_requires_single_element(self):
        with self.assertRaises(ContractError):
            Tensor([1.0, 2.0]).item()
        self.assertEqual(Tensor([[2.5]]).item(), 2.5)

    def test_detach_cuts_graph(self):
        x = Tensor([2.0], requires_grad=True)
        d = (x * x).detach()
        self.assertTrue(d.is_leaf)
        self.assertFalse(d.requires_grad)


class TestGraph(unittest.TestCase):
    """Test cases for tape ordering."""

    def test_nodes_in_recording_order(self):
        x = Tensor([1.0], requires_grad=True)
        a = x * x
        b = a + x
        c = (b * a).sum()
        graph = Graph.from_output(c)
        seqs = [node.seq for node in graph.nodes]
        self.assertEqual(seqs, sorted(seqs))
        self.assertEqual(len(graph), 4)

    def test_leaf_has_empty_graph(self):
        self.assertEqual(len(Graph.from_output(Tensor([1.0]))), 0)


class TestDefaultDtype(unittest.TestCase):
    """Test cases for the element type switch."""

    def tearDown(self):
        set_default_dtype('float64')

    def test_default_is_float64(self):
        self.assertIs(get_default_dtype(), np.float64)
        self.assertEqual(Tensor([1, 2]).data.dtype, np.float64)

    def test_switch_to_float32(self):
        set_default_dtype('float32')
        self.assertEqual(Tensor([1.0]).data.dtype, np.float32)

    def test_unknown_dtype(self):
        with self.assertRaises(ConfigError):
            set_default_dtype('float16')


if __name__ == '__main__':
    unittest.main()
