"""
Unit tests for convolution, pooling and layer primitives.
"""

import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from crowd_refiner.tensor_core import (
    LSTMParams,
    Tensor,
    activation,
    conv2d,
    fully_connected,
    lstm_cell,
    maxpool2,
)
from crowd_refiner.validators.base.error_handler import DimensionError


class TestConv2d(unittest.TestCase):
    """Test cases for conv2d."""

    def test_same_padding_box_filter(self):
        """A 3x3 box over ones counts the in-bounds neighbours."""
        x = Tensor(np.ones((1, 1, 3, 3)))
        w = Tensor(np.ones((1, 1, 3, 3)))
        out = conv2d(x, w, Tensor(np.zeros(1))).data[0, 0]
        assert_array_equal(out, [[4, 6, 4], [6, 9, 6], [4, 6, 4]])

    def test_cross_correlation_orientation(self):
        """The kernel is not flipped."""
        x = np.zeros((1, 1, 3, 3))
        x[0, 0, 1, 1] = 1.0
        w = np.arange(9.0).reshape(1, 1, 3, 3)
        out = conv2d(Tensor(x), Tensor(w), Tensor(np.zeros(1))).data[0, 0]
        assert_array_equal(out, w[0, 0, ::-1, ::-1])

    def test_bias_and_channels(self):
        x = Tensor(np.ones((2, 3, 4, 4)))
        w = Tensor(np.zeros((5, 3, 1, 1)))
        b = Tensor(np.arange(5.0))
        out = conv2d(x, w, b)
        self.assertEqual(out.shape, (2, 5, 4, 4))
        assert_array_equal(out.data[1, :, 2, 3], np.arange(5.0))

    def test_stride(self):
        x = Tensor(np.arange(16.0).reshape(1, 1, 4, 4))
        w = Tensor(np.ones((1, 1, 1, 1)))
        out = conv2d(x, w, Tensor(np.zeros(1)), stride=2, pad=0)
        assert_array_equal(out.data[0, 0], [[0, 2], [8, 10]])

    def test_channel_mismatch(self):
        with self.assertRaises(DimensionError) as ctx:
            conv2d(Tensor(np.ones((1, 2, 4, 4))), Tensor(np.ones((1, 3, 3, 3))), Tensor(np.zeros(1)))
        self.assertIn("channels", str(ctx.exception))

    def test_even_kernel_rejected(self):
        with self.assertRaises(DimensionError):
            conv2d(Tensor(np.ones((1, 1, 4, 4))), Tensor(np.ones((1, 1, 2, 2))), Tensor(np.zeros(1)))

    def test_weight_gradient_is_window_sum(self):
        x = Tensor(np.arange(9.0).reshape(1, 1, 3, 3))
        w = Tensor(np.zeros((1, 1, 1, 1)), requires_grad=True)
        b = Tensor(np.zeros(1), requires_grad=True)
        conv2d(x, w, b).sum().backward()
        self.assertEqual(w.grad[0, 0, 0, 0], 36.0)
        self.assertEqual(b.grad[0], 9.0)


class TestMaxPool2(unittest.TestCase):
    """Test cases for maxpool2."""

    def test_values(self):
        x = Tensor(np.arange(16.0).reshape(1, 1, 4, 4))
        assert_array_equal(maxpool2(x).data[0, 0], [[5, 7], [13, 15]])

    def test_tie_routes_to_first_in_row_major_order(self):
        x = Tensor(np.ones((1, 1, 2, 2)), requires_grad=True)
        maxpool2(x).sum().backward()
        assert_array_equal(x.grad[0, 0], [[1, 0], [0, 0]])

    def test_odd_extent_rejected(self):
        with self.assertRaises(DimensionError) as ctx:
            maxpool2(Tensor(np.ones((1, 1, 3, 4))))
        self.assertIn("height", str(ctx.exception))


class TestLayers(unittest.TestCase):
    """Test cases for fully_connected, activation and lstm_cell."""

    def test_fully_connected(self):
        out = fully_connected(Tensor([[1.0, 2.0]]), Tensor([[1.0], [1.0]]), Tensor([0.5]))
        assert_array_equal(out.data, [[3.5]])

    def test_fully_connected_inner_mismatch(self):
        with self.assertRaises(DimensionError):
            fully_connected(Tensor(np.ones((1, 3))), Tensor(np.ones((2, 1))), Tensor([0.0]))

    def test_activations(self):
        x = Tensor([[-1.0, 0.0, 2.0]])
        assert_array_equal(activation(x, 'relu').data, [[0.0, 0.0, 2.0]])
        assert_allclose(activation(x, 'sigmoid').data, 1.0 / (1.0 + np.exp([[1.0, 0.0, -2.0]])))
        assert_allclose(activation(x, 'tanh').data, np.tanh(x.data))
        with self.assertRaises(ValueError):
            activation(x, 'gelu')

    def test_lstm_gate_order(self):
        """Gates are laid out input, forget, candidate, output."""
        hidden = 2
        bias = np.zeros(4 * hidden)
        bias[2 * hidden:3 * hidden] = 1.0   # candidate
        bias[hidden:2 * hidden] = -50.0     # forget closed
        params = LSTMParams(
            weight_x=Tensor(np.zeros((3, 4 * hidden))),
            weight_h=Tensor(np.zeros((hidden, 4 * hidden))),
            bias=Tensor(bias),
        )
        h, c = lstm_cell(Tensor(np.ones((1, 3))), Tensor(np.zeros((1, hidden))),
                         Tensor(np.full((1, hidden), 7.0)), params)
        expected_c = 0.5 * np.tanh(1.0)
        assert_allclose(c.data, np.full((1, hidden), expected_c), atol=1e-12)
        assert_allclose(h.data, 0.5 * np.tanh(c.data))

    def test_saturated_gates_keep_memory(self):
        """A wide-open forget gate with a shut input gate carries the cell over."""
        hidden = 3
        bias = np.zeros(4 * hidden)
        bias[0:hidden] = -10.0
        bias[hidden:2 * hidden] = 10.0
        params = LSTMParams(
            weight_x=Tensor(np.zeros((2, 4 * hidden))),
            weight_h=Tensor(np.zeros((hidden, 4 * hidden))),
            bias=Tensor(bias),
        )
        c_prev = np.array([[0.3, -1.2, 2.0]])
        _, c = lstm_cell(Tensor(np.ones((1, 2))), Tensor(np.zeros((1, hidden))), Tensor(c_prev), params)
        assert_allclose(c.data, c_prev, atol=1e-4)

    def test_lstm_state_mismatch(self):
        params = LSTMParams(
            weight_x=Tensor(np.zeros((3, 8))),
            weight_h=Tensor(np.zeros((2, 8))),
            bias=Tensor(np.zeros(8)),
        )
        with self.assertRaises(DimensionError):
            lstm_cell(Tensor(np.ones((1, 3))), Tensor(np.zeros((1, 3))), Tensor(np.zeros((1, 2))), params)


if __name__ == '__main__':
    unittest.main()
