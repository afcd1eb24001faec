"""
Dense tensor engine with reverse-mode automatic differentiation.

This package supplies every primitive the counting network needs: the
``Tensor`` type and its recorded ``Graph``, arithmetic and movement ops,
convolution, max pooling, fully-connected layers, activations and an LSTM
step.

Components:
    - tensor: Tensor, Function, Graph, dtype selection
    - ops: arithmetic, reductions, reshaping, nonlinearities
    - conv: conv2d and maxpool2
    - layers: fully_connected, activation, lstm_cell

Example:
    >>> x = Tensor([[1.0, -2.0]], requires_grad=True)
    >>> activation(x, 'relu').sum().backward()
    >>> x.grad
    array([[1., 0.]])
"""

from .tensor import Tensor, Function, Graph, as_tensor, set_default_dtype, get_default_dtype
from .ops import concat, stack, relu, sigmoid, tanh, square_error
from .conv import conv2d, maxpool2
from .layers import LSTMParams, fully_connected, activation, lstm_cell

__all__ = [
    'Tensor',
    'Function',
    'Graph',
    'as_tensor',
    'set_default_dtype',
    'get_default_dtype',
    'concat',
    'stack',
    'relu',
    'sigmoid',
    'tanh',
    'square_error',
    'conv2d',
    'maxpool2',
    'LSTMParams',
    'fully_connected',
    'activation',
    'lstm_cell',
]
