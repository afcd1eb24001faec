"""
Layer-level primitives built on the elementary operations.

Provides the affine map used by every fully-connected layer, the named
activations and a single LSTM step. All three are compositions of recorded
operations, so their gradients come from the tape.

Example:
    >>> x = Tensor([[1.0, 2.0]])
    >>> fully_connected(x, Tensor([[1.0], [1.0]]), Tensor([0.5])).data
    array([[3.5]])
"""

from dataclasses import dataclass
from typing import Tuple

from .ops import relu, sigmoid, tanh
from .tensor import Tensor
from ..validators.base.error_handler import DimensionError, ErrorFormatter

_formatter = ErrorFormatter()

_ACTIVATIONS = {
    'relu': relu,
    'sigmoid': sigmoid,
    'tanh': tanh,
}


@dataclass
class LSTMParams:
    """Gate parameters of one LSTM layer.

    Columns of both weight matrices and of the bias are laid out as four
    blocks of ``hidden`` entries in gate order input, forget, candidate,
    output.

    Attributes:
        weight_x (Tensor): Input-to-gates weights, shape (D, 4H).
        weight_h (Tensor): Hidden-to-gates weights, shape (H, 4H).
        bias (Tensor): Gate biases, shape (4H,).
    """

    weight_x: Tensor
    weight_h: Tensor
    bias: Tensor

    @property
    def hidden(self) -> int:
        return self.weight_h.shape[0]


def fully_connected(x: Tensor, weight: Tensor, bias: Tensor) -> Tensor:
    """Affine map ``x @ weight + bias``.

    Args:
        x (Tensor): Input of shape (N, D).
        weight (Tensor): Weights of shape (D, M).
        bias (Tensor): Bias of shape (M,).

    Returns:
        Tensor: Output of shape (N, M).

    Raises:
        DimensionError: If the inner dimensions or the bias disagree.
    """
    if x.ndim != 2:
        raise DimensionError(_formatter.format_dimension_error("fully_connected", "input rank", x.ndim, 2))
    if weight.ndim != 2 or weight.shape[0] != x.shape[1]:
        raise DimensionError(
            _formatter.format_dimension_error("fully_connected", "inner", weight.shape[0], x.shape[1])
        )
    if bias.shape != (weight.shape[1],):
        raise DimensionError(
            _formatter.format_dimension_error("fully_connected", "bias", bias.size, weight.shape[1])
        )
    return x @ weight + bias


def activation(x: Tensor, kind: str) -> Tensor:
    """Apply the named elementwise nonlinearity (relu, sigmoid or tanh)."""
    try:
        return _ACTIVATIONS[kind](x)
    except KeyError:
        raise ValueError(f"Unknown activation '{kind}', expected one of {sorted(_ACTIVATIONS)}") from None


def lstm_cell(x: Tensor, h_prev: Tensor, c_prev: Tensor, params: LSTMParams) -> Tuple[Tensor, Tensor]:
    """Advance an LSTM by one step.

    Args:
        x (Tensor): Input of shape (N, D).
        h_prev (Tensor): Previous hidden state, shape (N, H).
        c_prev (Tensor): Previous memory cell, shape (N, H).
        params (LSTMParams): Gate parameters.

    Returns:
        Tuple[Tensor, Tensor]: New hidden state and memory cell.

    Raises:
        DimensionError: If the gate parameters disagree with D or H.
    """
    hidden = params.hidden
    if params.weight_x.shape != (x.shape[1], 4 * hidden):
        raise DimensionError(
            _formatter.format_dimension_error("lstm_cell", "input gates", params.weight_x.shape[0], x.shape[1])
        )
    if params.weight_h.shape != (hidden, 4 * hidden) or params.bias.shape != (4 * hidden,):
        raise DimensionError(
            _formatter.format_dimension_error("lstm_cell", "hidden gates", params.weight_h.shape[1], 4 * hidden)
        )
    for name, state in (("hidden state", h_prev), ("memory cell", c_prev)):
        if state.shape != (x.shape[0], hidden):
            raise DimensionError(_formatter.format_dimension_error("lstm_cell", name, state.shape[-1], hidden))

    gates = x @ params.weight_x + h_prev @ params.weight_h + params.bias
    i = sigmoid(gates[:, 0:hidden])
    f = sigmoid(gates[:, hidden:2 * hidden])
    g = tanh(gates[:, 2 * hidden:3 * hidden])
    o = sigmoid(gates[:, 3 * hidden:4 * hidden])
    c = f * c_prev + i * g
    h = o * tanh(c)
    return h, c
