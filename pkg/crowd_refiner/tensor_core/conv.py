"""
Convolution and pooling primitives.

``conv2d`` is a strided cross-correlation with zero padding, computed by
unfolding input windows (im2col) and multiplying with the flattened kernel.
``maxpool2`` is the non-overlapping 2x2 max used three times in every
feature column; ties resolve to the first element of the window in
row-major order.

Example:
    >>> x = Tensor(np.ones((1, 1, 3, 3)))
    >>> w = Tensor(np.ones((1, 1, 3, 3)))
    >>> conv2d(x, w, Tensor(np.zeros(1)), stride=1, pad=1).data[0, 0, 1, 1]
    9.0
"""

from typing import Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .tensor import Function, Tensor
from ..validators.base.error_handler import DimensionError, ErrorFormatter

_formatter = ErrorFormatter()


class Conv2d(Function):
    """Cross-correlation of an NCHW input with a KCHW kernel plus bias."""

    def forward(self, x: np.ndarray, w: np.ndarray, b: np.ndarray, stride: int = 1, pad: int = 0) -> np.ndarray:
        _check_conv_shapes(x.shape, w.shape, b.shape, stride, pad)
        n, c, height, width = x.shape
        k, _, kh, kw = w.shape
        out_h = (height + 2 * pad - kh) // stride + 1
        out_w = (width + 2 * pad - kw) // stride + 1

        xp = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad))) if pad else x
        windows = sliding_window_view(xp, (kh, kw), axis=(2, 3))[:, :, ::stride, ::stride]
        cols = windows.transpose(0, 2, 3, 1, 4, 5).reshape(n * out_h * out_w, c * kh * kw)
        w_mat = w.reshape(k, c * kh * kw)

        self.cols, self.w_mat = cols, w_mat
        self.x_shape, self.w_shape = x.shape, w.shape
        self.stride, self.pad, self.out_hw = stride, pad, (out_h, out_w)

        out = cols @ w_mat.T + b
        return out.reshape(n, out_h, out_w, k).transpose(0, 3, 1, 2).copy()

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        n, c, height, width = self.x_shape
        k, _, kh, kw = self.w_shape
        out_h, out_w = self.out_hw
        s, p = self.stride, self.pad
        g = grad.transpose(0, 2, 3, 1).reshape(-1, k)

        gw = (g.T @ self.cols).reshape(self.w_shape) if self.tensors[1].requires_grad else None
        gb = g.sum(axis=0) if self.tensors[2].requires_grad else None

        gx = None
        if self.tensors[0].requires_grad:
            dcols = (g @ self.w_mat).reshape(n, out_h, out_w, c, kh, kw).transpose(0, 3, 4, 5, 1, 2)
            gxp = np.zeros((n, c, height + 2 * p, width + 2 * p), dtype=grad.dtype)
            for i in range(kh):
                for j in range(kw):
                    gxp[:, :, i:i + s * out_h:s, j:j + s * out_w:s] += dcols[:, :, i, j]
            gx = gxp[:, :, p:p + height, p:p + width] if p else gxp
        return gx, gw, gb


class MaxPool2(Function):
    """Non-overlapping 2x2 max pooling."""

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.ndim != 4:
            raise DimensionError(_formatter.format_dimension_error("maxpool2", "rank", x.ndim, 4))
        n, c, height, width = x.shape
        for axis, extent in (("height", height), ("width", width)):
            if extent % 2:
                raise DimensionError(_formatter.format_dimension_error("maxpool2", axis, extent, "an even extent"))
        blocks = x.reshape(n, c, height // 2, 2, width // 2, 2).transpose(0, 1, 2, 4, 3, 5)
        blocks = blocks.reshape(n, c, height // 2, width // 2, 4)
        # argmax returns the first occurrence, i.e. row-major tie-break
        self.argmax = blocks.argmax(axis=-1)
        self.x_shape = x.shape
        return np.take_along_axis(blocks, self.argmax[..., None], axis=-1)[..., 0]

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray]:
        n, c, height, width = self.x_shape
        routed = np.zeros((n, c, height // 2, width // 2, 4), dtype=grad.dtype)
        np.put_along_axis(routed, self.argmax[..., None], grad[..., None], axis=-1)
        routed = routed.reshape(n, c, height // 2, width // 2, 2, 2).transpose(0, 1, 2, 4, 3, 5)
        return (routed.reshape(self.x_shape),)


def _check_conv_shapes(x_shape: Tuple[int, ...], w_shape: Tuple[int, ...], b_shape: Tuple[int, ...],
                       stride: int, pad: int) -> None:
    if len(x_shape) != 4:
        raise DimensionError(_formatter.format_dimension_error("conv2d", "input rank", len(x_shape), 4))
    if len(w_shape) != 4:
        raise DimensionError(_formatter.format_dimension_error("conv2d", "weight rank", len(w_shape), 4))
    if w_shape[1] != x_shape[1]:
        raise DimensionError(_formatter.format_dimension_error("conv2d", "channels", w_shape[1], x_shape[1]))
    if b_shape != (w_shape[0],):
        raise DimensionError(_formatter.format_dimension_error("conv2d", "bias", b_shape[0] if b_shape else 0, w_shape[0]))
    for axis, extent in (("kernel height", w_shape[2]), ("kernel width", w_shape[3])):
        if extent % 2 == 0:
            raise DimensionError(_formatter.format_dimension_error("conv2d", axis, extent, "an odd extent"))
    if stride < 1:
        raise DimensionError(_formatter.format_dimension_error("conv2d", "stride", stride, ">= 1"))
    for axis, extent, k in (("height", x_shape[2], w_shape[2]), ("width", x_shape[3], w_shape[3])):
        if extent + 2 * pad < k:
            raise DimensionError(_formatter.format_dimension_error("conv2d", axis, extent, f">= {k - 2 * pad}"))


def conv2d(x: Tensor, weight: Tensor, bias: Tensor, stride: int = 1, pad: Optional[int] = None) -> Tensor:
    """Convolve ``x`` with ``weight``; ``pad`` defaults to "same" for odd kernels.

    Args:
        x (Tensor): Input of shape (N, C, H, W).
        weight (Tensor): Kernel of shape (K, C, kh, kw).
        bias (Tensor): Per-output-channel bias of shape (K,).
        stride (int): Step between windows.
        pad (Optional[int]): Zero padding per side; ``(kh - 1) // 2`` when None.

    Returns:
        Tensor: Output of shape (N, K, H', W').

    Raises:
        DimensionError: If any extent disagrees; the message names the axis.
    """
    if pad is None:
        pad = (weight.shape[2] - 1) // 2
    return Conv2d.apply(x, weight, bias, stride=stride, pad=pad)


def maxpool2(x: Tensor) -> Tensor:
    """Halve both spatial extents by taking 2x2 window maxima."""
    return MaxPool2.apply(x)
