"""
Elementary differentiable operations.

Arithmetic with broadcasting, reductions, movement ops (reshape, transpose,
indexing, concatenation, stacking) and the elementwise nonlinearities. Each
class is a ``Function``; user code reaches them through ``Tensor`` operators
or the helpers at the bottom of this module.
"""

from typing import Any, Optional, Sequence, Tuple

import numpy as np

from .tensor import Function, Tensor, as_tensor
from ..validators.base.error_handler import DimensionError, ErrorFormatter

_formatter = ErrorFormatter()


class Add(Function):
    def forward(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        self.x_shape, self.y_shape = x.shape, y.shape
        return x + y

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return Function.unbroadcast(grad, self.x_shape), Function.unbroadcast(grad, self.y_shape)


class Sub(Function):
    def forward(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        self.x_shape, self.y_shape = x.shape, y.shape
        return x - y

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return Function.unbroadcast(grad, self.x_shape), Function.unbroadcast(-grad, self.y_shape)


class Mul(Function):
    def forward(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        self.x, self.y = x, y
        return x * y

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], Optional[np.ndarray]]:
        gx = Function.unbroadcast(grad * self.y, self.x.shape) if self.tensors[0].requires_grad else None
        gy = Function.unbroadcast(grad * self.x, self.y.shape) if self.tensors[1].requires_grad else None
        return gx, gy


class Neg(Function):
    def forward(self, x: np.ndarray) -> np.ndarray:
        return -x

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray]:
        return (-grad,)


class MatMul(Function):
    """Product of two 2-D tensors."""

    def forward(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if x.ndim != 2 or y.ndim != 2:
            raise DimensionError(_formatter.format_dimension_error("matmul", "rank", min(x.ndim, y.ndim), 2))
        if x.shape[1] != y.shape[0]:
            raise DimensionError(_formatter.format_dimension_error("matmul", "inner", y.shape[0], x.shape[1]))
        self.x, self.y = x, y
        return x @ y

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], Optional[np.ndarray]]:
        gx = grad @ self.y.T if self.tensors[0].requires_grad else None
        gy = self.x.T @ grad if self.tensors[1].requires_grad else None
        return gx, gy


class Sum(Function):
    def forward(self, x: np.ndarray, axis: Any = None, keepdims: bool = False) -> np.ndarray:
        self.x_shape, self.axis, self.keepdims = x.shape, axis, keepdims
        return np.asarray(x.sum(axis=axis, keepdims=keepdims))

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray]:
        if self.axis is not None and not self.keepdims:
            axes = (self.axis,) if isinstance(self.axis, int) else self.axis
            axes = tuple(a % len(self.x_shape) for a in axes)
            for a in sorted(axes):
                grad = np.expand_dims(grad, a)
        return (np.broadcast_to(grad, self.x_shape).copy(),)


class Mean(Function):
    def forward(self, x: np.ndarray, axis: Any = None, keepdims: bool = False) -> np.ndarray:
        self.x_shape, self.axis, self.keepdims = x.shape, axis, keepdims
        out = np.asarray(x.mean(axis=axis, keepdims=keepdims))
        self.count = x.size // max(out.size, 1) if x.size else 1
        return out

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray]:
        if self.axis is not None and not self.keepdims:
            axes = (self.axis,) if isinstance(self.axis, int) else self.axis
            axes = tuple(a % len(self.x_shape) for a in axes)
            for a in sorted(axes):
                grad = np.expand_dims(grad, a)
        return (np.broadcast_to(grad / self.count, self.x_shape).copy(),)


class Reshape(Function):
    def forward(self, x: np.ndarray, shape: Tuple[int, ...] = ()) -> np.ndarray:
        self.x_shape = x.shape
        return x.reshape(shape)

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray]:
        return (grad.reshape(self.x_shape),)


class Transpose(Function):
    def forward(self, x: np.ndarray, axes: Optional[Sequence[int]] = None) -> np.ndarray:
        self.axes = tuple(axes) if axes else tuple(reversed(range(x.ndim)))
        return np.transpose(x, self.axes)

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray]:
        return (np.transpose(grad, np.argsort(self.axes)),)


class GetItem(Function):
    def forward(self, x: np.ndarray, idx: Any = None) -> np.ndarray:
        self.x_shape, self.idx = x.shape, idx
        return np.array(x[idx])

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray]:
        full = np.zeros(self.x_shape, dtype=grad.dtype)
        np.add.at(full, self.idx, grad)
        return (full,)


class Concat(Function):
    def forward(self, *xs: np.ndarray, axis: int = 0) -> np.ndarray:
        self.axis = axis
        self.splits = np.cumsum([x.shape[axis] for x in xs])[:-1]
        return np.concatenate(xs, axis=axis)

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray, ...]:
        return tuple(np.split(grad, self.splits, axis=self.axis))


class Stack(Function):
    def forward(self, *xs: np.ndarray, axis: int = 0) -> np.ndarray:
        self.axis = axis
        return np.stack(xs, axis=axis)

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray, ...]:
        return tuple(np.take(grad, i, axis=self.axis) for i in range(grad.shape[self.axis]))


class Relu(Function):
    def forward(self, x: np.ndarray) -> np.ndarray:
        self.mask = x > 0
        return np.where(self.mask, x, 0).astype(x.dtype)

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray]:
        return (grad * self.mask,)


class Sigmoid(Function):
    def forward(self, x: np.ndarray) -> np.ndarray:
        # exp(-|x|) never overflows
        e = np.exp(-np.abs(x))
        self.out = np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e)).astype(x.dtype)
        return self.out

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray]:
        return (grad * self.out * (1.0 - self.out),)


class Tanh(Function):
    def forward(self, x: np.ndarray) -> np.ndarray:
        self.out = np.tanh(x)
        return self.out

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray]:
        return (grad * (1.0 - self.out * self.out),)


def concat(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    """Concatenate tensors along an existing axis."""
    return Concat.apply(*[as_tensor(t) for t in tensors], axis=axis)


def stack(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    """Stack tensors along a new axis."""
    return Stack.apply(*[as_tensor(t) for t in tensors], axis=axis)


def relu(x: Tensor) -> Tensor:
    return Relu.apply(x)


def sigmoid(x: Tensor) -> Tensor:
    return Sigmoid.apply(x)


def tanh(x: Tensor) -> Tensor:
    return Tanh.apply(x)


def square_error(a: Tensor, b: Tensor) -> Tensor:
    """Sum of squared elementwise differences."""
    diff = a - b
    return (diff * diff).sum()
