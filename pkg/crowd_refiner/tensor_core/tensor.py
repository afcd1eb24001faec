"""
Core tensor module of the reverse-mode differentiation engine.

A ``Tensor`` wraps a NumPy array. Every differentiable primitive is a
``Function`` subclass; applying one records a node carrying its operands and
whatever context its backward pass needs. Nodes receive a monotonically
increasing sequence number when they are recorded, so the set of nodes that
reach a loss, sorted by that number, is the forward tape in topological
order. ``Tensor.backward`` replays that tape in reverse.

Example:
    >>> x = Tensor([1.0, 2.0, 3.0], requires_grad=True)
    >>> loss = (x * x).sum()
    >>> loss.backward()
    >>> x.grad
    array([2., 4., 6.])
"""

import itertools
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..validators.base.error_handler import ContractError, ConfigError

logger = logging.getLogger(__name__)

_DTYPES = {'float64': np.float64, 'float32': np.float32}
_default_dtype = np.float64
_sequence = itertools.count()

ArrayLike = Union[np.ndarray, float, int, Sequence[Any]]


def set_default_dtype(name: str) -> None:
    """Select the element type of newly created tensors.

    Args:
        name (str): ``'float64'`` (default) or ``'float32'``.

    Raises:
        ConfigError: If the name is not a supported element type.
    """
    global _default_dtype
    if name not in _DTYPES:
        raise ConfigError(f"Invalid value '{name}' in dtype: expected one of {sorted(_DTYPES)}")
    _default_dtype = _DTYPES[name]
    logger.debug("default dtype set to %s", name)


def get_default_dtype() -> type:
    """Return the NumPy element type used for new tensors."""
    return _default_dtype


class Function:
    """Base class for differentiable primitives.

    Subclasses implement ``forward`` over raw arrays and ``backward``, which
    receives d(loss)/d(output) and returns one gradient (or None) per
    operand, in operand order.

    Attributes:
        tensors (Tuple[Tensor, ...]): Operands of this application.
        seq (int): Position of this node on the forward tape.
    """

    def __init__(self, *tensors: "Tensor"):
        self.tensors = tensors
        self.seq = next(_sequence)
        self.output: Optional["Tensor"] = None

    def forward(self, *args: np.ndarray, **kwargs: Any) -> np.ndarray:
        raise NotImplementedError("Forward pass not implemented for this function")

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        raise NotImplementedError("Backward pass not implemented for this function")

    @classmethod
    def apply(cls, *tensors: "Tensor", **kwargs: Any) -> "Tensor":
        """Record this primitive on the tape and run its forward pass.

        Args:
            *tensors (Tensor): Operands.
            **kwargs (Any): Non-differentiable arguments for ``forward``.

        Returns:
            Tensor: The output, linked to this node when any operand
            requires a gradient.
        """
        func = cls(*tensors)
        out_data = func.forward(*(t.data for t in tensors), **kwargs)
        requires_grad = any(t.requires_grad for t in tensors)
        out = Tensor(out_data, creator=func if requires_grad else None, requires_grad=requires_grad)
        func.output = out
        return out

    @staticmethod
    def unbroadcast(grad: np.ndarray, to_shape: Tuple[int, ...]) -> np.ndarray:
        """Sum out broadcast dimensions so ``grad`` matches ``to_shape``."""
        if grad.shape == to_shape:
            return grad
        while grad.ndim > len(to_shape):
            grad = grad.sum(axis=0)
        for dim, extent in enumerate(to_shape):
            if extent == 1 and grad.shape[dim] != 1:
                grad = grad.sum(axis=dim, keepdims=True)
        return grad


class Graph:
    """Recorded primitive applications reaching one output, in tape order.

    Attributes:
        nodes (List[Function]): Nodes sorted by their tape position; every
            node's operands were produced by earlier nodes or are leaves.
    """

    def __init__(self, nodes: List[Function]):
        self.nodes = nodes

    @classmethod
    def from_output(cls, output: "Tensor") -> "Graph":
        """Collect every node that contributes to ``output``."""
        seen: Dict[int, Function] = {}
        stack = [output.creator] if output.creator is not None else []
        while stack:
            node = stack.pop()
            if node.seq in seen:
                continue
            seen[node.seq] = node
            for operand in node.tensors:
                if operand.creator is not None and operand.creator.seq not in seen:
                    stack.append(operand.creator)
        return cls([seen[k] for k in sorted(seen)])

    def __len__(self) -> int:
        return len(self.nodes)


class Tensor:
    """N-dimensional array participating in reverse-mode differentiation.

    Attributes:
        data (np.ndarray): Values in row-major order.
        requires_grad (bool): Whether gradients flow into this tensor.
        grad (Optional[np.ndarray]): Same-shape accumulator; zeros until a
            backward pass reaches this tensor. None when no gradient is
            required.
        creator (Optional[Function]): Node that produced this tensor, None
            for leaves.
        name (Optional[str]): Optional label used in diagnostics.
    """

    def __init__(
        self,
        data: ArrayLike,
        requires_grad: bool = False,
        creator: Optional[Function] = None,
        name: Optional[str] = None,
        dtype: Optional[type] = None,
    ):
        if isinstance(data, np.ndarray) and dtype is None and data.dtype in (np.float32, np.float64):
            self.data = data
        else:
            self.data = np.asarray(data, dtype=dtype or _default_dtype)
        self.requires_grad = requires_grad
        self.creator = creator
        self.name = name
        self.grad: Optional[np.ndarray] = np.zeros_like(self.data) if requires_grad else None

    # ------------------------------------------------------------------ info
    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return int(self.data.size)

    @property
    def is_leaf(self) -> bool:
        return self.creator is None

    def numpy(self) -> np.ndarray:
        return self.data

    def item(self) -> float:
        if self.data.size != 1:
            raise ContractError(f"item() needs a single element, tensor has shape {self.shape}")
        return float(self.data.reshape(()))

    def detach(self) -> "Tensor":
        """Return a tensor sharing values but cut from the graph."""
        return Tensor(self.data, requires_grad=False)

    def zero_grad(self) -> None:
        if self.requires_grad:
            self.grad = np.zeros_like(self.data)

    def __repr__(self) -> str:
        label = f", name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad}{label})"

    # -------------------------------------------------------------- backward
    def backward(self) -> None:
        """Propagate d(self)/d(x) into every reachable tensor requiring grad.

        The tape is replayed in reverse. Gradients flowing between nodes are
        kept in a per-call buffer, then added onto each tensor's ``grad``, so
        calling backward twice without zeroing yields exactly twice the
        single-call gradients.

        Raises:
            ContractError: If this tensor holds more than one element.
        """
        if self.data.size != 1:
            raise ContractError(
                f"backward() requires a scalar loss, got shape {self.shape}"
            )
        if not self.requires_grad:
            return
        graph = Graph.from_output(self)
        pending: Dict[int, np.ndarray] = {id(self): np.ones_like(self.data)}
        owners: Dict[int, Tensor] = {id(self): self}

        # consumers always sit later on the tape, so a node's upstream
        # gradient is complete by the time the reverse sweep reaches it
        for node in reversed(graph.nodes):
            upstream = pending.get(id(node.output))
            if upstream is None:
                continue
            grads = node.backward(upstream)
            if not isinstance(grads, tuple):
                grads = (grads,)
            for operand, g in zip(node.tensors, grads):
                if g is None or not operand.requires_grad:
                    continue
                key = id(operand)
                g = np.asarray(g, dtype=operand.data.dtype).reshape(operand.shape)
                if key in pending:
                    pending[key] = pending[key] + g
                else:
                    pending[key] = g
                    owners[key] = operand

        for key, tensor in owners.items():
            tensor.grad = tensor.grad + pending[key]

    # ------------------------------------------------------------- operators
    def __add__(self, other: Union["Tensor", float]) -> "Tensor":
        from .ops import Add
        return Add.apply(self, as_tensor(other))

    __radd__ = __add__

    def __sub__(self, other: Union["Tensor", float]) -> "Tensor":
        from .ops import Sub
        return Sub.apply(self, as_tensor(other))

    def __rsub__(self, other: Union["Tensor", float]) -> "Tensor":
        from .ops import Sub
        return Sub.apply(as_tensor(other), self)

    def __mul__(self, other: Union["Tensor", float]) -> "Tensor":
        from .ops import Mul
        return Mul.apply(self, as_tensor(other))

    __rmul__ = __mul__

    def __neg__(self) -> "Tensor":
        from .ops import Neg
        return Neg.apply(self)

    def __matmul__(self, other: "Tensor") -> "Tensor":
        from .ops import MatMul
        return MatMul.apply(self, other)

    def __getitem__(self, idx: Any) -> "Tensor":
        from .ops import GetItem
        return GetItem.apply(self, idx=idx)

    def sum(self, axis: Optional[Union[int, Tuple[int, ...]]] = None, keepdims: bool = False) -> "Tensor":
        from .ops import Sum
        return Sum.apply(self, axis=axis, keepdims=keepdims)

    def mean(self, axis: Optional[Union[int, Tuple[int, ...]]] = None, keepdims: bool = False) -> "Tensor":
        from .ops import Mean
        return Mean.apply(self, axis=axis, keepdims=keepdims)

    def reshape(self, *shape: int) -> "Tensor":
        from .ops import Reshape
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return Reshape.apply(self, shape=shape)

    def transpose(self, *axes: int) -> "Tensor":
        from .ops import Transpose
        return Transpose.apply(self, axes=axes or None)


def as_tensor(value: Union[Tensor, ArrayLike]) -> Tensor:
    """Wrap constants as non-differentiable tensors; pass tensors through."""
    if isinstance(value, Tensor):
        return value
    return Tensor(value, requires_grad=False)
