"""
Adam optimizer, learning-rate schedule and gradient clipping.

Parameters are always visited in lexicographic name order, so updates and
the global gradient norm are bit-reproducible.

Example:
    >>> opt = OptimizerState()
    >>> adam_step(params, params.grads(), opt, lr=1e-4)
    >>> opt.step
    1
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ..model.params import ModelParams
from ..validators.base.error_handler import DivergenceError

logger = logging.getLogger(__name__)


def lr_at(iteration: int, cfg) -> float:
    """Step-decayed learning rate ``lr0 * decay ** floor(iteration / decay_every)``.

    Args:
        iteration (int): Zero-based training iteration.
        cfg: Any object with ``lr0``, ``decay`` and ``decay_every``.
    """
    if iteration < 0:
        raise ValueError(f"iteration must be >= 0, got {iteration}")
    return cfg.lr0 * cfg.decay ** (iteration // cfg.decay_every)


@dataclass
class OptimizerState:
    """Adam moment estimates.

    Attributes:
        beta1 (float): Decay of the first moment.
        beta2 (float): Decay of the second moment.
        eps (float): Denominator offset.
        step (int): Number of updates applied.
        m (Dict[str, np.ndarray]): First moments by parameter name.
        v (Dict[str, np.ndarray]): Second moments by parameter name.
    """

    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)


def clip_grad_norm(grads: Dict[str, np.ndarray], max_norm: float) -> float:
    """Rescale gradients in place so their global L2 norm is at most ``max_norm``.

    Returns:
        float: The norm before clipping.
    """
    total = math.sqrt(sum(float(np.sum(grads[name] * grads[name])) for name in sorted(grads)))
    if max_norm > 0 and total > max_norm:
        scale = max_norm / total
        for name in sorted(grads):
            grads[name] *= scale
    return total


def adam_step(params: ModelParams, grads: Dict[str, np.ndarray], opt: OptimizerState, lr: float) -> None:
    """Apply one bias-corrected Adam update.

    Args:
        params (ModelParams): Parameters, updated by replacing their arrays.
        grads (Dict[str, np.ndarray]): Gradient per parameter name.
        opt (OptimizerState): Moment estimates, updated in place.
        lr (float): Step size.

    Raises:
        DivergenceError: If any gradient holds a non-finite value; no
            parameter is modified in that case.
    """
    names = params.names()
    for name in names:
        if not np.all(np.isfinite(grads[name])):
            raise DivergenceError(f"Non-finite gradient in parameter '{name}'", parameter=name)

    opt.step += 1
    correction1 = 1.0 - opt.beta1 ** opt.step
    correction2 = 1.0 - opt.beta2 ** opt.step
    for name in names:
        tensor, grad = params[name], grads[name]
        m = opt.m.get(name)
        v = opt.v.get(name)
        if m is None:
            m = np.zeros_like(tensor.data)
            v = np.zeros_like(tensor.data)
        m = opt.beta1 * m + (1.0 - opt.beta1) * grad
        v = opt.beta2 * v + (1.0 - opt.beta2) * grad * grad
        opt.m[name], opt.v[name] = m, v
        update = lr * (m / correction1) / (np.sqrt(v / correction2) + opt.eps)
        tensor.data = (tensor.data - update).astype(tensor.data.dtype)
