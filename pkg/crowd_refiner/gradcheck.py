"""
Finite-difference gradient checks.

Each check reduces an operation's output to a scalar with a fixed random
projection, back-propagates once, and compares the analytic gradient of
every input with central differences. The reported error of one input is

    max |analytic - numeric| / max(max |analytic|, max |numeric|, 1e-12)

Inputs are drawn away from the kinks of relu, max-pooling and bilinear
sampling so the difference quotient is well defined.

Example:
    >>> errors = primitive_suite(seed=0)
    >>> max(errors.values()) < 1e-5
    True
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .model.network import drsan_forward
from .model.params import ModelConfig, ModelParams
from .stn import AffineTransform, TransformMode, affine_grid, bilinear_sample, compose_transform, inverse_scatter
from .stn.transform import invert_affine
from .tensor_core import LSTMParams, Tensor, activation, conv2d, fully_connected, lstm_cell, maxpool2
from .training.init import init_params

logger = logging.getLogger(__name__)

STEP = 1e-5
PRIMITIVE_TOLERANCE = 1e-5
NETWORK_TOLERANCE = 1e-3


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = max(float(np.max(np.abs(analytic))), float(np.max(np.abs(numeric))), 1e-12)
    return float(np.max(np.abs(analytic - numeric))) / scale


def numeric_gradient(objective: Callable[[], float], array: np.ndarray,
                     indices: Optional[Sequence[tuple]] = None, step: float = STEP) -> np.ndarray:
    """Central differences of ``objective`` with respect to entries of ``array``.

    ``array`` is perturbed in place and restored. Entries not listed in
    ``indices`` (all when None) are left at zero.
    """
    grad = np.zeros_like(array)
    for index in (indices if indices is not None else np.ndindex(*array.shape)):
        original = array[index]
        array[index] = original + step
        plus = objective()
        array[index] = original - step
        minus = objective()
        array[index] = original
        grad[index] = (plus - minus) / (2.0 * step)
    return grad


def check_gradients(build: Callable[[], Tensor], inputs: Dict[str, Tensor],
                    samples: Optional[int] = None, seed: int = 0) -> Dict[str, float]:
    """Compare analytic and numeric gradients of a scalar-valued graph.

    Args:
        build (Callable[[], Tensor]): Rebuilds the scalar from the current
            values of ``inputs``.
        inputs (Dict[str, Tensor]): Differentiable inputs by name.
        samples (Optional[int]): Entries checked per input; all when None.
        seed (int): Seed of the entry selection.

    Returns:
        Dict[str, float]: Relative error per input.
    """
    for tensor in inputs.values():
        tensor.zero_grad()
    build().backward()
    rng = np.random.default_rng(seed)
    errors: Dict[str, float] = {}
    for name, tensor in inputs.items():
        indices = None
        if samples is not None and tensor.size > samples:
            flat = rng.choice(tensor.size, size=samples, replace=False)
            indices = [np.unravel_index(i, tensor.shape) for i in sorted(flat)]
        numeric = numeric_gradient(lambda: build().item(), tensor.data, indices)
        analytic = tensor.grad
        if indices is not None:
            picked = tuple(np.array(axis) for axis in zip(*indices))
            analytic, numeric = analytic[picked], numeric[picked]
        errors[name] = relative_error(analytic, numeric)
    return errors


def _projection(rng: np.random.Generator, shape) -> Tensor:
    return Tensor(rng.standard_normal(shape))


def _away_from_zero(rng: np.random.Generator, shape, margin: float = 0.1) -> np.ndarray:
    values = rng.standard_normal(shape)
    return values + np.sign(values) * margin


def _off_lattice_grid(rng: np.random.Generator, out_h: int, out_w: int, height: int, width: int) -> np.ndarray:
    """Sampling grid whose pixel coordinates stay clear of integer values."""
    grid = rng.uniform(-1.2, 1.2, size=(out_h, out_w, 2))
    for axis, extent in ((0, width), (1, height)):
        pixels = (grid[..., axis] + 1.0) * (extent - 1) / 2.0
        frac = pixels - np.floor(pixels)
        nudged = np.clip(frac, 0.05, 0.95)
        grid[..., axis] = (np.floor(pixels) + nudged) * 2.0 / (extent - 1) - 1.0
    return grid


def primitive_suite(seed: int = 0) -> Dict[str, float]:
    """Run the per-primitive checks; return the worst error of each primitive."""
    rng = np.random.default_rng(seed)
    results: Dict[str, float] = {}

    def record(name: str, build: Callable[[], Tensor], inputs: Dict[str, Tensor]) -> None:
        results[name] = max(check_gradients(build, inputs, seed=seed).values())

    x = Tensor(rng.standard_normal((1, 2, 6, 6)), requires_grad=True)
    w = Tensor(rng.standard_normal((3, 2, 3, 3)), requires_grad=True)
    b = Tensor(rng.standard_normal(3), requires_grad=True)
    r = _projection(rng, (1, 3, 6, 6))
    record('conv2d', lambda: (conv2d(x, w, b) * r).sum(), {'x': x, 'weight': w, 'bias': b})

    # distinct values keep every window's argmax stable under the step
    pooled = Tensor(rng.permutation(64).reshape(1, 1, 8, 8) * 0.1, requires_grad=True)
    r = _projection(rng, (1, 1, 4, 4))
    record('maxpool2', lambda: (maxpool2(pooled) * r).sum(), {'x': pooled})

    fx = Tensor(rng.standard_normal((2, 5)), requires_grad=True)
    fw = Tensor(rng.standard_normal((5, 4)), requires_grad=True)
    fb = Tensor(rng.standard_normal(4), requires_grad=True)
    r = _projection(rng, (2, 4))
    record('fully_connected', lambda: (fully_connected(fx, fw, fb) * r).sum(), {'x': fx, 'weight': fw, 'bias': fb})

    for kind in ('relu', 'sigmoid', 'tanh'):
        a = Tensor(_away_from_zero(rng, (3, 4)), requires_grad=True)
        r = _projection(rng, (3, 4))
        record(kind, lambda a=a, r=r, kind=kind: (activation(a, kind) * r).sum(), {'x': a})

    hidden = 3
    lx = Tensor(rng.standard_normal((1, 4)), requires_grad=True)
    lh = Tensor(rng.standard_normal((1, hidden)), requires_grad=True)
    lc = Tensor(rng.standard_normal((1, hidden)), requires_grad=True)
    lp = LSTMParams(
        Tensor(rng.standard_normal((4, 4 * hidden)) * 0.5, requires_grad=True),
        Tensor(rng.standard_normal((hidden, 4 * hidden)) * 0.5, requires_grad=True),
        Tensor(rng.standard_normal(4 * hidden) * 0.5, requires_grad=True),
    )
    rh, rc = _projection(rng, (1, hidden)), _projection(rng, (1, hidden))

    def lstm_objective() -> Tensor:
        h, c = lstm_cell(lx, lh, lc, lp)
        return (h * rh).sum() + (c * rc).sum()

    record('lstm_cell', lstm_objective, {
        'x': lx, 'h_prev': lh, 'c_prev': lc,
        'weight_x': lp.weight_x, 'weight_h': lp.weight_h, 'bias': lp.bias,
    })

    values = Tensor(rng.standard_normal((2, 5, 6)), requires_grad=True)
    grid = Tensor(_off_lattice_grid(rng, 4, 3, 5, 6), requires_grad=True)
    r = _projection(rng, (2, 4, 3))
    record('bilinear_sample', lambda: (bilinear_sample(values, grid) * r).sum(), {'values': values, 'grid': grid})

    theta = Tensor(np.array([[0.8, 0.1, 0.2], [-0.15, 0.7, -0.1]]), requires_grad=True)
    r = _projection(rng, (3, 4, 2))
    record('affine_grid', lambda: (affine_grid(AffineTransform(theta), 3, 4) * r).sum(), {'theta': theta})

    inverse_theta = Tensor(np.array([[1.3, 0.2, 0.1], [-0.1, 1.1, 0.3]]), requires_grad=True)
    r = _projection(rng, (2, 3))
    record('invert_affine', lambda: (invert_affine(AffineTransform(inverse_theta)).theta * r).sum(),
           {'theta': inverse_theta})

    for mode in (TransformMode.T, TransformMode.TS, TransformMode.TSR):
        raw = Tensor(rng.standard_normal(5), requires_grad=True)
        r = _projection(rng, (2, 3))
        record(f'compose_transform[{mode.value}]',
               lambda raw=raw, r=r, mode=mode: (compose_transform(raw, mode).theta * r).sum(), {'raw': raw})

    # a region-sized residual scattered back through a glimpse; the
    # transform is chosen so no sampling point sits on the pixel lattice
    residual = Tensor(rng.standard_normal((1, 4, 4)), requires_grad=True)
    glimpse = Tensor(np.array([[0.55, 0.05, 0.13], [-0.04, 0.6, -0.07]]), requires_grad=True)
    r = _projection(rng, (1, 8, 8))
    record('inverse_scatter', lambda: (inverse_scatter(residual, AffineTransform(glimpse), 8, 8) * r).sum(),
           {'residual': residual, 'theta': glimpse})

    for name, error in results.items():
        logger.info("gradcheck %-28s %.3e", name, error)
    return results


def network_config(size: int = 32) -> ModelConfig:
    """Reduced architecture used by the end-to-end check."""
    return ModelConfig(image_h=size, image_w=size, width=0.25, hidden=8, mode=TransformMode.TSR)


def network_suite(seed: int = 0, steps: int = 3, size: int = 32, samples: int = 3,
                  params: Optional[ModelParams] = None) -> Dict[str, float]:
    """End-to-end check through ``steps`` refinement iterations.

    A few entries of every parameter array are checked. Weights are drawn
    larger than at training time, and the transform head is randomized, so
    every part of the graph carries signal.

    Returns:
        Dict[str, float]: Relative error per parameter name.
    """
    rng = np.random.default_rng(seed)
    if params is None:
        params = init_params(network_config(size), seed, std=0.3)
        params['head.weight'].data = rng.standard_normal(params['head.weight'].shape) * 0.3
    cfg = params.config
    image = Tensor(rng.uniform(0.0, 1.0, size=(1, cfg.channels, cfg.image_h, cfg.image_w)))
    target = Tensor(rng.uniform(0.0, 0.1, size=(1, 1, cfg.map_h, cfg.map_w)))

    def objective() -> Tensor:
        m0, mn, _ = drsan_forward(image, params, steps)
        d0, dn = m0 - target, mn - target
        return (d0 * d0).sum() + (dn * dn).sum()

    errors = check_gradients(objective, dict(params.items()), samples=samples, seed=seed)
    worst: List[str] = sorted(errors, key=errors.get, reverse=True)[:3]
    logger.info("gradcheck network: worst %s", ", ".join(f"{n}={errors[n]:.2e}" for n in worst))
    return errors
