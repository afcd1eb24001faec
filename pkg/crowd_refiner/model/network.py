"""
Forward pass of the recurrent spatial-aware counting network.

The Global Feature Embedding turns an image into features ``g`` at 1/8
resolution; a 1x1 convolution maps them to the initial density map M0. The
refinement loop then repeats: encode the current map, advance an LSTM,
predict an affine glimpse, crop that region of the map, let the Local
Refinement Network produce a signed residual from the crop and the global
context, and scatter the residual back through the inverse glimpse.

Example:
    >>> cfg = ModelConfig(image_h=32, image_w=32, width=0.25, hidden=8)
    >>> params = init_params(cfg, seed=0)
    >>> m0, mn, trace = drsan_forward(Tensor(np.zeros((1, 1, 32, 32))), params, n=2)
    >>> mn.shape, len(trace)
    ((1, 1, 4, 4), 2)
"""

import logging
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional

import numpy as np

from ..stn import AffineTransform, TransformMode, affine_grid, bilinear_sample, compose_transform, inverse_scatter
from ..tensor_core import Tensor, as_tensor, concat, conv2d, fully_connected, lstm_cell, maxpool2, relu
from ..validators.base.error_handler import ContractError, DimensionError, ErrorFormatter
from .params import CONTEXT_POOLS, GFE_KERNELS, GFE_POOL_AFTER, LRN_KERNELS, MAP_STRIDE, ModelParams

logger = logging.getLogger(__name__)

_formatter = ErrorFormatter()


@dataclass
class RefinementState:
    """State carried between refinement iterations.

    Attributes:
        M (Tensor): Current density map, shape (1, 1, h_m, w_m).
        h (Tensor): LSTM hidden state, shape (1, hidden).
        c (Tensor): LSTM memory cell, shape (1, hidden).
        i (int): Number of iterations already applied.
        n (int): Total iterations allowed.
        trace (List[AffineTransform]): Glimpses applied so far, one per
            iteration.
    """

    M: Tensor
    h: Tensor
    c: Tensor
    i: int = 0
    n: int = 0
    trace: List[AffineTransform] = field(default_factory=list)

    @classmethod
    def start(cls, m0: Tensor, hidden: int, n: int) -> "RefinementState":
        dtype = m0.data.dtype
        zeros = np.zeros((1, hidden), dtype=dtype)
        return cls(m0, Tensor(zeros), Tensor(zeros.copy()), 0, n, [])


class ForwardResult(NamedTuple):
    m0: Tensor
    mn: Tensor
    trace: List[AffineTransform]


def _column(x: Tensor, params: ModelParams, prefix: str, depth: int, pool_after=()) -> Tensor:
    for layer in range(1, depth + 1):
        weight, bias = params.conv(f"{prefix}.conv{layer}")
        x = relu(conv2d(x, weight, bias))
        if layer in pool_after:
            x = maxpool2(x)
    return x


def gfe_forward(image: Tensor, params: ModelParams) -> Tensor:
    """Global Feature Embedding: three parallel conv columns, concatenated.

    Args:
        image (Tensor): Input of shape (1, C, H, W) with H, W divisible by 8.
        params (ModelParams): Network parameters.

    Returns:
        Tensor: Features ``g`` of shape (1, C_g, H/8, W/8).

    Raises:
        DimensionError: If an image extent is not divisible by 8.
    """
    image = as_tensor(image)
    if image.ndim != 4:
        raise DimensionError(_formatter.format_dimension_error("gfe_forward", "image rank", image.ndim, 4))
    for axis, extent in (("height", image.shape[2]), ("width", image.shape[3])):
        if extent % MAP_STRIDE:
            raise DimensionError(
                _formatter.format_dimension_error("gfe_forward", axis, extent, f"a multiple of {MAP_STRIDE}")
            )
    columns = [
        _column(image, params, f"gfe.{name}", len(kernels), GFE_POOL_AFTER)
        for name, kernels in GFE_KERNELS.items()
    ]
    return concat(columns, axis=1)


def initial_map(g: Tensor, params: ModelParams) -> Tensor:
    """M0 = relu(Conv1x1(g)), shape (1, 1, h_m, w_m)."""
    weight, bias = params.conv('init')
    return relu(conv2d(g, weight, bias))


def global_context(g: Tensor, params: ModelParams) -> Optional[Tensor]:
    """Encode whole-image features into a region-sized context map.

    Features are average-pooled per channel (or flattened, depending on the
    configured pooling), passed through FC -> relu -> FC and reshaped to
    (1, 1, region_h, region_w). Returns None when context is disabled.
    """
    cfg = params.config
    if not cfg.context:
        return None
    if cfg.context_pool == CONTEXT_POOLS[0]:
        pooled = g.mean(axis=(2, 3))
    else:
        pooled = g.reshape(1, -1)
    hidden = relu(fully_connected(pooled, params['context.fc1.weight'], params['context.fc1.bias']))
    out = fully_connected(hidden, params['context.fc2.weight'], params['context.fc2.bias'])
    return out.reshape(1, 1, cfg.region_h, cfg.region_w)


def lrn_forward(region: Tensor, context: Optional[Tensor], params: ModelParams) -> Tensor:
    """Local Refinement Network: signed residual for an attended region.

    Args:
        region (Tensor): Cropped map, shape (1, 1, region_h, region_w).
        context (Optional[Tensor]): Context map of the same shape, or None.
        params (ModelParams): Network parameters.

    Returns:
        Tensor: Residual of shape (1, 1, region_h, region_w), linear output.
    """
    x = region if context is None else concat([region, context], axis=1)
    columns = [_column(x, params, f"lrn.{name}", len(kernels)) for name, kernels in LRN_KERNELS.items()]
    weight, bias = params.conv('lrn.fuse')
    return conv2d(concat(columns, axis=1), weight, bias)


def _resolve_mode(params: ModelParams, mode: Optional[TransformMode]) -> TransformMode:
    trained = params.config.mode
    mode = mode or trained
    outputs = params['head.weight'].shape[1]
    if mode.raw_size != outputs:
        raise ContractError(
            f"mode {mode.value} needs {mode.raw_size} transform-head outputs, "
            f"but the parameters were built for mode {trained.value} with {outputs}"
        )
    return mode


def rsar_step(state: RefinementState, g: Tensor, c_g: Optional[Tensor], params: ModelParams,
              mode: Optional[TransformMode] = None) -> RefinementState:
    """Apply one refinement iteration.

    Args:
        state (RefinementState): Map and recurrent state after ``state.i``
            iterations.
        g (Tensor): GFE features; unused by the step itself but kept in the
            signature so callers pass the same context every iteration.
        c_g (Optional[Tensor]): Global context map or None.
        params (ModelParams): Network parameters.
        mode (Optional[TransformMode]): Transform constraint; defaults to
            the configured one.

    Returns:
        RefinementState: New state with ``i + 1`` iterations and the
        glimpse appended to the trace.

    Raises:
        ContractError: If the state has already used all its iterations, or
            ``mode`` needs a head size other than the trained one.
        SingularTransformError: If a RAW transform cannot be inverted.
    """
    if state.i >= state.n:
        raise ContractError(f"rsar_step: all {state.n} refinement iterations already applied")
    cfg = params.config
    mode = _resolve_mode(params, mode)
    _, _, map_h, map_w = state.M.shape

    encoded = fully_connected(state.M.reshape(1, map_h * map_w), params['encoder.weight'], params['encoder.bias'])
    h, c = lstm_cell(encoded, state.h, state.c, params.lstm)
    raw = fully_connected(h, params['head.weight'], params['head.bias'])
    transform = compose_transform(raw, mode, cfg.s_min)

    flat_map = state.M.reshape(1, map_h, map_w)
    region = bilinear_sample(flat_map, affine_grid(transform, cfg.region_h, cfg.region_w))
    residual = lrn_forward(region.reshape(1, 1, cfg.region_h, cfg.region_w), c_g, params)
    scattered = inverse_scatter(residual.reshape(1, cfg.region_h, cfg.region_w), transform, map_h, map_w)
    refined = relu(state.M + scattered.reshape(1, 1, map_h, map_w))
    return RefinementState(refined, h, c, state.i + 1, state.n, state.trace + [transform])


def drsan_forward(image: Tensor, params: ModelParams, n: int,
                  mode: Optional[TransformMode] = None) -> ForwardResult:
    """Run the full network: initial map followed by ``n`` refinements.

    Args:
        image (Tensor): Input of shape (1, C, H, W).
        params (ModelParams): Network parameters.
        n (int): Refinement iterations, >= 0.
        mode (Optional[TransformMode]): Transform constraint override.

    Returns:
        ForwardResult: ``(m0, mn, trace)``; for n = 0 ``mn`` is ``m0``.

    Raises:
        ContractError: If ``n`` is negative or ``mode`` does not fit the
            transform head.
    """
    if n < 0:
        raise ContractError(f"drsan_forward: refinement steps must be >= 0, got {n}")
    mode = _resolve_mode(params, mode)
    g = gfe_forward(image, params)
    m0 = initial_map(g, params)
    if n == 0:
        return ForwardResult(m0, m0, [])
    c_g = global_context(g, params)
    state = RefinementState.start(m0, params.config.hidden, n)
    while state.i < n:
        state = rsar_step(state, g, c_g, params, mode)
    logger.debug("refined %d iterations", n)
    return ForwardResult(m0, state.M, state.trace)
