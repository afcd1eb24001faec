"""
Model configuration, architecture table and the named parameter store.

Every learnable array of the network lives in one ``ModelParams`` mapping
keyed by a dotted name (``gfe.L.conv1.weight``, ``lstm.weight_h`` ...).
The set of names and shapes, the inventory, is a pure function of the
``ModelConfig``, so checkpoints can be validated against it and the
optimizer can walk parameters in a fixed lexicographic order.

Example:
    >>> cfg = ModelConfig(image_h=32, image_w=32, width=0.5, hidden=16)
    >>> inv = parameter_inventory(cfg)
    >>> inv['init.weight']
    (1, 12, 1, 1)
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from ..stn.transform import DEFAULT_S_MIN, TransformMode
from ..tensor_core import LSTMParams, Tensor
from ..validators.base.error_handler import ConfigError, ErrorFormatter

logger = logging.getLogger(__name__)

_formatter = ErrorFormatter()

# Global Feature Embedding: kernel sizes per column, channels per layer
GFE_KERNELS: Dict[str, Tuple[int, ...]] = {
    'L': (9, 7, 7, 7, 5, 5, 5),
    'M': (7, 5, 5, 5, 3, 3, 3),
    'S': (5, 3, 3, 3, 3, 3, 3),
}
GFE_CHANNELS: Tuple[int, ...] = (8, 16, 16, 16, 16, 16, 8)
# 1-based layer indices followed by a 2x2 max-pool
GFE_POOL_AFTER: Tuple[int, ...] = (2, 4, 6)

# Local Refinement Network: no pooling, region resolution is preserved
LRN_KERNELS: Dict[str, Tuple[int, ...]] = {
    'L': (7, 5, 5, 5, 3),
    'M': (5, 3, 3, 3, 3),
    'S': (3, 3, 3, 3, 3),
}
LRN_CHANNELS = 8

MAP_STRIDE = 8
CONTEXT_HIDDEN = 256
# initial glimpse scale s_min + (1 - s_min) * sigmoid(7) is within 1e-3 of the full map
HEAD_SCALE_LOGIT = 7.0
CONTEXT_POOLS = ('avg', 'flatten')


def _scaled(channels: int, width: float) -> int:
    return max(1, int(round(channels * width)))


@dataclass
class ModelConfig:
    """Hyper-parameters that fix the network's shape.

    Attributes:
        image_h (int): Input rows, divisible by 8.
        image_w (int): Input columns, divisible by 8.
        channels (int): Input channels, 1 (grayscale) or 3.
        width (float): Channel multiplier applied to both conv towers.
        hidden (int): Size of the map encoding and of the LSTM state.
        region_h (Optional[int]): Rows of an attended region; defaults to
            half the density-map rows.
        region_w (Optional[int]): Columns of an attended region; defaults to
            half the density-map columns.
        mode (TransformMode): Constraint on the predicted transforms.
        context (bool): Whether the global context map feeds the LRN.
        context_pool (str): ``'avg'`` pools features per channel before the
            context layers, ``'flatten'`` feeds every feature.
        s_min (float): Smallest admissible glimpse scale.
    """

    image_h: int = 64
    image_w: int = 64
    channels: int = 1
    width: float = 1.0
    hidden: int = 512
    region_h: Optional[int] = None
    region_w: Optional[int] = None
    mode: TransformMode = TransformMode.TSR
    context: bool = True
    context_pool: str = 'avg'
    s_min: float = DEFAULT_S_MIN

    def __post_init__(self):
        for name in ('image_h', 'image_w'):
            extent = getattr(self, name)
            if extent <= 0 or extent % MAP_STRIDE:
                raise ConfigError(
                    _formatter.format_invalid_value_error(extent, name, f"must be a positive multiple of {MAP_STRIDE}")
                )
        if self.channels not in (1, 3):
            raise ConfigError(_formatter.format_invalid_value_error(self.channels, "channels", "expected 1 or 3"))
        if self.context_pool not in CONTEXT_POOLS:
            raise ConfigError(
                _formatter.format_invalid_value_error(self.context_pool, "context_pool", f"expected one of {CONTEXT_POOLS}")
            )
        if not 0.0 < self.s_min < 1.0:
            raise ConfigError(_formatter.format_invalid_value_error(self.s_min, "s_min", "must lie in (0, 1)"))
        if self.width <= 0:
            raise ConfigError(_formatter.format_invalid_value_error(self.width, "width", "must be > 0"))
        if self.hidden < 1:
            raise ConfigError(_formatter.format_invalid_value_error(self.hidden, "hidden", "must be >= 1"))
        if isinstance(self.mode, str):
            self.mode = TransformMode.parse(self.mode)
        if self.region_h is None:
            self.region_h = max(2, self.map_h // 2)
        if self.region_w is None:
            self.region_w = max(2, self.map_w // 2)
        if self.region_h < 2 or self.region_w < 2:
            raise ConfigError(_formatter.format_invalid_value_error(
                (self.region_h, self.region_w), "region", "both extents must be >= 2"))

    @property
    def map_h(self) -> int:
        return self.image_h // MAP_STRIDE

    @property
    def map_w(self) -> int:
        return self.image_w // MAP_STRIDE

    @property
    def gfe_channels(self) -> Tuple[int, ...]:
        return tuple(_scaled(c, self.width) for c in GFE_CHANNELS)

    @property
    def lrn_channels(self) -> int:
        return _scaled(LRN_CHANNELS, self.width)

    @property
    def feature_channels(self) -> int:
        """Channel count C_g of the concatenated GFE output."""
        return len(GFE_KERNELS) * self.gfe_channels[-1]

    def with_overrides(self, **changes) -> "ModelConfig":
        return replace(self, **changes)


def _conv_shapes(prefix: str, kernels: Dict[str, Tuple[int, ...]], channels: List[int],
                 in_channels: int) -> Dict[str, Tuple[int, ...]]:
    shapes: Dict[str, Tuple[int, ...]] = {}
    for column, sizes in kernels.items():
        c_in = in_channels
        for layer, (k, c_out) in enumerate(zip(sizes, channels), start=1):
            shapes[f"{prefix}.{column}.conv{layer}.weight"] = (c_out, c_in, k, k)
            shapes[f"{prefix}.{column}.conv{layer}.bias"] = (c_out,)
            c_in = c_out
    return shapes


def parameter_inventory(cfg: ModelConfig) -> Dict[str, Tuple[int, ...]]:
    """Names and shapes of every learnable array, sorted by name.

    Args:
        cfg (ModelConfig): Network configuration.

    Returns:
        Dict[str, Tuple[int, ...]]: Ordered mapping from name to shape.
    """
    c_g = cfg.feature_channels
    map_cells = cfg.map_h * cfg.map_w
    region_cells = cfg.region_h * cfg.region_w
    h = cfg.hidden

    shapes = _conv_shapes('gfe', GFE_KERNELS, list(cfg.gfe_channels), cfg.channels)
    shapes['init.weight'] = (1, c_g, 1, 1)
    shapes['init.bias'] = (1,)
    shapes['encoder.weight'] = (map_cells, h)
    shapes['encoder.bias'] = (h,)
    shapes['lstm.weight_x'] = (h, 4 * h)
    shapes['lstm.weight_h'] = (h, 4 * h)
    shapes['lstm.bias'] = (4 * h,)
    shapes['head.weight'] = (h, cfg.mode.raw_size)
    shapes['head.bias'] = (cfg.mode.raw_size,)
    if cfg.context:
        pooled = c_g if cfg.context_pool == 'avg' else c_g * map_cells
        shapes['context.fc1.weight'] = (pooled, CONTEXT_HIDDEN)
        shapes['context.fc1.bias'] = (CONTEXT_HIDDEN,)
        shapes['context.fc2.weight'] = (CONTEXT_HIDDEN, region_cells)
        shapes['context.fc2.bias'] = (region_cells,)
    lrn_in = 2 if cfg.context else 1
    shapes.update(_conv_shapes('lrn', LRN_KERNELS, [cfg.lrn_channels] * 5, lrn_in))
    shapes['lrn.fuse.weight'] = (1, len(LRN_KERNELS) * cfg.lrn_channels, 1, 1)
    shapes['lrn.fuse.bias'] = (1,)
    return dict(sorted(shapes.items()))


def head_bias(mode: TransformMode) -> np.ndarray:
    """Transform-head bias producing the full-map glimpse while weights are zero.

    Scale logits put the squashed scale within 1e-3 of its upper bound.
    """
    if mode is TransformMode.RAW:
        return np.array([1.0, 0.0, 0.0, 0.0, 1.0, 0.0])
    return np.array([HEAD_SCALE_LOGIT, HEAD_SCALE_LOGIT, 0.0, 0.0, 0.0])


@dataclass
class ModelParams:
    """Named parameter tensors of one network.

    Attributes:
        config (ModelConfig): Configuration the inventory derives from.
        tensors (Dict[str, Tensor]): Parameters keyed by name, kept in
            lexicographic order.
    """

    config: ModelConfig
    tensors: Dict[str, Tensor] = field(default_factory=dict)

    @classmethod
    def from_arrays(cls, config: ModelConfig, arrays: Dict[str, np.ndarray],
                    requires_grad: bool = True) -> "ModelParams":
        tensors = {
            name: Tensor(np.array(arrays[name]), requires_grad=requires_grad, name=name)
            for name in sorted(arrays)
        }
        return cls(config, tensors)

    def __getitem__(self, name: str) -> Tensor:
        return self.tensors[name]

    def __contains__(self, name: str) -> bool:
        return name in self.tensors

    def __iter__(self) -> Iterator[str]:
        return iter(self.names())

    def __len__(self) -> int:
        return len(self.tensors)

    def names(self) -> List[str]:
        return sorted(self.tensors)

    def items(self) -> Iterator[Tuple[str, Tensor]]:
        for name in self.names():
            yield name, self.tensors[name]

    def arrays(self) -> Dict[str, np.ndarray]:
        return {name: t.data for name, t in self.items()}

    def grads(self) -> Dict[str, np.ndarray]:
        return {name: t.grad for name, t in self.items()}

    def zero_grad(self) -> None:
        for tensor in self.tensors.values():
            tensor.zero_grad()

    def num_elements(self) -> int:
        return sum(t.size for t in self.tensors.values())

    def frozen(self) -> "ModelParams":
        """Copy sharing values with no gradient tracking, for inference."""
        return ModelParams(self.config, {name: t.detach() for name, t in self.items()})

    def copy(self, requires_grad: bool = True) -> "ModelParams":
        return ModelParams.from_arrays(self.config, {n: t.data.copy() for n, t in self.items()}, requires_grad)

    @property
    def lstm(self) -> LSTMParams:
        return LSTMParams(self['lstm.weight_x'], self['lstm.weight_h'], self['lstm.bias'])

    def conv(self, prefix: str) -> Tuple[Tensor, Tensor]:
        return self[f"{prefix}.weight"], self[f"{prefix}.bias"]
