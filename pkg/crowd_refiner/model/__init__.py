"""
Counting network package.

Components:
    - params: ModelConfig, architecture table, parameter inventory, ModelParams
    - network: gfe_forward, initial_map, global_context, lrn_forward,
      rsar_step, drsan_forward
"""

from .params import (
    ModelConfig,
    ModelParams,
    parameter_inventory,
    head_bias,
    HEAD_SCALE_LOGIT,
    GFE_KERNELS,
    GFE_CHANNELS,
    GFE_POOL_AFTER,
    LRN_KERNELS,
    MAP_STRIDE,
)
from .network import (
    RefinementState,
    ForwardResult,
    gfe_forward,
    initial_map,
    global_context,
    lrn_forward,
    rsar_step,
    drsan_forward,
)

__all__ = [
    'ModelConfig',
    'ModelParams',
    'parameter_inventory',
    'head_bias',
    'HEAD_SCALE_LOGIT',
    'GFE_KERNELS',
    'GFE_CHANNELS',
    'GFE_POOL_AFTER',
    'LRN_KERNELS',
    'MAP_STRIDE',
    'RefinementState',
    'ForwardResult',
    'gfe_forward',
    'initial_map',
    'global_context',
    'lrn_forward',
    'rsar_step',
    'drsan_forward',
]
