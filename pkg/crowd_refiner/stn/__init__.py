"""
Differentiable 2-D affine spatial transformer.

Components:
    - transform: TransformMode, TransformParams, AffineTransform,
      compose_transform, invert_affine
    - sampler: affine_grid, bilinear_sample, spatial_transform,
      inverse_scatter
"""

from .transform import (
    TransformMode,
    TransformParams,
    AffineTransform,
    compose_transform,
    invert_affine,
    DEFAULT_S_MIN,
)
from .sampler import affine_grid, bilinear_sample, spatial_transform, inverse_scatter, target_lattice

__all__ = [
    'TransformMode',
    'TransformParams',
    'AffineTransform',
    'compose_transform',
    'invert_affine',
    'DEFAULT_S_MIN',
    'affine_grid',
    'bilinear_sample',
    'spatial_transform',
    'inverse_scatter',
    'target_lattice',
]
