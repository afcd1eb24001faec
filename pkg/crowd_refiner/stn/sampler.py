"""
Affine grid generation and bilinear sampling.

Coordinates follow the align-corners convention: normalized -1 and +1 land
on the centers of the first and last pixel, so ``px = (xs + 1) * (W - 1) / 2``.
Samples whose neighbors fall outside the map receive zero from those
neighbors, which is what lets a scattered residual vanish outside the
attended region.

Example:
    >>> grid = affine_grid(AffineTransform.identity(), 3, 3)
    >>> grid.data[0, 0], grid.data[1, 1]
    (array([-1., -1.]), array([0., 0.]))
"""

from typing import Tuple

import numpy as np

from ..tensor_core import Function, Tensor, as_tensor
from ..validators.base.error_handler import DimensionError, ErrorFormatter
from .transform import AffineTransform, invert_affine

_formatter = ErrorFormatter()

# corner offsets (dy, dx) in the order 00, 01, 10, 11
_CORNERS = ((0, 0), (0, 1), (1, 0), (1, 1))


def target_lattice(out_h: int, out_w: int, dtype: type = np.float64) -> np.ndarray:
    """Homogeneous target coordinates ``(xt, yt, 1)`` in row-major pixel order."""
    ys, xs = np.meshgrid(np.linspace(-1.0, 1.0, out_h), np.linspace(-1.0, 1.0, out_w), indexing='ij')
    return np.stack([xs.ravel(), ys.ravel(), np.ones(out_h * out_w)], axis=1).astype(dtype)


def affine_grid(transform: AffineTransform, out_h: int, out_w: int) -> Tensor:
    """Source coordinates for every pixel of an ``out_h`` x ``out_w`` output.

    Args:
        transform (AffineTransform): Maps target to source coordinates.
        out_h (int): Output rows, at least 2.
        out_w (int): Output columns, at least 2.

    Returns:
        Tensor: Grid of shape (out_h, out_w, 2) holding (xs, ys) per pixel,
        differentiable in the transform matrix.
    """
    for axis, extent in (("height", out_h), ("width", out_w)):
        if extent < 2:
            raise DimensionError(_formatter.format_dimension_error("affine_grid", axis, extent, ">= 2"))
    theta = transform.theta
    base = as_tensor(target_lattice(out_h, out_w, theta.data.dtype))
    return (base @ theta.transpose()).reshape(out_h, out_w, 2)


class BilinearSample(Function):
    """Sample a (C, H, W) map at fractional normalized coordinates."""

    def forward(self, values: np.ndarray, grid: np.ndarray) -> np.ndarray:
        if values.ndim != 3:
            raise DimensionError(_formatter.format_dimension_error("bilinear_sample", "map rank", values.ndim, 3))
        if grid.ndim != 3 or grid.shape[2] != 2:
            raise DimensionError(_formatter.format_dimension_error("bilinear_sample", "grid", grid.shape[-1], 2))
        channels, height, width = values.shape
        px = (grid[..., 0] + 1.0) * (width - 1) / 2.0
        py = (grid[..., 1] + 1.0) * (height - 1) / 2.0
        x0 = np.floor(px)
        y0 = np.floor(py)
        fx = px - x0
        fy = py - y0
        x0 = x0.astype(np.int64)
        y0 = y0.astype(np.int64)

        corner_values = []
        corner_index = []
        for dy, dx in _CORNERS:
            yi, xi = y0 + dy, x0 + dx
            valid = (yi >= 0) & (yi < height) & (xi >= 0) & (xi < width)
            yc, xc = np.clip(yi, 0, height - 1), np.clip(xi, 0, width - 1)
            corner_values.append(values[:, yc, xc] * valid)
            corner_index.append((yc, xc, valid))

        v00, v01, v10, v11 = corner_values
        out = (v00 * (1 - fx) * (1 - fy) + v01 * fx * (1 - fy)
               + v10 * (1 - fx) * fy + v11 * fx * fy)

        self.shape = values.shape
        self.fx, self.fy = fx, fy
        self.corner_values, self.corner_index = corner_values, corner_index
        return out

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        channels, height, width = self.shape
        fx, fy = self.fx, self.fy
        g_values = None
        if self.tensors[0].requires_grad:
            g_values = np.zeros(self.shape, dtype=grad.dtype)
            weights = ((1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy)
            for (yc, xc, valid), w in zip(self.corner_index, weights):
                np.add.at(g_values, (slice(None), yc, xc), grad * (w * valid))

        g_grid = None
        if self.tensors[1].requires_grad:
            v00, v01, v10, v11 = self.corner_values
            d_px = (1 - fy) * (v01 - v00) + fy * (v11 - v10)
            d_py = (1 - fx) * (v10 - v00) + fx * (v11 - v01)
            g_grid = np.stack([
                (grad * d_px).sum(axis=0) * (width - 1) / 2.0,
                (grad * d_py).sum(axis=0) * (height - 1) / 2.0,
            ], axis=-1)
        return g_values, g_grid


def bilinear_sample(values: Tensor, grid: Tensor) -> Tensor:
    """Bilinearly sample ``values`` (C, H, W) at ``grid`` (h, w, 2).

    Grid points outside [-1, 1] are legal; neighbors that fall off the map
    contribute zero. Differentiable in both the map and the grid.
    """
    return BilinearSample.apply(as_tensor(values), as_tensor(grid))


def spatial_transform(values: Tensor, transform: AffineTransform, out_h: int, out_w: int) -> Tensor:
    """Extract the region selected by ``transform``, resized to out_h x out_w."""
    return bilinear_sample(values, affine_grid(transform, out_h, out_w))


def inverse_scatter(residual: Tensor, transform: AffineTransform, out_h: int, out_w: int) -> Tensor:
    """Place a region-sized map back into full-map coordinates.

    Samples ``residual`` through the grid of the inverted transform, so the
    result is zero outside the image of the attended region.

    Raises:
        SingularTransformError: If the transform cannot be inverted.
    """
    return bilinear_sample(residual, affine_grid(invert_affine(transform), out_h, out_w))
