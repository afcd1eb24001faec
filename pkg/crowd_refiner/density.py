"""
Ground-truth density maps from point annotations.

Each annotated head contributes one isotropic Gaussian kernel evaluated at
pixel centers, truncated at a radius of three standard deviations, clipped
at the image border and renormalized so it sums to exactly one. The map of
an image with C annotated people therefore sums to C, wherever the points
lie.

Example:
    >>> ann = Annotation("img", [(32.0, 32.0)], height=64, width=64)
    >>> round(sum_count(generate_density(ann, sigma=4.0)), 9)
    1.0
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .validators.annotation_validator import AnnotationContentValidator
from .validators.base.error_handler import AnnotationError, DimensionError, ErrorFormatter

logger = logging.getLogger(__name__)

_formatter = ErrorFormatter()

DEFAULT_SIGMA = 4.0
TRUNCATE = 3.0


@dataclass
class Annotation:
    """Point annotations of one image.

    Attributes:
        image_id (str): Identifier, usually the image path from the document.
        points (List[Tuple[float, float]]): Head positions (x, y) in pixels,
            origin top-left.
        height (int): Image rows.
        width (int): Image columns.
    """

    image_id: str
    points: List[Tuple[float, float]] = field(default_factory=list)
    height: int = 0
    width: int = 0

    @property
    def count(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        """Entry in the annotation document format."""
        return {
            'image': self.image_id,
            'width': self.width,
            'height': self.height,
            'points': [[float(x), float(y)] for x, y in self.points],
        }

    def check_bounds(self) -> None:
        """Raise AnnotationError naming the first point outside the image."""
        valid, error = AnnotationContentValidator().validate(self)
        if not valid:
            raise AnnotationError(error.message)


@dataclass
class DensityMap:
    """Non-negative 2-D grid whose element sum is a person count.

    Attributes:
        values (np.ndarray): The grid.
        scale (int): Downsampling factor relative to the source image.
    """

    values: np.ndarray
    scale: int = 1

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape


def _kernel(x: float, y: float, sigma: float, height: int, width: int) -> Tuple[slice, slice, np.ndarray]:
    radius = TRUNCATE * sigma
    col0 = max(int(np.floor(x - radius)), 0)
    col1 = min(int(np.ceil(x + radius)) + 1, width)
    row0 = max(int(np.floor(y - radius)), 0)
    row1 = min(int(np.ceil(y + radius)) + 1, height)
    # pixel (i, j) has its center at (j + 0.5, i + 0.5)
    dx = np.arange(col0, col1) + 0.5 - x
    dy = np.arange(row0, row1) + 0.5 - y
    d2 = dy[:, None] ** 2 + dx[None, :] ** 2
    kernel = np.where(d2 <= radius * radius, np.exp(-d2 / (2.0 * sigma * sigma)), 0.0)
    total = kernel.sum()
    if total <= 0.0:
        # sigma far below a pixel: all mass on the pixel holding the point
        kernel = np.zeros_like(d2)
        kernel[min(int(y), row1 - 1) - row0, min(int(x), col1 - 1) - col0] = 1.0
        total = 1.0
    return slice(row0, row1), slice(col0, col1), kernel / total


def generate_density(ann: Annotation, sigma: float = DEFAULT_SIGMA) -> DensityMap:
    """Render the ground-truth density map of an annotation at scale 1.

    Args:
        ann (Annotation): Points and image extents.
        sigma (float): Kernel standard deviation in pixels, > 0.

    Returns:
        DensityMap: Map of shape (height, width) summing to ``ann.count``.

    Raises:
        AnnotationError: If a point lies outside the image.
        ValueError: If sigma is not positive.
    """
    if sigma <= 0:
        raise ValueError(_formatter.format_invalid_value_error(sigma, "sigma", "must be > 0"))
    ann.check_bounds()
    density = np.zeros((ann.height, ann.width), dtype=np.float64)
    for x, y in ann.points:
        rows, cols, kernel = _kernel(float(x), float(y), sigma, ann.height, ann.width)
        density[rows, cols] += kernel
    return DensityMap(density, scale=1)


def downsample_sum(density: DensityMap, factor: int) -> DensityMap:
    """Pool a map by summing non-overlapping factor x factor blocks.

    Raises:
        DimensionError: If an extent is not divisible by ``factor``.
    """
    height, width = density.values.shape
    for axis, extent in (("height", height), ("width", width)):
        if factor < 1 or extent % factor:
            raise DimensionError(
                _formatter.format_dimension_error("downsample_sum", axis, extent, f"a multiple of {factor}")
            )
    pooled = density.values.reshape(height // factor, factor, width // factor, factor).sum(axis=(1, 3))
    return DensityMap(pooled, scale=density.scale * factor)


def sum_count(density: DensityMap, roi: Optional[np.ndarray] = None) -> float:
    """Element sum of a map, optionally restricted to a region-of-interest mask."""
    values = density.values if isinstance(density, DensityMap) else np.asarray(density)
    if roi is not None:
        values = values * roi
    return float(values.sum())
