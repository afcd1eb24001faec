"""
Random crop-and-resize augmentation.

A square-fraction window of the image is cropped and resized back to the
working resolution with bilinear interpolation; annotation points inside the
window survive and are rescaled, the rest are dropped. Crops that keep no
point are re-drawn a bounded number of times and then accepted empty.

Example:
    >>> crop, kept = augment_crop_resize(image, ann, SplitMix64(3), out_shape=(64, 64))
    >>> crop.shape, len(kept.points) <= len(ann.points)
    ((64, 64), True)
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import ndimage

from ..density import Annotation
from ..model.params import MAP_STRIDE
from ..validators.base.error_handler import DimensionError, ErrorFormatter
from .rng import SplitMix64

logger = logging.getLogger(__name__)

_formatter = ErrorFormatter()

CROP_RANGE = (0.5, 0.9)
MAX_RESAMPLES = 10


def _window(height: int, width: int, frac: float, rng: SplitMix64) -> Tuple[int, int, int, int]:
    crop_h = min(height, max(1, int(round(frac * height))))
    crop_w = min(width, max(1, int(round(frac * width))))
    y0 = rng.randint(0, height - crop_h)
    x0 = rng.randint(0, width - crop_w)
    return x0, y0, crop_w, crop_h


def _resize(image: np.ndarray, x0: int, y0: int, crop_w: int, crop_h: int,
            out_h: int, out_w: int) -> np.ndarray:
    # output pixel centers mapped into source pixel-index coordinates
    rows = y0 + (np.arange(out_h) + 0.5) * crop_h / out_h - 0.5
    cols = x0 + (np.arange(out_w) + 0.5) * crop_w / out_w - 0.5
    grid_r, grid_c = np.meshgrid(rows, cols, indexing='ij')
    if image.ndim == 2:
        return ndimage.map_coordinates(image, [grid_r, grid_c], order=1, mode='nearest')
    return np.stack([
        ndimage.map_coordinates(image[:, :, ch], [grid_r, grid_c], order=1, mode='nearest')
        for ch in range(image.shape[2])
    ], axis=2)


def augment_crop_resize(image: np.ndarray, ann: Annotation, rng: SplitMix64,
                        frac_range: Tuple[float, float] = CROP_RANGE,
                        out_shape: Optional[Tuple[int, int]] = None,
                        frac: Optional[float] = None) -> Tuple[np.ndarray, Annotation]:
    """Crop a random window and resize it to ``out_shape``.

    Args:
        image (np.ndarray): Image of shape (H, W) or (H, W, C).
        ann (Annotation): Its annotation.
        rng (SplitMix64): Source of the window fraction and position.
        frac_range (Tuple[float, float]): Side fraction range, sampled
            uniformly.
        out_shape (Optional[Tuple[int, int]]): Output (rows, cols), each
            divisible by 8; defaults to the input extents.
        frac (Optional[float]): Fixed side fraction, overriding the range.

    Returns:
        Tuple[np.ndarray, Annotation]: Resized crop and the surviving,
        rescaled points.

    Raises:
        DimensionError: If an output extent is not divisible by 8.
    """
    height, width = image.shape[:2]
    out_h, out_w = out_shape or (height, width)
    for axis, extent in (("height", out_h), ("width", out_w)):
        if extent <= 0 or extent % MAP_STRIDE:
            raise DimensionError(
                _formatter.format_dimension_error("augment_crop_resize", axis, extent, f"a multiple of {MAP_STRIDE}")
            )

    for attempt in range(MAX_RESAMPLES + 1):
        side = frac if frac is not None else rng.uniform(*frac_range)
        x0, y0, crop_w, crop_h = _window(height, width, side, rng)
        kept = [(x, y) for x, y in ann.points if x0 <= x < x0 + crop_w and y0 <= y < y0 + crop_h]
        if kept or not ann.points:
            break
    else:
        logger.debug("crop of %s kept no points after %d draws", ann.image_id, MAX_RESAMPLES + 1)

    sx, sy = out_w / crop_w, out_h / crop_h
    points = []
    for x, y in kept:
        # clamp guards the last ulp of rounding at the window's far edge
        px = min((x - x0) * sx, np.nextafter(out_w, 0))
        py = min((y - y0) * sy, np.nextafter(out_h, 0))
        points.append((float(px), float(py)))
    resized = _resize(image, x0, y0, crop_w, crop_h, out_h, out_w)
    return resized, Annotation(ann.image_id, points, out_h, out_w)
