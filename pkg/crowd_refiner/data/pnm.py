"""
Binary PGM (P5) and PPM (P6) image files.

Only 8-bit images (maxval 255) are written; reading also accepts 16-bit
maxvals and rescales to [0, 1]. Header tokens may be separated by any
whitespace and ``#`` comments, as the netpbm format allows.

Example:
    >>> write_pnm("scene.pgm", np.zeros((8, 8), dtype=np.uint8))
    >>> read_pnm("scene.pgm").shape
    (8, 8)
"""

import logging
import os
from typing import List, Tuple

import numpy as np

from ..validators.base.error_handler import DimensionError, ErrorFormatter, ValidationError

logger = logging.getLogger(__name__)

_formatter = ErrorFormatter()

_MAGIC_CHANNELS = {b'P5': 1, b'P6': 3}


def _header(buf: bytes, path: str) -> Tuple[bytes, List[int], int]:
    """Parse magic, width, height and maxval; return them and the payload offset."""
    tokens: List[bytes] = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(buf) and buf[pos:pos + 1].isspace():
            pos += 1
        if pos < len(buf) and buf[pos:pos + 1] == b'#':
            while pos < len(buf) and buf[pos:pos + 1] not in (b'\n', b'\r'):
                pos += 1
            continue
        start = pos
        while pos < len(buf) and not buf[pos:pos + 1].isspace() and buf[pos:pos + 1] != b'#':
            pos += 1
        if start == pos:
            raise ValidationError(_formatter.format_structure_error(path, "truncated image header"))
        tokens.append(buf[start:pos])
    # exactly one whitespace byte separates maxval from the raster
    pos += 1
    try:
        numbers = [int(t) for t in tokens[1:]]
    except ValueError:
        raise ValidationError(_formatter.format_structure_error(path, "non-numeric image header")) from None
    return tokens[0], numbers, pos


def read_pnm(path: str) -> np.ndarray:
    """Read a P5 or P6 file as floats in [0, 1].

    Returns:
        np.ndarray: Shape (H, W) for P5, (H, W, 3) for P6.

    Raises:
        ValidationError: If the file is not a binary PGM/PPM or is truncated.
    """
    with open(path, 'rb') as f:
        buf = f.read()
    magic, (width, height, maxval), offset = _header(buf, path)
    if magic not in _MAGIC_CHANNELS:
        raise ValidationError(_formatter.format_invalid_value_error(magic.decode('latin-1'), path, "expected P5 or P6"))
    if not 0 < maxval < 65536:
        raise ValidationError(_formatter.format_invalid_value_error(maxval, path, "maxval must be in 1..65535"))
    channels = _MAGIC_CHANNELS[magic]
    dtype = np.dtype(np.uint8) if maxval < 256 else np.dtype('>u2')
    count = width * height * channels
    if len(buf) - offset < count * dtype.itemsize:
        raise ValidationError(_formatter.format_structure_error(path, "raster shorter than header promises"))
    raster = np.frombuffer(buf, dtype=dtype, count=count, offset=offset)
    shape = (height, width) if channels == 1 else (height, width, 3)
    logger.debug("read %s (%dx%d, %d channel(s))", path, width, height, channels)
    return raster.reshape(shape).astype(np.float64) / maxval


def to_bytes(image: np.ndarray) -> np.ndarray:
    """Quantize a [0, 1] float image to uint8, clipping out-of-range values."""
    if image.dtype == np.uint8:
        return image
    return np.clip(np.rint(np.asarray(image, dtype=np.float64) * 255.0), 0, 255).astype(np.uint8)


def write_pnm(path: str, image: np.ndarray) -> None:
    """Write a 2-D image as P5 or an (H, W, 3) image as P6, maxval 255."""
    data = to_bytes(image)
    if data.ndim == 3 and data.shape[2] == 1:
        data = data[:, :, 0]
    if data.ndim == 2:
        magic = b'P5'
    elif data.ndim == 3 and data.shape[2] == 3:
        magic = b'P6'
    else:
        raise DimensionError(_formatter.format_dimension_error("write_pnm", "channels", data.shape[-1], "1 or 3"))
    height, width = data.shape[:2]
    if os.path.dirname(path):
        os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, 'wb') as f:
        f.write(magic + b'\n' + f"{width} {height}\n255\n".encode('ascii'))
        f.write(np.ascontiguousarray(data).tobytes())


def render_heat(values: np.ndarray) -> np.ndarray:
    """8-bit rendering of a non-negative map normalized by its own maximum."""
    peak = float(np.max(values)) if values.size else 0.0
    if peak <= 0.0:
        return np.zeros(values.shape, dtype=np.uint8)
    return to_bytes(np.clip(values, 0.0, None) / peak)
