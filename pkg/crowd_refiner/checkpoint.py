"""
Binary checkpoint persistence.

Layout, all integers little-endian:

    magic        4 bytes  b"DRSN"
    version      u16
    array count  u32
    per array:   name length u16, UTF-8 name, dtype code u8 (0 = f64,
                 1 = f32), rank u8, rank x u32 extents, raw values
    crc          u32 CRC32 of every preceding byte

Arrays are written in lexicographic name order, so equal parameters always
produce identical files.

Example:
    >>> save_checkpoint(params, "runs/a/model.drsn")
    >>> restored = load_checkpoint("runs/a/model.drsn", params.config)
"""

import logging
import struct
import zlib
from typing import Dict

import numpy as np

from .model.params import ModelConfig, ModelParams, parameter_inventory
from .path_manager import PathManager
from .validators.base.error_handler import (
    CheckpointCorruptionError,
    CheckpointInventoryError,
    CheckpointVersionError,
)
from .validators.inventory_validator import InventoryValidator

logger = logging.getLogger(__name__)

MAGIC = b'DRSN'
FORMAT_VERSION = 1
_DTYPE_CODES = {np.dtype('<f8'): 0, np.dtype('<f4'): 1}
_CODE_DTYPES = {0: np.dtype('<f8'), 1: np.dtype('<f4')}
_HEADER = struct.Struct('<4sHI')
_CRC = struct.Struct('<I')


def encode_arrays(arrays: Dict[str, np.ndarray]) -> bytes:
    """Serialize named arrays, CRC included."""
    parts = [_HEADER.pack(MAGIC, FORMAT_VERSION, len(arrays))]
    for name in sorted(arrays):
        array = np.asarray(arrays[name])
        dtype = array.dtype.newbyteorder('<')
        if dtype not in _DTYPE_CODES:
            raise TypeError(f"Array '{name}' has unsupported dtype {array.dtype}")
        encoded = name.encode('utf-8')
        parts.append(struct.pack('<H', len(encoded)))
        parts.append(encoded)
        parts.append(struct.pack('<BB', _DTYPE_CODES[dtype], array.ndim))
        parts.append(struct.pack(f'<{array.ndim}I', *array.shape))
        parts.append(np.ascontiguousarray(array, dtype=dtype).tobytes())
    body = b''.join(parts)
    return body + _CRC.pack(zlib.crc32(body) & 0xFFFFFFFF)


class _Cursor:
    def __init__(self, buf: bytes, pos: int, end: int):
        self.buf, self.pos, self.end = buf, pos, end

    def take(self, size: int) -> bytes:
        if self.pos + size > self.end:
            raise CheckpointCorruptionError("Checkpoint payload ends mid-array")
        chunk = self.buf[self.pos:self.pos + size]
        self.pos += size
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def decode_arrays(buf: bytes) -> Dict[str, np.ndarray]:
    """Parse and verify serialized arrays.

    Raises:
        CheckpointCorruptionError: On a wrong magic, a CRC mismatch or a
            malformed payload.
        CheckpointVersionError: If the file was written by another format
            version.
    """
    if len(buf) < _HEADER.size + _CRC.size:
        raise CheckpointCorruptionError(f"Checkpoint is truncated ({len(buf)} bytes)")
    magic, version, count = _HEADER.unpack_from(buf, 0)
    if magic != MAGIC:
        raise CheckpointCorruptionError(f"Not a checkpoint: magic {magic!r}, expected {MAGIC!r}")
    stored_crc, = _CRC.unpack_from(buf, len(buf) - _CRC.size)
    actual_crc = zlib.crc32(buf[:-_CRC.size]) & 0xFFFFFFFF
    if stored_crc != actual_crc:
        raise CheckpointCorruptionError(
            f"Checkpoint CRC mismatch: stored {stored_crc:08x}, computed {actual_crc:08x}"
        )
    if version != FORMAT_VERSION:
        raise CheckpointVersionError(
            f"Checkpoint format version {version} is not supported by this release, which reads "
            f"version {FORMAT_VERSION}; load it with a release that reads version {version} and "
            f"save it again to upgrade"
        )

    cursor = _Cursor(buf, _HEADER.size, len(buf) - _CRC.size)
    arrays: Dict[str, np.ndarray] = {}
    for _ in range(count):
        name_len, = cursor.unpack('<H')
        try:
            name = cursor.take(name_len).decode('utf-8')
        except UnicodeDecodeError:
            raise CheckpointCorruptionError("Checkpoint array name is not valid UTF-8") from None
        code, rank = cursor.unpack('<BB')
        if code not in _CODE_DTYPES:
            raise CheckpointCorruptionError(f"Array '{name}' has unknown dtype code {code}")
        shape = cursor.unpack(f'<{rank}I')
        dtype = _CODE_DTYPES[code]
        size = int(np.prod(shape, dtype=np.int64)) * dtype.itemsize
        values = np.frombuffer(cursor.take(size), dtype=dtype).reshape(shape)
        if name in arrays:
            raise CheckpointCorruptionError(f"Array '{name}' appears twice")
        arrays[name] = values.astype(dtype.newbyteorder('='))
    if cursor.pos != cursor.end:
        raise CheckpointCorruptionError(f"{cursor.end - cursor.pos} trailing bytes after the last array")
    return arrays


def save_checkpoint(params: ModelParams, path: str) -> None:
    """Write every parameter array to ``path``."""
    PathManager().ensure_directory(path)
    payload = encode_arrays(params.arrays())
    with open(path, 'wb') as f:
        f.write(payload)
    logger.info("saved checkpoint %s (%d arrays)", path, len(params))


def read_checkpoint_arrays(path: str) -> Dict[str, np.ndarray]:
    with open(path, 'rb') as f:
        return decode_arrays(f.read())


def load_checkpoint(path: str, config: ModelConfig, requires_grad: bool = True) -> ModelParams:
    """Read a checkpoint and check it against the configured inventory.

    Args:
        path (str): Checkpoint file.
        config (ModelConfig): Configuration whose inventory the file must
            match exactly.
        requires_grad (bool): Whether the restored tensors track gradients.

    Raises:
        CheckpointCorruptionError: On CRC or format damage.
        CheckpointVersionError: On a format version mismatch.
        CheckpointInventoryError: If an array is missing, unknown or has
            the wrong shape; the message names it.
    """
    arrays = read_checkpoint_arrays(path)
    valid, error = InventoryValidator(parameter_inventory(config)).validate(arrays)
    if not valid:
        raise CheckpointInventoryError(error.message)
    return ModelParams.from_arrays(config, arrays, requires_grad=requires_grad)
