"""Service for reading velocity field checkpoints."""

import logging
from pathlib import Path
from typing import Union

import numpy as np

from src.config.settings import settings
from src.core.errors import DimensionError, DomainError, FormatError
from src.core.services.flowmodel.velocity_field import ACTIVATION_NAMES, VelocityField

from .checkpoint_saver_service import F64, U32


class _Reader:
    def __init__(self, payload: bytes, offset: int):
        self.payload = payload
        self.offset = offset

    def take(self, dtype: np.dtype, count: int) -> np.ndarray:
        size = dtype.itemsize * count
        if self.offset + size > len(self.payload):
            raise FormatError("checkpoint is truncated")
        values = np.frombuffer(self.payload, dtype=dtype, count=count, offset=self.offset)
        self.offset += size
        return values


def decode_checkpoint(payload: bytes) -> VelocityField:
    """
    Parse checkpoint bytes.

    Raises:
        FormatError: On bad magic, truncation, trailing bytes or inconsistent shapes
    """
    magic = settings.CHECKPOINT_MAGIC
    if payload[: len(magic)] != magic:
        raise FormatError("bad checkpoint magic")
    reader = _Reader(payload, len(magic))
    layers = int(reader.take(U32, 1)[0])
    if layers == 0:
        raise FormatError("checkpoint declares zero layers")
    shapes = reader.take(U32, 2 * layers).reshape(layers, 2).astype(np.int64)
    weights = [
        reader.take(F64, int(rows * cols)).reshape(int(rows), int(cols)).copy()
        for rows, cols in shapes
    ]
    biases = [reader.take(F64, int(cols)).copy() for _, cols in shapes]
    code = int(reader.take(U32, 1)[0])
    if reader.offset != len(payload):
        raise FormatError(f"{len(payload) - reader.offset} trailing bytes after checkpoint")
    if code not in ACTIVATION_NAMES:
        raise FormatError(f"unknown activation code {code}")
    try:
        return VelocityField(weights, biases, ACTIVATION_NAMES[code])
    except (DimensionError, DomainError) as e:
        raise FormatError(f"inconsistent checkpoint: {e}") from e


class CheckpointLoaderService:
    """Service responsible only for loading velocity fields from disk."""

    def load(self, path: Union[str, Path]) -> VelocityField:
        """
        Load a field written by CheckpointSaverService.

        Args:
            path: Checkpoint file

        Returns:
            VelocityField with bit-identical parameters
        """
        path = Path(path)
        try:
            field = decode_checkpoint(path.read_bytes())
            logging.info("Loaded checkpoint %s (widths %s)", path, field.widths)
            return field
        except Exception as e:
            logging.error("Error loading checkpoint %s: %s", path, e)
            raise
