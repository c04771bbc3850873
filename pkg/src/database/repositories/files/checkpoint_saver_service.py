"""Service for writing velocity field checkpoints."""

import logging
from pathlib import Path
from typing import Union

import numpy as np

from src.config.settings import settings
from src.core.services.flowmodel.velocity_field import ACTIVATION_CODES, VelocityField

U32 = np.dtype("<u4")
F64 = np.dtype("<f8")


def encode_checkpoint(field: VelocityField) -> bytes:
    """
    Serialize a field.

    Layout: magic, u32 layer count, (u32 rows, u32 cols) per layer, weights
    row-major as f64, biases as f64, u32 activation code; little-endian.
    """
    weights = [w.data for w in field.weights]
    biases = [b.data.reshape(-1) for b in field.biases]
    header = [len(weights)]
    for w in weights:
        header.extend(w.shape)
    chunks = [settings.CHECKPOINT_MAGIC, np.asarray(header, dtype=U32).tobytes()]
    chunks.extend(np.ascontiguousarray(w, dtype=F64).tobytes() for w in weights)
    chunks.extend(np.ascontiguousarray(b, dtype=F64).tobytes() for b in biases)
    chunks.append(np.asarray([ACTIVATION_CODES[field.activation]], dtype=U32).tobytes())
    return b"".join(chunks)


class CheckpointSaverService:
    """Service responsible only for saving velocity fields to disk."""

    def save(self, field: VelocityField, path: Union[str, Path]) -> Path:
        """
        Save a field in the binary checkpoint format.

        Args:
            field: Field to persist
            path: Destination file; parent directories are created

        Returns:
            Path written
        """
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(encode_checkpoint(field))
            logging.info("Saved checkpoint %s (widths %s)", path, field.widths)
            return path
        except Exception as e:
            logging.error("Error saving checkpoint %s: %s", path, e)
            raise
