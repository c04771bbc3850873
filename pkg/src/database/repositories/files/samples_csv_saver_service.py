"""Service for writing point sets and generic tables as CSV."""

import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd


def coordinate_columns(dim: int):
    return [f"x{i + 1}" for i in range(dim)]


class SamplesCsvSaverService:
    """Service responsible only for saving point sets and tables to CSV."""

    def save(
        self,
        points: np.ndarray,
        path: Union[str, Path],
        labels: Optional[np.ndarray] = None,
    ) -> Path:
        """
        Save points with header x1..xd and an optional label column.

        Args:
            points: Array of shape (n, d)
            path: Destination CSV
            labels: Optional integer labels of length n

        Returns:
            Path written
        """
        points = np.asarray(points, dtype=np.float64)
        frame = pd.DataFrame(points, columns=coordinate_columns(points.shape[1]))
        if labels is not None:
            frame["label"] = np.asarray(labels, dtype=np.int64)
        return self.save_frame(frame, path)

    def save_frame(self, frame: pd.DataFrame, path: Union[str, Path]) -> Path:
        """Save any table with a header row and full float precision."""
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(path, index=False)
            logging.info("Saved %d rows to %s", len(frame), path)
            return path
        except Exception as e:
            logging.error("Error saving CSV %s: %s", path, e)
            raise
