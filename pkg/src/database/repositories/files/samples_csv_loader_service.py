"""Service for reading point sets from CSV."""

import logging
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

from src.core.errors import FormatError, UsageError


class SamplesCsvLoaderService:
    """Service responsible only for loading point sets and tables from CSV."""

    def load(self, path: Union[str, Path]) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        """
        Load points from a CSV with header x1..xd[,label].

        Args:
            path: Source CSV

        Returns:
            Points of shape (n, d) and labels or None

        Raises:
            UsageError: If the file holds no rows
            FormatError: If coordinate columns are missing or not numeric
        """
        frame = self.load_frame(path)
        columns = [c for c in frame.columns if c.startswith("x") and c[1:].isdigit()]
        columns.sort(key=lambda c: int(c[1:]))
        if not columns:
            raise FormatError(f"{path} has no x1..xd columns")
        if columns != [f"x{i + 1}" for i in range(len(columns))]:
            raise FormatError(f"{path} coordinate columns are not contiguous: {columns}")
        try:
            points = frame[columns].to_numpy(dtype=np.float64)
        except (TypeError, ValueError) as e:
            raise FormatError(f"{path} has non-numeric coordinates: {e}") from e
        labels = frame["label"].to_numpy(dtype=np.int64) if "label" in frame.columns else None
        return points, labels

    def load_frame(self, path: Union[str, Path]) -> pd.DataFrame:
        """Load any CSV with a mandatory header; empty tables are a usage error."""
        path = Path(path)
        try:
            frame = pd.read_csv(path)
        except pd.errors.EmptyDataError as e:
            logging.error("CSV %s is empty", path)
            raise UsageError(f"{path} is empty") from e
        except Exception as e:
            logging.error("Error reading CSV %s: %s", path, e)
            raise
        if frame.empty:
            raise UsageError(f"{path} has a header but no rows")
        logging.info("Loaded %d rows from %s", len(frame), path)
        return frame
