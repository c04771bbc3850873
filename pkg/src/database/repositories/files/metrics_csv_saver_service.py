"""Service for writing metric and loss tables."""

from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import pandas as pd

from src.models.records import IterateRecord

from .samples_csv_saver_service import SamplesCsvSaverService

METRIC_COLUMNS = ["k", "phase", "entropy", "validity", "vendi", "wall_seconds"]


class MetricsCsvSaverService:
    """Service responsible only for saving metrics.csv and loss curves."""

    def __init__(self, csv_saver: Optional[SamplesCsvSaverService] = None):
        self.csv_saver = csv_saver or SamplesCsvSaverService()

    def save_records(self, records: Iterable[IterateRecord], path: Union[str, Path]) -> Path:
        """Write iterate records with columns k, phase, entropy, validity, vendi, wall_seconds."""
        frame = pd.DataFrame([record.to_row() for record in records], columns=METRIC_COLUMNS)
        return self.csv_saver.save_frame(frame, path)

    def save_losses(self, losses: Sequence[float], path: Union[str, Path]) -> Path:
        """Write a loss curve with columns epoch, loss."""
        frame = pd.DataFrame(
            {"epoch": list(range(1, len(losses) + 1)), "loss": list(losses)}
        )
        return self.csv_saver.save_frame(frame, path)

    def save_rows(self, rows: List[dict], columns: List[str], path: Union[str, Path]) -> Path:
        return self.csv_saver.save_frame(pd.DataFrame(rows, columns=columns), path)
