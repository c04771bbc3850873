"""Service for dumping SDE trajectories for debugging."""

from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from src.models.flow import TrajectoryBatch

from .samples_csv_saver_service import SamplesCsvSaverService, coordinate_columns


class TrajectoryCsvSaverService:
    """Service responsible only for writing trajectory blocks to CSV."""

    def __init__(self, csv_saver: Optional[SamplesCsvSaverService] = None):
        self.csv_saver = csv_saver or SamplesCsvSaverService()

    def save(self, batch: TrajectoryBatch, path: Union[str, Path]) -> Path:
        """
        Write one block of rows per trajectory.

        Columns: trajectory, t, x1..xd.
        """
        steps_plus_one, count, dim = batch.states.shape
        states = np.transpose(batch.states, (1, 0, 2)).reshape(count * steps_plus_one, dim)
        frame = pd.DataFrame(states, columns=coordinate_columns(dim))
        frame.insert(0, "t", np.tile(batch.times, count))
        frame.insert(0, "trajectory", np.repeat(np.arange(count), steps_plus_one))
        return self.csv_saver.save_frame(frame, path)
