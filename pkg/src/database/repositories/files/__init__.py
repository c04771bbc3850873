"""File-backed repositories: checkpoints and CSV tables."""

from .checkpoint_loader_service import CheckpointLoaderService, decode_checkpoint
from .checkpoint_saver_service import CheckpointSaverService, encode_checkpoint
from .metrics_csv_saver_service import METRIC_COLUMNS, MetricsCsvSaverService
from .samples_csv_loader_service import SamplesCsvLoaderService
from .samples_csv_saver_service import SamplesCsvSaverService, coordinate_columns
from .trajectory_csv_saver_service import TrajectoryCsvSaverService

__all__ = [
    "CheckpointLoaderService",
    "CheckpointSaverService",
    "METRIC_COLUMNS",
    "MetricsCsvSaverService",
    "SamplesCsvLoaderService",
    "SamplesCsvSaverService",
    "TrajectoryCsvSaverService",
    "coordinate_columns",
    "decode_checkpoint",
    "encode_checkpoint",
]
