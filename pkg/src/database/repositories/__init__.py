"""Repository package for persisted run artifacts."""

from .files import (
    CheckpointLoaderService,
    CheckpointSaverService,
    MetricsCsvSaverService,
    SamplesCsvLoaderService,
    SamplesCsvSaverService,
    TrajectoryCsvSaverService,
)

__all__ = [
    "CheckpointLoaderService",
    "CheckpointSaverService",
    "MetricsCsvSaverService",
    "SamplesCsvLoaderService",
    "SamplesCsvSaverService",
    "TrajectoryCsvSaverService",
]
