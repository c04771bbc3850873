"""Service computing the enabled metrics of one sample set."""

import logging
from typing import Optional

import numpy as np

from src.core.interfaces.verifier import Verifier
from src.models.config import MetricConfig
from src.models.measures import KernelSpec
from src.models.records import MetricSnapshot

from .knn_entropy_service import KnnEntropyService
from .validity_functions import validity
from .vendi_service import VendiService


class MetricSuiteService:
    """Service responsible only for entropy, validity and VENDI snapshots."""

    def __init__(self, config: Optional[MetricConfig] = None, verifier: Optional[Verifier] = None):
        """
        Initialize the suite.

        Args:
            config: Enabled metrics and their parameters
            verifier: Validity set; validity is skipped without one
        """
        self.config = config or MetricConfig()
        self.verifier = verifier
        self.entropy_service = KnnEntropyService(self.config.knn_k)
        self.vendi_service = VendiService(
            KernelSpec(self.config.kernel, self.config.bandwidth), self.config.vendi_samples
        )

    def snapshot(self, points: np.ndarray, seed: int = 0) -> MetricSnapshot:
        enabled = set(self.config.enabled)
        result = MetricSnapshot()
        if "entropy" in enabled and points.shape[0] > self.config.knn_k:
            result.entropy = self.entropy_service.estimate(points)
        if "validity" in enabled and self.verifier is not None:
            result.validity = validity(points, self.verifier)
        if "vendi" in enabled:
            result.vendi = self.vendi_service.score(points, seed)
        logging.info(
            "Metrics on %d samples: entropy=%s validity=%s vendi=%s",
            points.shape[0],
            result.entropy,
            result.validity,
            result.vendi,
        )
        return result
