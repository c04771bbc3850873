"""Service producing metric snapshots of a velocity field."""

from typing import Optional, Tuple

import numpy as np

from src.core.interfaces.velocity_model import VelocityModel
from src.core.services.datasets.rng_functions import derive_seed
from src.core.services.metrics.metric_suite_service import MetricSuiteService
from src.core.services.sampler.ode_sampler_service import OdeSamplerService
from src.models.config import MetricConfig
from src.models.records import MetricSnapshot


class IterateEvaluatorService:
    """Service responsible only for sampling an iterate and scoring the samples."""

    def __init__(
        self,
        config: Optional[MetricConfig] = None,
        metric_suite: Optional[MetricSuiteService] = None,
        ode_sampler: Optional[OdeSamplerService] = None,
    ):
        self.config = config or MetricConfig()
        self.metric_suite = metric_suite or MetricSuiteService(self.config)
        self.ode_sampler = ode_sampler or OdeSamplerService()

    def evaluate(self, field: VelocityModel, seed: int) -> Tuple[MetricSnapshot, np.ndarray]:
        """
        Score ODE samples of a field.

        Every call with the same seed reuses the same source draws, so iterates
        are compared on common random numbers.

        Returns:
            Snapshot and the samples it was computed on
        """
        samples = self.ode_sampler.sample(
            field, self.config.samples, self.config.ode_steps, derive_seed(seed, "metrics")
        )
        return self.metric_suite.snapshot(samples, derive_seed(seed, "metrics", "vendi")), samples
