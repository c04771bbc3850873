"""Service for the partially covered ellipse dataset."""

import logging
from typing import Optional

import numpy as np

from src.config.settings import settings
from src.core.errors import DomainError, GeometryError
from src.core.services.datasets.rng_functions import derive_rng
from src.models.config import DatasetSpec

from .toy_geometry import ellipse_for, ellipse_mode_means


class GlobalSettingGeneratorService:
    """Service responsible only for sampling the global-setting training data."""

    def __init__(self, min_acceptance: float = settings.MIN_ACCEPTANCE_RATE):
        self.min_acceptance = min_acceptance

    def generate(self, spec: DatasetSpec, n: Optional[int] = None, seed: int = 0) -> np.ndarray:
        """
        Gaussian mixture in the upper-left part of the ellipse, rejection-sampled to it.

        Args:
            spec: Ellipse geometry and mixture
            n: Point count, spec.n when omitted
            seed: Stream seed

        Returns:
            Points of shape (n, 2), all inside the ellipse

        Raises:
            GeometryError: If fewer than 1% of proposals land inside the ellipse
        """
        n = spec.n if n is None else n
        if n < 1:
            raise DomainError("dataset size must be >= 1")
        ellipse = ellipse_for(spec)
        means = ellipse_mode_means(spec)
        weights = np.asarray(spec.resolved_weights())
        spread = spec.resolved_spread()
        rng = derive_rng(seed, "dataset", "ellipse_partial")

        kept, drawn, accepted = [], 0, 0
        batch = max(n, 1024)
        while accepted < n:
            labels = rng.choice(len(weights), size=batch, p=weights)
            proposals = means[labels] + spread * rng.standard_normal((batch, means.shape[1]))
            inside = proposals[ellipse.accepts(proposals)]
            kept.append(inside)
            drawn += batch
            accepted += inside.shape[0]
            if accepted / drawn < self.min_acceptance:
                logging.error("Ellipse acceptance %.4f below %.2f", accepted / drawn, self.min_acceptance)
                raise GeometryError(f"rejection rate above {1 - self.min_acceptance:.0%}")
        logging.info("Generated %d ellipse points (acceptance %.3f)", n, accepted / drawn)
        return np.concatenate(kept, axis=0)[:n]


def gen_global_setting(spec: DatasetSpec, n: Optional[int] = None, seed: int = 0) -> np.ndarray:
    return GlobalSettingGeneratorService().generate(spec, n, seed)
