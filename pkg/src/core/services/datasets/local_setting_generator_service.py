"""Service for the trimodal dataset with one invalid mode."""

import logging
from typing import Optional, Tuple

import numpy as np

from src.core.errors import DomainError
from src.core.services.datasets.rng_functions import derive_rng
from src.models.config import DatasetSpec


class LocalSettingGeneratorService:
    """Service responsible only for sampling the local-setting training data."""

    def generate(
        self, spec: DatasetSpec, n: Optional[int] = None, seed: int = 0
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Isotropic Gaussian mixture with labels.

        Args:
            spec: Mode centers, weights and spread
            n: Point count, spec.n when omitted
            seed: Stream seed

        Returns:
            Points (n, d) and integer mode labels (n,)
        """
        n = spec.n if n is None else n
        if n < 1:
            raise DomainError("dataset size must be >= 1")
        centers = np.asarray(spec.mode_centers, dtype=np.float64)
        weights = np.asarray(spec.resolved_weights())
        rng = derive_rng(seed, "dataset", "trimodal")
        labels = rng.choice(len(weights), size=n, p=weights)
        points = centers[labels] + spec.resolved_spread() * rng.standard_normal((n, centers.shape[1]))
        logging.info(
            "Generated %d trimodal points, label counts %s",
            n,
            np.bincount(labels, minlength=len(weights)).tolist(),
        )
        return points, labels


def gen_local_setting(
    spec: DatasetSpec, n: Optional[int] = None, seed: int = 0
) -> Tuple[np.ndarray, np.ndarray]:
    return LocalSettingGeneratorService().generate(spec, n, seed)
