"""Service for k-nearest-neighbour differential entropy estimation."""

import logging
from typing import Optional

import numpy as np
from scipy.special import digamma, gammaln
from sklearn.neighbors import NearestNeighbors

from src.config.settings import settings
from src.core.errors import DomainError
from src.core.services.datasets.rng_functions import derive_rng


def log_unit_ball_volume(dim: int) -> float:
    """log of pi^(d/2) / Gamma(d/2 + 1)."""
    return 0.5 * dim * np.log(np.pi) - float(gammaln(0.5 * dim + 1.0))


def jitter_duplicates(points: np.ndarray, scale: float, rng: np.random.Generator) -> np.ndarray:
    """
    Perturb every repeated row by uniform noise of the given scale.

    The first occurrence of each distinct row is left untouched.
    """
    _, first_index = np.unique(points, axis=0, return_index=True)
    repeated = np.ones(points.shape[0], dtype=bool)
    repeated[first_index] = False
    if not np.any(repeated):
        return points
    logging.warning("Jittering %d duplicate points before k-NN distances", int(repeated.sum()))
    jittered = points.copy()
    jittered[repeated] += rng.uniform(-scale, scale, size=(int(repeated.sum()), points.shape[1]))
    return jittered


class KnnEntropyService:
    """Service responsible only for Kozachenko-Leonenko entropy estimates."""

    def __init__(self, k: int = settings.KNN_NEIGHBORS, threads: Optional[int] = None):
        """
        Initialize the estimator.

        Args:
            k: Neighbour index used for the radii
            threads: Worker cap for neighbour queries; FEXP_THREADS when omitted
        """
        if k < 1:
            raise DomainError(f"k must be >= 1, got {k}")
        self.k = k
        self.threads = threads or settings.thread_count()

    def estimate(self, points: np.ndarray) -> float:
        """
        H = psi(n) - psi(k) + log V_d + (d / n) sum_i log r_i, in nats.

        Args:
            points: Samples of shape (n, d)

        Returns:
            Differential entropy estimate

        Raises:
            DomainError: If n <= k or the samples are not finite
        """
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        n, dim = points.shape
        if n <= self.k:
            raise DomainError(f"k-NN entropy needs more than k={self.k} samples, got {n}")
        if not np.all(np.isfinite(points)):
            raise DomainError("entropy samples must be finite")
        points = jitter_duplicates(points, settings.DUPLICATE_JITTER, derive_rng(0, "knn-jitter"))

        neighbours = NearestNeighbors(n_neighbors=self.k + 1, n_jobs=self.threads).fit(points)
        distances, _ = neighbours.kneighbors(points)
        radii = distances[:, self.k]
        return float(
            digamma(n)
            - digamma(self.k)
            + log_unit_ball_volume(dim)
            + dim * np.mean(np.log(radii))
        )


def knn_entropy(points: np.ndarray, k: int = settings.KNN_NEIGHBORS) -> float:
    return KnnEntropyService(k).estimate(points)
