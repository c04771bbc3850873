"""Service for the VENDI diversity score."""

import logging
from typing import Optional

import numpy as np
from scipy.special import entr
from sklearn.metrics.pairwise import euclidean_distances

from src.config.settings import settings
from src.core.errors import DomainError
from src.core.services.datasets.rng_functions import derive_rng
from src.models.measures import KernelSpec

from .jacobi_eigen_service import JacobiEigenService, check_symmetric

EIGENVALUE_FLOOR = 1e-12


def median_bandwidth(distances: np.ndarray) -> float:
    """Median pairwise distance over i < j; 1.0 when it is zero or undefined."""
    upper = distances[np.triu_indices(distances.shape[0], k=1)]
    if upper.size == 0:
        return 1.0
    median = float(np.median(upper))
    return median if median > 0.0 else 1.0


def kernel_matrix(points: np.ndarray, kernel: KernelSpec) -> np.ndarray:
    """Pairwise similarity matrix K_ij = k(x_i, x_j) with a unit diagonal."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    distances = euclidean_distances(points, points)
    np.fill_diagonal(distances, 0.0)
    bandwidth = kernel.bandwidth or median_bandwidth(distances)
    if kernel.kind == "rbf":
        matrix = np.exp(-(distances**2) / (2.0 * bandwidth**2))
    else:
        matrix = np.exp(-distances / bandwidth)
    return 0.5 * (matrix + matrix.T)


class VendiService:
    """Service responsible only for VENDI scores of sample sets."""

    def __init__(
        self,
        kernel: Optional[KernelSpec] = None,
        max_samples: int = settings.VENDI_SAMPLES,
        eigen_service: Optional[JacobiEigenService] = None,
    ):
        """
        Initialize the scorer.

        Args:
            kernel: Similarity kernel, rbf with the median heuristic by default
            max_samples: Deterministic subsample size for large sets
            eigen_service: Jacobi solver for matrices up to JACOBI_MAX_SIZE
        """
        self.kernel = kernel or KernelSpec()
        self.max_samples = max_samples
        self.eigen_service = eigen_service or JacobiEigenService()

    def eigenvalues(self, matrix: np.ndarray) -> np.ndarray:
        """Jacobi for small matrices, LAPACK above JACOBI_MAX_SIZE."""
        if matrix.shape[0] <= settings.JACOBI_MAX_SIZE:
            values, _ = self.eigen_service.decompose(matrix)
            return values
        return np.linalg.eigvalsh(check_symmetric(matrix))

    def score_kernel(self, matrix: np.ndarray) -> float:
        """
        exp of the entropy of the eigenvalues of K / n.

        Args:
            matrix: Kernel matrix with unit diagonal

        Returns:
            Score in [1, n]
        """
        matrix = np.asarray(matrix, dtype=np.float64)
        n = matrix.shape[0]
        if n < 1:
            raise DomainError("VENDI needs at least one sample")
        values = self.eigenvalues(matrix / n)
        values = np.where(values < EIGENVALUE_FLOOR, 0.0, values)
        return float(np.clip(np.exp(np.sum(entr(values))), 1.0, n))

    def score(self, points: np.ndarray, seed: int = 0) -> float:
        """
        VENDI score of a sample set.

        Args:
            points: Samples (n, d)
            seed: Subsampling seed when n exceeds max_samples

        Returns:
            Effective number of distinct samples
        """
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if points.shape[0] > self.max_samples:
            rows = derive_rng(seed, "vendi").choice(points.shape[0], self.max_samples, replace=False)
            points = points[np.sort(rows)]
            logging.debug("VENDI subsampled to %d points", self.max_samples)
        return self.score_kernel(kernel_matrix(points, self.kernel))


def vendi(points: np.ndarray, kernel: Optional[KernelSpec] = None) -> float:
    return VendiService(kernel).score(points)
