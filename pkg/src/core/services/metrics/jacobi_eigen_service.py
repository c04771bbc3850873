"""Service for symmetric eigendecomposition by cyclic Jacobi rotations."""

import logging
from typing import Optional, Tuple

import numpy as np

from src.config.settings import settings
from src.core.errors import DimensionError, DomainError, NumericalError


def check_symmetric(matrix: np.ndarray, tolerance: float = settings.SYMMETRY_TOLERANCE) -> np.ndarray:
    """
    Validate a square, finite, symmetric matrix.

    Raises:
        DimensionError: If the matrix is not square
        DomainError: If it is not finite or asymmetric beyond the tolerance
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise DomainError("matrix entries must be finite")
    asymmetry = float(np.max(np.abs(matrix - matrix.T))) if matrix.size else 0.0
    if asymmetry > tolerance:
        raise DomainError(f"matrix is not symmetric (max |A - A^T| = {asymmetry:.3e})")
    return matrix


def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0)))


class JacobiEigenService:
    """Service responsible only for cyclic Jacobi eigenvalue sweeps."""

    def __init__(
        self,
        max_sweeps: int = settings.JACOBI_MAX_SWEEPS,
        tolerance: float = settings.JACOBI_TOLERANCE,
    ):
        self.max_sweeps = max_sweeps
        self.tolerance = tolerance

    def decompose(
        self, matrix: np.ndarray, vectors: bool = False
    ) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        """
        Eigenvalues in ascending order and, on request, matching eigenvector columns.

        Args:
            matrix: Symmetric m x m matrix
            vectors: Accumulate eigenvectors

        Returns:
            (eigenvalues, eigenvectors or None)

        Raises:
            NumericalError: If the off-diagonal mass does not vanish within max_sweeps
        """
        a = check_symmetric(matrix).copy()
        a = 0.5 * (a + a.T)
        m = a.shape[0]
        v = np.eye(m) if vectors else None
        threshold = self.tolerance * max(1.0, float(np.linalg.norm(a)))

        sweeps = 0
        while _off_diagonal_norm(a) > threshold:
            if sweeps == self.max_sweeps:
                logging.error("Jacobi did not converge within %d sweeps", self.max_sweeps)
                raise NumericalError("Jacobi eigensolver did not converge", sweeps)
            sweeps += 1
            for p in range(m - 1):
                for q in range(p + 1, m):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    t = (1.0 if theta >= 0.0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    c = 1.0 / np.sqrt(t * t + 1.0)
                    s = t * c
                    col_p, col_q = a[:, p].copy(), a[:, q].copy()
                    a[:, p] = c * col_p - s * col_q
                    a[:, q] = s * col_p + c * col_q
                    row_p, row_q = a[p, :].copy(), a[q, :].copy()
                    a[p, :] = c * row_p - s * row_q
                    a[q, :] = s * row_p + c * row_q
                    if v is not None:
                        vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                        v[:, p] = c * vec_p - s * vec_q
                        v[:, q] = s * vec_p + c * vec_q
        logging.debug("Jacobi converged after %d sweeps (m=%d)", sweeps, m)

        values = np.diag(a).copy()
        order = np.argsort(values, kind="stable")
        return values[order], (v[:, order] if v is not None else None)


def symmetric_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Sorted eigenvalues of a symmetric matrix by cyclic Jacobi."""
    values, _ = JacobiEigenService().decompose(matrix)
    return values
