"""Data models for discrete measures, support masks and kernels."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from src.config.settings import settings
from src.core.errors import DimensionError, DomainError

MASS_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SupportMask:
    """Cells belonging to the verifier set on a finite grid."""

    cells: np.ndarray

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=bool).reshape(-1)
        if not np.any(cells):
            raise DomainError("support mask must contain at least one cell")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def full(cls, size: int) -> "SupportMask":
        return cls(np.ones(size, dtype=bool))

    @property
    def size(self) -> int:
        return int(self.cells.shape[0])

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.cells))


@dataclass(frozen=True)
class DiscreteMeasure:
    """
    Probability vector over grid cells.

    log_weights is kept alongside the weights once any positive weight drops
    below LOG_SPACE_THRESHOLD, so long runs do not lose cells to underflow.
    """

    weights: np.ndarray
    centers: Optional[np.ndarray] = None
    log_weights: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if weights.size == 0:
            raise DimensionError("a discrete measure needs at least one cell")
        if np.any(weights < 0.0) or not np.all(np.isfinite(weights)):
            raise DomainError("measure weights must be finite and non-negative")
        if abs(float(np.sum(weights)) - 1.0) > MASS_TOLERANCE:
            raise DomainError(f"measure weights sum to {np.sum(weights)!r}, not 1")
        if self.centers is not None and len(self.centers) != weights.size:
            raise DimensionError("cell centers and weights differ in length")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_log(cls, log_weights: np.ndarray, centers: Optional[np.ndarray] = None) -> "DiscreteMeasure":
        """
        Normalize log-weights; -inf marks an empty cell.

        Raises:
            DomainError: If every cell is empty
        """
        log_weights = np.asarray(log_weights, dtype=np.float64).reshape(-1)
        if not np.any(np.isfinite(log_weights)):
            raise DomainError("log-weights hold no mass")
        normalized = log_weights - logsumexp(log_weights)
        weights = np.exp(normalized)
        weights = weights / np.sum(weights)
        if np.any(np.isfinite(normalized) & (weights < settings.LOG_SPACE_THRESHOLD)):
            return cls(weights, centers, normalized)
        return cls(weights, centers)

    @classmethod
    def uniform(cls, size: int, mask: Optional[SupportMask] = None) -> "DiscreteMeasure":
        cells = np.ones(size, dtype=bool) if mask is None else mask.cells
        return cls(cells / float(np.count_nonzero(cells)))

    @property
    def size(self) -> int:
        return int(self.weights.shape[0])

    def logs(self) -> np.ndarray:
        """Log-weights with -inf on empty cells."""
        if self.log_weights is not None:
            return self.log_weights
        with np.errstate(divide="ignore"):
            return np.log(self.weights)

    def support(self) -> np.ndarray:
        return self.weights > 0.0 if self.log_weights is None else np.isfinite(self.log_weights)


@dataclass(frozen=True)
class KernelSpec:
    """
    Similarity kernel k(x, y) in [0, 1] with k(x, x) = 1.

    kind is rbf, exp(-d^2 / (2 h^2)), or exp_distance, exp(-d / h). A missing
    bandwidth means the median pairwise distance of the samples.
    """

    kind: str = "rbf"
    bandwidth: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("rbf", "exp_distance"):
            raise DomainError(f"unknown kernel kind '{self.kind}'")
        if self.bandwidth is not None and self.bandwidth <= 0.0:
            raise DomainError(f"kernel bandwidth must be positive, got {self.bandwidth}")
