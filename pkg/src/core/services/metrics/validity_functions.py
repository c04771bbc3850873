"""Validity fraction and inference-time filtering under a hard verifier."""

from typing import Tuple

import numpy as np
from sklearn.metrics.pairwise import euclidean_distances

from src.core.interfaces.verifier import Verifier


def validity(points: np.ndarray, verifier: Verifier) -> float:
    """Fraction of samples with v(x) = 1; 0.0 for an empty set."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if points.shape[0] == 0:
        return 0.0
    return float(np.mean(verifier.accepts(points)))


def filter_samples(points: np.ndarray, verifier: Verifier) -> Tuple[np.ndarray, float]:
    """
    Keep only the samples a (weak) verifier accepts.

    Returns:
        Accepted points and the acceptance rate
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    accepted = verifier.accepts(points)
    rate = float(np.mean(accepted)) if points.shape[0] else 0.0
    return points[accepted], rate


def basin_fraction(points: np.ndarray, centers: np.ndarray, mode: int) -> float:
    """Fraction of samples whose nearest mode center is centers[mode]."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if points.shape[0] == 0:
        return 0.0
    centers = np.asarray(centers, dtype=np.float64)
    nearest = np.argmin(euclidean_distances(points, centers), axis=1)
    return float(np.mean(nearest == mode))
