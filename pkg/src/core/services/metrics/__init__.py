"""Entropy, validity and VENDI metrics."""

from .jacobi_eigen_service import JacobiEigenService, check_symmetric, symmetric_eigenvalues
from .knn_entropy_service import KnnEntropyService, jitter_duplicates, knn_entropy, log_unit_ball_volume
from .metric_suite_service import MetricSuiteService
from .validity_functions import basin_fraction, filter_samples, validity
from .vendi_service import VendiService, kernel_matrix, median_bandwidth, vendi

__all__ = [
    "JacobiEigenService",
    "KnnEntropyService",
    "MetricSuiteService",
    "VendiService",
    "basin_fraction",
    "check_symmetric",
    "filter_samples",
    "jitter_duplicates",
    "kernel_matrix",
    "knn_entropy",
    "log_unit_ball_volume",
    "median_bandwidth",
    "symmetric_eigenvalues",
    "validity",
    "vendi",
]
