"""Closed-form mirror descent on a finite probability simplex."""

from typing import Callable, Optional

import numpy as np
from scipy.special import entr, logsumexp, rel_entr

from src.core.errors import DimensionError, DivergenceError, DomainError, InfeasibilityError
from src.models.measures import DiscreteMeasure, SupportMask

OBJECTIVES = ("entropy", "entropy_minus_alpha_kl")


def entropy(q: DiscreteMeasure) -> float:
    """-sum q log q with 0 log 0 = 0."""
    return float(np.sum(entr(q.weights)))


def kl(q: DiscreteMeasure, p: DiscreteMeasure) -> float:
    """
    KL(q || p) = sum q log(q / p).

    Raises:
        DivergenceError: If q puts mass where p has none
    """
    if q.size != p.size:
        raise DimensionError("measures live on different grids")
    if np.any(q.support() & ~p.support()):
        raise DivergenceError("KL is infinite: support of q is not inside support of p")
    if q.log_weights is not None or p.log_weights is not None:
        inside = q.support()
        return float(np.sum(q.weights[inside] * (q.logs()[inside] - p.logs()[inside])))
    return float(np.sum(rel_entr(q.weights, p.weights)))


def total_variation(q: DiscreteMeasure, p: DiscreteMeasure) -> float:
    return 0.5 * float(np.sum(np.abs(q.weights - p.weights)))


def _evaluated(q: DiscreteMeasure, mask: Optional[SupportMask]) -> np.ndarray:
    cells = np.ones(q.size, dtype=bool) if mask is None else mask.cells
    if cells.shape[0] != q.size:
        raise DimensionError("mask and measure differ in length")
    return cells


def first_variation(
    objective: str,
    q: DiscreteMeasure,
    mask: Optional[SupportMask] = None,
    p_pre: Optional[DiscreteMeasure] = None,
    alpha: float = 0.0,
) -> np.ndarray:
    """
    Componentwise first variation on the masked cells (0 elsewhere).

    entropy: -log q_i - 1; entropy_minus_alpha_kl adds -alpha (log(q_i / p_i) + 1).

    Raises:
        DomainError: If q or p_pre is zero on an evaluated cell
    """
    if objective not in OBJECTIVES:
        raise DomainError(f"unknown objective '{objective}'")
    cells = _evaluated(q, mask)
    log_q = q.logs()
    if np.any(~np.isfinite(log_q[cells])):
        raise DomainError("first variation needs q > 0 on every evaluated cell")
    grad = np.zeros(q.size)
    grad[cells] = -log_q[cells] - 1.0
    if objective == "entropy_minus_alpha_kl" and alpha != 0.0:
        if p_pre is None:
            raise DomainError("the KL objective needs a reference measure")
        log_p = p_pre.logs()
        if np.any(~np.isfinite(log_p[cells])):
            raise DomainError("reference measure must be positive on evaluated cells")
        grad[cells] -= alpha * (log_q[cells] - log_p[cells] + 1.0)
    return grad


def _tilt(q: DiscreteMeasure, grad: np.ndarray, gamma: float) -> np.ndarray:
    if gamma <= 0.0:
        raise DomainError(f"step size must be positive, got {gamma}")
    grad = np.asarray(grad, dtype=np.float64).reshape(-1)
    if grad.shape[0] != q.size:
        raise DimensionError("gradient and measure differ in length")
    log_q = q.logs()
    support = np.isfinite(log_q)
    tilted = np.full(q.size, -np.inf)
    tilted[support] = log_q[support] + gamma * grad[support]
    return tilted


def md_step(
    q: DiscreteMeasure, grad: np.ndarray, gamma: float, mask: SupportMask
) -> DiscreteMeasure:
    """
    Constrained mirror descent step q'_i proportional to q_i exp(gamma grad_i) mask_i.

    Raises:
        InfeasibilityError: If the mask removes all mass
    """
    tilted = _tilt(q, grad, gamma)
    tilted[~_evaluated(q, mask)] = -np.inf
    if not np.any(np.isfinite(tilted)):
        raise InfeasibilityError("mirror descent step masked out all mass")
    return DiscreteMeasure.from_log(tilted, q.centers)


def expand_then_project_discrete(
    q: DiscreteMeasure, grad: np.ndarray, gamma: float, mask: SupportMask
) -> DiscreteMeasure:
    """
    Unconstrained tilt followed by the information projection onto the mask.

    Raises:
        InfeasibilityError: If the expanded measure has no mass on the mask
    """
    tilted = _tilt(q, grad, gamma)
    expanded = tilted - logsumexp(tilted)
    cells = _evaluated(q, mask)
    projected = np.where(cells, expanded, -np.inf)
    if not np.any(np.isfinite(projected)):
        raise InfeasibilityError("projection target has no mass on the mask")
    return DiscreteMeasure.from_log(projected, q.centers)


def objective_value(
    objective: str,
    q: DiscreteMeasure,
    p_pre: Optional[DiscreteMeasure] = None,
    alpha: float = 0.0,
) -> float:
    """H(q), or H(q) - alpha KL(q || p_pre)."""
    value = entropy(q)
    if objective == "entropy_minus_alpha_kl" and alpha != 0.0:
        value -= alpha * kl(q, p_pre)
    return value


def optimum(
    objective: str,
    mask: SupportMask,
    p_pre: Optional[DiscreteMeasure] = None,
    alpha: float = 0.0,
) -> DiscreteMeasure:
    """
    Analytic maximizer on the mask.

    Uniform for the entropy; proportional to p_pre^(alpha / (1 + alpha)) for the
    KL-regularized objective.
    """
    if objective == "entropy" or alpha == 0.0:
        return DiscreteMeasure.uniform(mask.size, mask)
    if p_pre is None:
        raise DomainError("the KL objective needs a reference measure")
    logs = np.where(mask.cells, alpha / (1.0 + alpha) * p_pre.logs(), -np.inf)
    return DiscreteMeasure.from_log(logs, p_pre.centers)


def smoothness_constant(objective: str, alpha: float = 0.0) -> float:
    """Relative smoothness of the objective with respect to KL: 1, or 1 + alpha."""
    return 1.0 if objective == "entropy" else 1.0 + alpha


def grid_measure(
    lo, hi, cells_per_axis: int, density: Callable[[np.ndarray], np.ndarray]
) -> DiscreteMeasure:
    """
    Discretize a density onto the cell centers of a regular 2-D grid.

    Args:
        lo: Lower corner (x1, x2)
        hi: Upper corner (x1, x2)
        cells_per_axis: Cells along each axis
        density: Non-negative function of (m, 2) centers

    Returns:
        Normalized measure with centers attached
    """
    if cells_per_axis < 1:
        raise DomainError("grid needs at least one cell per axis")
    lo, hi = np.asarray(lo, dtype=np.float64), np.asarray(hi, dtype=np.float64)
    width = (hi - lo) / cells_per_axis
    axes = [lo[i] + width[i] * (np.arange(cells_per_axis) + 0.5) for i in range(2)]
    grid_x, grid_y = np.meshgrid(axes[0], axes[1], indexing="ij")
    centers = np.stack([grid_x.ravel(), grid_y.ravel()], axis=1)
    mass = np.asarray(density(centers), dtype=np.float64).reshape(-1)
    if np.any(mass < 0.0) or float(np.sum(mass)) <= 0.0:
        raise DomainError("grid density must be non-negative with positive total mass")
    with np.errstate(divide="ignore"):
        return DiscreteMeasure.from_log(np.log(mass), centers)
