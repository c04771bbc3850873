"""Exact mirror descent on finite grids."""

from .discrete_functions import (
    OBJECTIVES,
    entropy,
    expand_then_project_discrete,
    first_variation,
    grid_measure,
    kl,
    md_step,
    objective_value,
    optimum,
    smoothness_constant,
    total_variation,
)
from .mirror_descent_service import MirrorDescentResult, MirrorDescentService, run_md
from .oracle_sweep_service import OracleSweepService, fixed_point_step, random_mask, random_measure

__all__ = [
    "MirrorDescentResult",
    "MirrorDescentService",
    "OBJECTIVES",
    "OracleSweepService",
    "entropy",
    "expand_then_project_discrete",
    "first_variation",
    "fixed_point_step",
    "grid_measure",
    "kl",
    "md_step",
    "objective_value",
    "optimum",
    "random_mask",
    "random_measure",
    "run_md",
    "smoothness_constant",
    "total_variation",
]
