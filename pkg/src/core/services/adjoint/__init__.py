"""Adjoint matching: lean adjoint, objective and the fine-tuning solver."""

from .adjoint_matching_service import AdjointMatchingService
from .lean_adjoint_functions import am_objective, lean_adjoint_backward, sde_drift_vjp

__all__ = ["AdjointMatchingService", "am_objective", "lean_adjoint_backward", "sde_drift_vjp"]
