"""Interpolant schedules and derived coefficients."""

from .coefficient_functions import (
    clamped_sigma,
    gamma_schedule,
    lambda_star,
    lambda_weight,
    reparametrize_beta,
    score_denominator,
    sigma,
)
from .coefficient_schedule_builder_service import (
    CoefficientScheduleBuilderService,
    CoefficientSchedules,
)
from .interpolant_schedules import LinearSchedule, PowerSchedule, build_schedule

__all__ = [
    "CoefficientScheduleBuilderService",
    "CoefficientSchedules",
    "LinearSchedule",
    "PowerSchedule",
    "build_schedule",
    "clamped_sigma",
    "gamma_schedule",
    "lambda_star",
    "lambda_weight",
    "reparametrize_beta",
    "score_denominator",
    "sigma",
]
