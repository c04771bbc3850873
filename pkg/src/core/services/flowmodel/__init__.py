"""Velocity fields, flow-matching pretraining and the Adam optimizer."""

from .adam_optimizer_service import AdamOptimizerService, clip_by_global_norm
from .analytic_fields import GaussianTargetField
from .flow_matching_trainer_service import (
    FlowMatchingTrainerService,
    conditional_target,
    flow_matching_loss,
    interpolate,
)
from .velocity_field import ACTIVATION_CODES, ACTIVATION_NAMES, VelocityField, time_column

__all__ = [
    "ACTIVATION_CODES",
    "ACTIVATION_NAMES",
    "AdamOptimizerService",
    "FlowMatchingTrainerService",
    "GaussianTargetField",
    "VelocityField",
    "clip_by_global_norm",
    "conditional_target",
    "flow_matching_loss",
    "interpolate",
    "time_column",
]
