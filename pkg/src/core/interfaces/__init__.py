"""Abstract interfaces shared across services."""

from .interpolant_schedule import InterpolantSchedule
from .velocity_model import TimeLike, VelocityModel
from .verifier import Verifier

__all__ = ["InterpolantSchedule", "TimeLike", "VelocityModel", "Verifier"]
