"""Interpolant schedule implementations."""

import numpy as np

from src.core.errors import DomainError
from src.core.interfaces.interpolant_schedule import InterpolantSchedule
from src.models.config import ScheduleSpec


class LinearSchedule(InterpolantSchedule):
    """kappa_t = 1 - t, omega_t = t."""

    name = "linear"

    def kappa(self, t):
        return 1.0 - t

    def omega(self, t):
        return t

    def kappa_dot(self, t):
        return -1.0 + 0.0 * np.asarray(t, dtype=np.float64)

    def omega_dot(self, t):
        return 1.0 + 0.0 * np.asarray(t, dtype=np.float64)


class PowerSchedule(InterpolantSchedule):
    """kappa_t = (1 - t)^p, omega_t = t^p."""

    name = "power"

    def __init__(self, power: float = 2.0):
        if power < 1.0:
            raise DomainError(f"power schedule exponent must be >= 1, got {power}")
        self.power = float(power)

    def kappa(self, t):
        return np.power(1.0 - np.asarray(t, dtype=np.float64), self.power)

    def omega(self, t):
        return np.power(np.asarray(t, dtype=np.float64), self.power)

    def kappa_dot(self, t):
        return -self.power * np.power(1.0 - np.asarray(t, dtype=np.float64), self.power - 1.0)

    def omega_dot(self, t):
        return self.power * np.power(np.asarray(t, dtype=np.float64), self.power - 1.0)

    def descriptor(self) -> dict:
        return {"kind": self.name, "power": self.power}


def build_schedule(spec: ScheduleSpec = None) -> InterpolantSchedule:
    """
    Build a schedule from its configuration.

    Args:
        spec: Schedule selection; linear when omitted

    Returns:
        InterpolantSchedule instance
    """
    if spec is None or spec.kind == "linear":
        return LinearSchedule()
    if spec.power == 1.0:
        return LinearSchedule()
    return PowerSchedule(spec.power)
