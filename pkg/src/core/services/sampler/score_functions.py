"""Score transform of a learned velocity field."""

import numpy as np

from src.core.errors import DomainError
from src.core.interfaces.interpolant_schedule import InterpolantSchedule
from src.core.interfaces.velocity_model import VelocityModel
from src.core.services.schedules.coefficient_functions import score_denominator
from src.models.flow import ScoreConfig


def clipped_time(t: float, config: ScoreConfig) -> float:
    """min(t, 1 - epsilon)."""
    return min(float(t), 1.0 - config.epsilon_clip)


def score(
    field: VelocityModel,
    schedule: InterpolantSchedule,
    x: np.ndarray,
    t: float,
    config: ScoreConfig,
) -> np.ndarray:
    """
    Score s_t(x) recovered from the velocity field.

    Uses the stable form (omega u - omega_dot x) / (kappa (omega_dot kappa - kappa_dot omega))
    evaluated at t' = min(t, 1 - epsilon).

    Args:
        field: Velocity field
        schedule: Interpolant schedule the field was trained with
        x: Points (n, d) or a single point (d,)
        t: Time in [0, 1]
        config: Terminal clipping

    Returns:
        Scores with the shape of x

    Raises:
        DomainError: If t is outside [0, 1] or the denominator vanishes at t',
            as it does at t = 0 for power schedules
    """
    if not 0.0 <= float(t) <= 1.0:
        raise DomainError(f"score needs 0 <= t <= 1, got {t}")
    single = np.ndim(x) == 1
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    t_clip = clipped_time(t, config)
    if t_clip >= 1.0:
        raise DomainError("clipped score time reached 1")
    denominator = score_denominator(schedule, t_clip)
    if denominator <= 0.0:
        raise DomainError(f"score denominator vanishes at t={t_clip}")
    omega = float(schedule.omega(t_clip))
    omega_dot = float(schedule.omega_dot(t_clip))
    velocity = field.evaluate(x, t_clip)
    result = (omega * velocity - omega_dot * x) / denominator
    return result[0] if single else result
