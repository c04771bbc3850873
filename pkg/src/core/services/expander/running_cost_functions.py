"""Reward gradients of the expansion and terminal baselines."""

import numpy as np

from src.core.errors import DomainError
from src.core.interfaces.interpolant_schedule import InterpolantSchedule
from src.core.interfaces.velocity_model import VelocityModel
from src.core.services.sampler.score_functions import score
from src.models.flow import ScoreConfig

GRADIENT_KINDS = ("global", "local")


def running_cost_grad(
    kind: str,
    current_field: VelocityModel,
    pre_field: VelocityModel,
    schedule: InterpolantSchedule,
    alpha: float,
    x: np.ndarray,
    t: float,
    config: ScoreConfig,
) -> np.ndarray:
    """
    Gradient of the first variation of the (regularized) entropy.

    global: -s_t(x) of the current field; local: -s_t - alpha (s_t - s_pre_t).
    An alpha of 0 always takes the global formula.

    Args:
        kind: global or local
        current_field: Previous iterate
        pre_field: Pretrained field anchoring the KL term
        schedule: Interpolant schedule
        alpha: KL coefficient
        x: Points (n, d)
        t: Time in [0, 1], clipped to 1 - epsilon inside the score
        config: Terminal clipping

    Returns:
        Gradient with the shape of x
    """
    if kind not in GRADIENT_KINDS:
        raise DomainError(f"unknown running cost kind '{kind}'")
    current = score(current_field, schedule, x, t, config)
    if kind == "global" or alpha == 0.0:
        return -current
    pre = score(pre_field, schedule, x, t, config)
    return -current - alpha * (current - pre)
