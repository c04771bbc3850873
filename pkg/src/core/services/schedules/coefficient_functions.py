"""Time and iteration coefficients derived from an interpolant schedule."""

import math
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from src.config.settings import settings
from src.core.errors import DomainError, ScheduleError
from src.core.interfaces.interpolant_schedule import InterpolantSchedule

GAMMA_KINDS = ("constant", "harmonic_decay", "paper_toy", "fast_decay")
LAMBDA_KINDS = ("zero_band_constant", "zero_band_sigma")


def sigma(schedule: InterpolantSchedule, t: float) -> float:
    """
    Memoryless noise level sqrt(2 kappa (omega_dot / omega * kappa - kappa_dot)).

    Args:
        schedule: Interpolant schedule
        t: Time in the open interval (0, 1)

    Returns:
        Noise level at t

    Raises:
        DomainError: If t is outside (0, 1) or omega_t is not positive
        ScheduleError: If the radicand is negative
    """
    t = float(t)
    if not 0.0 < t < 1.0:
        raise DomainError(f"sigma needs 0 < t < 1, got {t}")
    kappa, omega = float(schedule.kappa(t)), float(schedule.omega(t))
    if omega <= 0.0:
        raise DomainError(f"omega_t must be positive at t={t}")
    radicand = 2.0 * kappa * (float(schedule.omega_dot(t)) / omega * kappa - float(schedule.kappa_dot(t)))
    if radicand < 0.0:
        raise ScheduleError(f"negative sigma radicand {radicand} at t={t}")
    return math.sqrt(radicand)


def clamped_sigma(schedule: InterpolantSchedule, t: float, t_min: float) -> float:
    """Sigma evaluated at t clamped into [t_min, 1 - t_min]."""
    return sigma(schedule, min(max(float(t), t_min), 1.0 - t_min))


def score_denominator(schedule: InterpolantSchedule, t: float) -> float:
    """
    Stable score denominator kappa_t (omega_dot_t kappa_t - kappa_dot_t omega_t).

    Raises:
        DomainError: If t is outside [0, 1)
    """
    t = float(t)
    if not 0.0 <= t < 1.0:
        raise DomainError(f"score denominator needs 0 <= t < 1, got {t}")
    kappa = float(schedule.kappa(t))
    return kappa * (float(schedule.omega_dot(t)) * kappa - float(schedule.kappa_dot(t)) * float(schedule.omega(t)))


def reparametrize_beta(beta: float, gamma_tilde: float) -> Tuple[float, float]:
    """
    Convert (beta, gamma_tilde) into (alpha, gamma).

    alpha = beta / (1 - beta) and gamma = gamma_tilde / (alpha + 1), so that
    beta = alpha / (alpha + 1).

    Raises:
        DomainError: If beta is outside [0, 1) or gamma_tilde is not positive
    """
    if not 0.0 <= beta < 1.0:
        raise DomainError(f"beta must lie in [0, 1), got {beta}")
    if gamma_tilde <= 0.0:
        raise DomainError(f"gamma_tilde must be positive, got {gamma_tilde}")
    alpha = beta / (1.0 - beta)
    return alpha, gamma_tilde / (alpha + 1.0)


def gamma_schedule(kind: str, base: float, k: int) -> float:
    """
    Step size gamma_k.

    Args:
        kind: constant, harmonic_decay (base / (1 + k)) or paper_toy (base / (1 + 3(k - 1)));
            fast_decay is an alias of paper_toy
        base: Base step size
        k: Iteration index starting at 1

    Returns:
        Step size for iteration k

    Raises:
        DomainError: If k < 1 or the kind is unknown
    """
    if k < 1:
        raise DomainError(f"iteration index must be >= 1, got {k}")
    if kind == "constant":
        return float(base)
    if kind == "harmonic_decay":
        return float(base) / (1.0 + k)
    if kind in ("paper_toy", "fast_decay"):
        return float(base) / (1.0 + 3.0 * (k - 1))
    raise DomainError(f"unknown gamma schedule '{kind}'")


def lambda_weight(
    kind: str,
    schedule: InterpolantSchedule,
    band: float,
    t: float,
    constant: float = 1.0,
    t_min: Optional[float] = None,
) -> float:
    """
    Running-cost weight lambda_t, zero on the terminal band t > 1 - band.

    Args:
        kind: zero_band_constant or zero_band_sigma
        schedule: Interpolant schedule (used by the sigma variant)
        band: Terminal band width
        t: Time in [0, 1]
        constant: Weight of the constant variant
        t_min: Sigma clamp, the first time of the SDE grid; 1 / (2 SDE_STEPS) when omitted

    Returns:
        Non-negative weight
    """
    if t > 1.0 - band:
        return 0.0
    if kind == "zero_band_constant":
        return float(constant)
    if kind == "zero_band_sigma":
        if t_min is None:
            t_min = 0.5 / settings.SDE_STEPS
        return clamped_sigma(schedule, t, t_min)
    raise DomainError(f"unknown lambda weight '{kind}'")


def lambda_star(weight: Callable[[float], float], points: int = 2001) -> float:
    """Integral of lambda_t over [0, 1] by the trapezoid rule."""
    grid = np.linspace(0.0, 1.0, points)
    values = np.array([weight(float(t)) for t in grid])
    return float(trapezoid(values, grid))
