"""Closed-form velocity fields for Gaussian and point-mass targets."""

import numpy as np

from src.core.errors import DimensionError
from src.core.interfaces.interpolant_schedule import InterpolantSchedule
from src.core.interfaces.velocity_model import TimeLike, VelocityModel
from src.core.services.flowmodel.velocity_field import time_column


class GaussianTargetField(VelocityModel):
    """
    Exact marginal velocity for target N(m, s^2 I) from a N(0, I) source.

    The marginal at time t is N(omega m, (kappa^2 + omega^2 s^2) I); s = 0 gives
    the point-mass target.
    """

    def __init__(self, schedule: InterpolantSchedule, mean, std: float = 0.0):
        self.schedule = schedule
        self.mean = np.asarray(mean, dtype=np.float64).reshape(-1)
        self.std = float(std)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def _coefficients(self, t: TimeLike, n: int):
        column = time_column(t, n)
        kappa = np.asarray(self.schedule.kappa(column), dtype=np.float64)
        omega = np.asarray(self.schedule.omega(column), dtype=np.float64)
        kappa_dot = np.asarray(self.schedule.kappa_dot(column), dtype=np.float64)
        omega_dot = np.asarray(self.schedule.omega_dot(column), dtype=np.float64)
        variance = kappa * kappa + omega * omega * self.std**2
        gain = (kappa * kappa_dot + omega * omega_dot * self.std**2) / variance
        return omega, omega_dot, variance, gain

    def _check(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.dim:
            raise DimensionError(f"expected inputs of shape (n, {self.dim}), got {x.shape}")
        return x

    def evaluate(self, x: np.ndarray, t: TimeLike) -> np.ndarray:
        x = self._check(x)
        omega, omega_dot, _, gain = self._coefficients(t, x.shape[0])
        return omega_dot * self.mean + gain * (x - omega * self.mean)

    def vjp(self, x: np.ndarray, t: TimeLike, cotangent: np.ndarray) -> np.ndarray:
        x = self._check(x)
        _, _, _, gain = self._coefficients(t, x.shape[0])
        return gain * np.asarray(cotangent, dtype=np.float64)

    def marginal_variance(self, t: float) -> float:
        kappa, omega = float(self.schedule.kappa(t)), float(self.schedule.omega(t))
        return kappa * kappa + omega * omega * self.std**2

    def marginal_score(self, x: np.ndarray, t: TimeLike) -> np.ndarray:
        """Analytic grad log p_t(x)."""
        x = self._check(x)
        omega, _, variance, _ = self._coefficients(t, x.shape[0])
        return -(x - omega * self.mean) / variance

    def marginal_logpdf(self, x: np.ndarray, t: TimeLike) -> np.ndarray:
        """Analytic log p_t(x)."""
        x = self._check(x)
        omega, _, variance, _ = self._coefficients(t, x.shape[0])
        squared = np.sum((x - omega * self.mean) ** 2, axis=1, keepdims=True)
        log_density = -0.5 * squared / variance - 0.5 * self.dim * np.log(2.0 * np.pi * variance)
        return log_density.reshape(-1)
