"""Service for memoryless-noise SDE trajectory sampling."""

import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np

from src.core.errors import DomainError, IntegrationError
from src.core.interfaces.interpolant_schedule import InterpolantSchedule
from src.core.interfaces.velocity_model import VelocityModel
from src.core.services.datasets.rng_functions import derive_rng
from src.core.services.schedules.coefficient_functions import clamped_sigma
from src.database.repositories.files.trajectory_csv_saver_service import (
    TrajectoryCsvSaverService,
)
from src.models.flow import TrajectoryBatch


def sde_time_grid(steps: int) -> np.ndarray:
    """
    Uniform grid from t_min = 1 / (2 steps) to 1 with `steps` intervals.

    The step is (1 - t_min) / steps, slightly below 1 / steps, so the last
    state lands exactly at t = 1.
    """
    t_min = 0.5 / steps
    return np.linspace(t_min, 1.0, steps + 1)


def sde_drift(
    field: VelocityModel, schedule: InterpolantSchedule, x: np.ndarray, t: float
) -> np.ndarray:
    """2 u(x, t) - (omega_dot_t / omega_t) x."""
    ratio = float(schedule.omega_dot(t)) / float(schedule.omega(t))
    return 2.0 * field.evaluate(x, t) - ratio * x


class SdeSamplerService:
    """Service responsible only for simulating memoryless SDE trajectories."""

    def __init__(self, trajectory_saver: Optional[TrajectoryCsvSaverService] = None):
        self.trajectory_saver = trajectory_saver or TrajectoryCsvSaverService()

    def sample(
        self,
        field: VelocityModel,
        n: int,
        steps: int,
        schedule: InterpolantSchedule,
        seed: int,
        noise_scale: float = 1.0,
        dump_path: Optional[Union[str, Path]] = None,
    ) -> TrajectoryBatch:
        """
        Simulate X_{t+h} = X_t + h (2u - (omega_dot/omega) X_t) + sqrt(h) sigma(t) eps.

        The first state at t_min is drawn from N(0, I); all noises are drawn up front
        from the (seed, "sde") stream and stored on the batch.

        Args:
            field: Velocity field driving the drift
            n: Trajectory count
            steps: Number of Euler-Maruyama steps (>= 2)
            schedule: Interpolant schedule
            seed: Stream seed
            noise_scale: Multiplier on sigma; 0 gives the noiseless recursion
            dump_path: Optional CSV destination for the trajectories

        Returns:
            TrajectoryBatch with times (N + 1,), states (N + 1, n, d), noises (N, n, d)
        """
        if steps < 2 or n < 1:
            raise DomainError("SDE sampling needs steps >= 2 and n >= 1")
        times = sde_time_grid(steps)
        t_min = float(times[0])
        rng = derive_rng(seed, "sde")
        states = np.empty((steps + 1, n, field.dim))
        states[0] = rng.standard_normal((n, field.dim))
        noises = rng.standard_normal((steps, n, field.dim))

        for i in range(steps):
            t = float(times[i])
            h = float(times[i + 1] - times[i])
            noise_level = noise_scale * clamped_sigma(schedule, t, t_min)
            drift = sde_drift(field, schedule, states[i], t)
            states[i + 1] = states[i] + h * drift + np.sqrt(h) * noise_level * noises[i]
            if not np.all(np.isfinite(states[i + 1])):
                logging.error("SDE state became non-finite at step %d", i + 1)
                raise IntegrationError("SDE state became non-finite", i + 1)

        batch = TrajectoryBatch(times=times, states=states, noises=noises)
        if dump_path is not None:
            self.trajectory_saver.save(batch, dump_path)
        return batch
