"""Data models for trajectories, scores and training results."""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.core.errors import DimensionError, DomainError
from src.core.interfaces.velocity_model import VelocityModel


@dataclass(frozen=True)
class ScoreConfig:
    """Terminal clipping for the score transform."""

    epsilon_clip: float = 0.02

    def __post_init__(self):
        if not 0.0 < self.epsilon_clip < 0.5:
            raise DomainError(f"epsilon_clip must lie in (0, 0.5), got {self.epsilon_clip}")


@dataclass(frozen=True)
class Trajectory:
    """One discretized path: grid, states and the noises injected at each step."""

    times: np.ndarray
    states: np.ndarray
    noises: np.ndarray


@dataclass(frozen=True)
class TrajectoryBatch:
    """
    Trajectories sharing one time grid.

    times has shape (N + 1,), states (N + 1, n, d) and noises (N, n, d).
    """

    times: np.ndarray
    states: np.ndarray
    noises: np.ndarray

    def __post_init__(self):
        if self.states.shape[0] != self.times.shape[0]:
            raise DimensionError("states and time grid differ in length")
        if self.noises.shape[0] != self.times.shape[0] - 1:
            raise DimensionError("noises must have one entry per step")
        if np.any(np.diff(self.times) <= 0.0):
            raise DomainError("trajectory time grid must be strictly increasing")

    @property
    def steps(self) -> int:
        return self.times.shape[0] - 1

    @property
    def count(self) -> int:
        return self.states.shape[1]

    @property
    def dim(self) -> int:
        return self.states.shape[2]

    @property
    def step_size(self) -> float:
        return float(self.times[1] - self.times[0])

    def trajectory(self, index: int) -> Trajectory:
        return Trajectory(self.times, self.states[:, index, :], self.noises[:, index, :])

    def terminal_states(self) -> np.ndarray:
        return self.states[-1]


@dataclass
class TrainingReport:
    """Pretraining outcome."""

    field: VelocityModel
    epoch_losses: List[float] = field(default_factory=list)


@dataclass
class FineTuneReport:
    """Adjoint matching outcome with the objective value of each optimizer step."""

    field: VelocityModel
    round_losses: List[List[float]] = field(default_factory=list)


@dataclass
class ExpansionResult:
    """Final field of an expansion run with one record per phase snapshot."""

    field: VelocityModel
    records: List = field(default_factory=list)
    samples: Optional[np.ndarray] = None
