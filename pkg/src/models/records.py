"""Data models for rewards, adjoints and run records."""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

GradientFn = Callable[[np.ndarray, float], np.ndarray]
TerminalGradientFn = Callable[[np.ndarray], np.ndarray]


def zero_weight(t: float) -> float:
    return 0.0


@dataclass(frozen=True)
class RewardSpec:
    """
    Reward gradients driving the lean adjoint.

    A missing gradient function stands for an identically zero gradient.
    """

    running_grad: Optional[GradientFn] = None
    terminal_grad: Optional[TerminalGradientFn] = None
    running_weight: Callable[[float], float] = zero_weight
    terminal_weight: float = 0.0

    @classmethod
    def zero(cls) -> "RewardSpec":
        return cls()

    def has_running(self) -> bool:
        return self.running_grad is not None

    def has_terminal(self) -> bool:
        return self.terminal_grad is not None and self.terminal_weight != 0.0


@dataclass(frozen=True)
class AdjointState:
    """Lean adjoints aligned with a trajectory batch grid, shape (N + 1, n, d)."""

    adjoints: np.ndarray

    def at_step(self, index: int) -> np.ndarray:
        return self.adjoints[index]


@dataclass
class MetricSnapshot:
    """Entropy, validity and VENDI of one sample set; None when disabled."""

    entropy: Optional[float] = None
    validity: Optional[float] = None
    vendi: Optional[float] = None


@dataclass
class IterateRecord:
    """One row of metrics.csv."""

    k: int
    phase: str
    checkpoint_path: Optional[str]
    metrics: MetricSnapshot
    wall_seconds: float

    def to_row(self) -> Dict:
        return {
            "k": self.k,
            "phase": self.phase,
            "entropy": self.metrics.entropy,
            "validity": self.metrics.validity,
            "vendi": self.metrics.vendi,
            "wall_seconds": self.wall_seconds,
        }


@dataclass
class OracleCheck:
    """Outcome of one discrete theory check."""

    name: str
    passed: bool
    worst: float
    detail: str = ""

    def to_row(self) -> Dict:
        return {"check": self.name, "passed": self.passed, "worst": self.worst, "detail": self.detail}


@dataclass
class OracleReport:
    """All oracle checks plus the (k, gap, bound) curve of one instance."""

    checks: List[OracleCheck]
    curve: List[Dict]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[OracleCheck]:
        return [check for check in self.checks if not check.passed]
