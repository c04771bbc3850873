"""Abstract interface for interpolant schedules."""

from abc import ABC, abstractmethod


class InterpolantSchedule(ABC):
    """Coefficients of the conditional path X_t = kappa_t X_0 + omega_t X_1."""

    name: str = "schedule"

    @abstractmethod
    def kappa(self, t: float) -> float:
        """Source coefficient."""
        pass

    @abstractmethod
    def omega(self, t: float) -> float:
        """Target coefficient."""
        pass

    @abstractmethod
    def kappa_dot(self, t: float) -> float:
        """Time derivative of kappa."""
        pass

    @abstractmethod
    def omega_dot(self, t: float) -> float:
        """Time derivative of omega."""
        pass

    def descriptor(self) -> dict:
        """Serializable description of the schedule."""
        return {"kind": self.name}
