"""Abstract interface for velocity fields."""

from abc import ABC, abstractmethod
from typing import Union

import numpy as np

TimeLike = Union[float, np.ndarray]


class VelocityModel(ABC):
    """A velocity field u(x, t) on R^d that can be evaluated and differentiated in x."""

    @property
    @abstractmethod
    def dim(self) -> int:
        """State dimension d."""
        pass

    @abstractmethod
    def evaluate(self, x: np.ndarray, t: TimeLike) -> np.ndarray:
        """
        Evaluate the field on a batch.

        Args:
            x: Array of shape (n, d)
            t: Scalar time or array of shape (n,)

        Returns:
            Velocities of shape (n, d)
        """
        pass

    @abstractmethod
    def vjp(self, x: np.ndarray, t: TimeLike, cotangent: np.ndarray) -> np.ndarray:
        """
        Vector-Jacobian product of u with respect to x.

        Args:
            x: Array of shape (n, d)
            t: Scalar time or array of shape (n,)
            cotangent: Array of shape (n, d)

        Returns:
            Rows cotangent_i^T du(x_i, t)/dx of shape (n, d)
        """
        pass
