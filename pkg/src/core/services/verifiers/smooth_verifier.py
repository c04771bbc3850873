"""Sigmoid soft indicator built on a verifier margin."""

from typing import Dict

import numpy as np
from scipy.special import expit, log_expit

from src.config.settings import settings
from src.core.errors import CapabilityError, DomainError
from src.core.interfaces.verifier import Verifier


class SmoothVerifier:
    """
    v~(x) = sigmoid(tau * m(x)) for a signed margin m, positive inside.

    grad log v~ = tau * sigmoid(-tau * m) * grad m stays finite where v = 0.
    """

    def __init__(self, verifier: Verifier, temperature: float = settings.SMOOTH_TEMPERATURE):
        if not verifier.supports_margin():
            raise CapabilityError(f"verifier kind '{verifier.kind}' cannot be smoothed")
        if temperature <= 0.0:
            raise DomainError(f"temperature must be positive, got {temperature}")
        self.verifier = verifier
        self.temperature = float(temperature)

    def value(self, x: np.ndarray) -> np.ndarray:
        return expit(self.temperature * self.verifier.margin(x))

    def log_value(self, x: np.ndarray) -> np.ndarray:
        return log_expit(self.temperature * self.verifier.margin(x))

    def grad_log(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        weight = self.temperature * expit(-self.temperature * self.verifier.margin(x))
        return weight[:, None] * self.verifier.margin_grad(x)

    def descriptor(self) -> Dict:
        return {"temperature": self.temperature, **self.verifier.descriptor()}


def smooth(verifier: Verifier, temperature: float = settings.SMOOTH_TEMPERATURE) -> SmoothVerifier:
    """Differentiable surrogate of a margin-capable verifier."""
    return SmoothVerifier(verifier, temperature)
