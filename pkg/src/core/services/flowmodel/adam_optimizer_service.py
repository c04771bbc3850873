"""Service for Adam parameter updates."""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.config.settings import settings


def clip_by_global_norm(
    grads: Sequence[np.ndarray], max_norm: Optional[float]
) -> Tuple[List[np.ndarray], float]:
    """
    Rescale gradients so their joint L2 norm is at most max_norm.

    Returns:
        Clipped gradients and the norm before clipping
    """
    norm = float(np.sqrt(sum(float(np.sum(g * g)) for g in grads)))
    if max_norm is None or norm <= max_norm or norm == 0.0:
        return [np.asarray(g) for g in grads], norm
    factor = max_norm / norm
    return [g * factor for g in grads], norm


class AdamOptimizerService:
    """Service responsible only for Adam moment bookkeeping and updates."""

    def __init__(
        self,
        learning_rate: float,
        beta1: float = settings.ADAM_BETA1,
        beta2: float = settings.ADAM_BETA2,
        epsilon: float = settings.ADAM_EPSILON,
        grad_clip: Optional[float] = None,
    ):
        """
        Initialize the optimizer.

        Args:
            learning_rate: Step size
            beta1: First-moment decay
            beta2: Second-moment decay
            epsilon: Denominator offset
            grad_clip: Global gradient norm cap, None to disable
        """
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.grad_clip = grad_clip
        self.step_count = 0
        self._first: Optional[List[np.ndarray]] = None
        self._second: Optional[List[np.ndarray]] = None
        self.last_grad_norm = 0.0

    def step(
        self, params: Sequence[np.ndarray], grads: Sequence[np.ndarray]
    ) -> List[np.ndarray]:
        """
        Apply one update.

        Args:
            params: Current parameter arrays
            grads: Gradients with the same shapes

        Returns:
            New parameter arrays
        """
        grads, self.last_grad_norm = clip_by_global_norm(grads, self.grad_clip)
        if self._first is None:
            self._first = [np.zeros_like(p, dtype=np.float64) for p in params]
            self._second = [np.zeros_like(p, dtype=np.float64) for p in params]
        self.step_count += 1
        correction1 = 1.0 - self.beta1**self.step_count
        correction2 = 1.0 - self.beta2**self.step_count
        updated = []
        for index, (p, g) in enumerate(zip(params, grads)):
            self._first[index] = self.beta1 * self._first[index] + (1.0 - self.beta1) * g
            self._second[index] = self.beta2 * self._second[index] + (1.0 - self.beta2) * g * g
            m_hat = self._first[index] / correction1
            v_hat = self._second[index] / correction2
            updated.append(p - self.learning_rate * m_hat / (np.sqrt(v_hat) + self.epsilon))
        return updated
