"""Service for deterministic flow ODE sampling."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

import numpy as np

from src.config.settings import settings
from src.core.errors import DomainError, IntegrationError
from src.core.interfaces.velocity_model import VelocityModel
from src.core.services.datasets.rng_functions import derive_rng

# Rows per partition; each partition owns the stream (seed, "ode", index).
PARTITION_ROWS = 2048


def euler_integrate(
    field: VelocityModel, x0: np.ndarray, steps: int, start_step: int = 0
) -> np.ndarray:
    """
    Explicit Euler for dX = u(X, t) dt on [0, 1] with h = 1 / steps.

    Raises:
        IntegrationError: On the first non-finite state
    """
    h = 1.0 / steps
    x = np.array(x0, dtype=np.float64, copy=True)
    for step in range(steps):
        x = x + h * field.evaluate(x, step * h)
        if not np.all(np.isfinite(x)):
            raise IntegrationError("ODE state became non-finite", start_step + step + 1)
    return x


class OdeSamplerService:
    """Service responsible only for sampling X_1 by integrating the flow ODE."""

    def __init__(self, threads: Optional[int] = None):
        """
        Initialize the sampler.

        Args:
            threads: Worker cap; FEXP_THREADS when omitted
        """
        self.threads = threads or settings.thread_count()

    def initial_states(self, n: int, dim: int, seed: int) -> List[np.ndarray]:
        """Source draws X_0 ~ N(0, I), one block per partition."""
        blocks = []
        for index, start in enumerate(range(0, n, PARTITION_ROWS)):
            rows = min(PARTITION_ROWS, n - start)
            blocks.append(derive_rng(seed, "ode", index).standard_normal((rows, dim)))
        return blocks

    def sample(self, field: VelocityModel, n: int, steps: int, seed: int) -> np.ndarray:
        """
        Draw n samples from the model.

        Args:
            field: Velocity field
            n: Sample count
            steps: Euler steps
            seed: Run seed

        Returns:
            Array of shape (n, d); identical for any worker count
        """
        if n < 1 or steps < 1:
            raise DomainError("ODE sampling needs n >= 1 and steps >= 1")
        blocks = self.initial_states(n, field.dim, seed)
        if self.threads > 1 and len(blocks) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                results = list(pool.map(lambda block: euler_integrate(field, block, steps), blocks))
        else:
            results = [euler_integrate(field, block, steps) for block in blocks]
        logging.debug("Sampled %d points with %d Euler steps", n, steps)
        return np.concatenate(results, axis=0)
