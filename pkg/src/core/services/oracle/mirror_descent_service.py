"""Service running exact mirror descent and tracking suboptimality."""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from src.core.errors import DomainError
from src.models.measures import DiscreteMeasure, SupportMask

from .discrete_functions import (
    first_variation,
    kl,
    md_step,
    objective_value,
    optimum,
    smoothness_constant,
)

GAP_TOLERANCE = 1e-12


@dataclass
class MirrorDescentResult:
    """Iterates q^0..q^K with gaps and rate bounds; bound at k=0 is infinite."""

    iterates: List[DiscreteMeasure]
    gaps: List[float]
    bounds: List[float]
    optimum: DiscreteMeasure
    gammas: List[float] = field(default_factory=list)

    def bound_holds(self, tolerance: float = GAP_TOLERANCE) -> bool:
        return all(gap <= bound + tolerance for gap, bound in zip(self.gaps[1:], self.bounds[1:]))

    def is_monotone(self, tolerance: float = GAP_TOLERANCE) -> bool:
        return bool(np.all(np.diff(self.gaps[1:]) <= tolerance))

    def rows(self) -> List[dict]:
        return [
            {"k": k, "gap": gap, "bound": bound}
            for k, (gap, bound) in enumerate(zip(self.gaps, self.bounds))
        ]


class MirrorDescentService:
    """Service responsible only for exact discrete mirror descent runs."""

    def __init__(self, objective: str = "entropy", p_pre: Optional[DiscreteMeasure] = None, alpha: float = 0.0):
        """
        Initialize the run.

        Args:
            objective: entropy or entropy_minus_alpha_kl
            p_pre: Reference measure of the KL term
            alpha: KL coefficient
        """
        if objective == "entropy_minus_alpha_kl" and alpha > 0.0 and p_pre is None:
            raise DomainError("the KL objective needs a reference measure")
        self.objective = objective
        self.p_pre = p_pre
        self.alpha = alpha

    def run(
        self,
        q0: DiscreteMeasure,
        gamma: Callable[[int], float],
        mask: SupportMask,
        iterations: int,
    ) -> MirrorDescentResult:
        """
        Iterate md_step on the first variation K times.

        gap(k) = L(q*) - L(q^k) and bound(k) = KL(q* || q0) / sum_{j<=k} gamma_j, which
        is KL(q* || q0) / k for gamma = 1 / lambda* with lambda* = 1.

        Raises:
            DomainError: If q0 is not positive on the mask
        """
        if np.any(~q0.support()[mask.cells]):
            raise DomainError("initial measure must be positive on the mask")
        target = optimum(self.objective, mask, self.p_pre, self.alpha)
        best = objective_value(self.objective, target, self.p_pre, self.alpha)
        distance = kl(target, q0)

        q = q0
        iterates, gaps, bounds, gammas = [q0], [best - self._value(q0)], [np.inf], []
        step_total = 0.0
        for k in range(1, iterations + 1):
            gamma_k = float(gamma(k))
            grad = first_variation(self.objective, q, mask, self.p_pre, self.alpha)
            q = md_step(q, grad, gamma_k, mask)
            step_total += gamma_k
            iterates.append(q)
            gammas.append(gamma_k)
            gaps.append(best - self._value(q))
            bounds.append(distance / step_total)
        logging.debug(
            "Mirror descent (%s, lambda*=%.3f): gap(K)=%.3e",
            self.objective,
            smoothness_constant(self.objective, self.alpha),
            gaps[-1],
        )
        return MirrorDescentResult(iterates, gaps, bounds, target, gammas)

    def _value(self, q: DiscreteMeasure) -> float:
        return objective_value(self.objective, q, self.p_pre, self.alpha)


def run_md(
    q0: DiscreteMeasure,
    objective: str,
    gamma: Callable[[int], float],
    mask: SupportMask,
    iterations: int,
    p_pre: Optional[DiscreteMeasure] = None,
    alpha: float = 0.0,
) -> MirrorDescentResult:
    return MirrorDescentService(objective, p_pre, alpha).run(q0, gamma, mask, iterations)
