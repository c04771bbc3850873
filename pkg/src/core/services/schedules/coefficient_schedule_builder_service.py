"""Service for assembling the lambda, alpha, gamma and eta schedules of a run."""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

from src.core.interfaces.interpolant_schedule import InterpolantSchedule
from src.models.config import ExpanderConfig

from .coefficient_functions import gamma_schedule, lambda_star, lambda_weight, reparametrize_beta
from .interpolant_schedules import LinearSchedule


@dataclass(frozen=True)
class CoefficientSchedules:
    """Integral weighting, KL coefficients, step sizes and projection strengths."""

    lambda_fn: Callable[[float], float]
    alpha_fn: Callable[[float], float]
    gamma_fn: Callable[[int], float]
    eta_fn: Callable[[int], float]

    def lambda_(self, t: float) -> float:
        return self.lambda_fn(t)

    def alpha(self, t: float) -> float:
        return self.alpha_fn(t)

    def gamma(self, k: int) -> float:
        return self.gamma_fn(k)

    def eta(self, k: int) -> float:
        return self.eta_fn(k)

    def lambda_star(self) -> float:
        return lambda_star(self.lambda_fn)


class CoefficientScheduleBuilderService:
    """Service responsible only for turning an expander configuration into schedules."""

    def __init__(self, schedule: Optional[InterpolantSchedule] = None):
        """
        Initialize the builder.

        Args:
            schedule: Interpolant schedule used by the sigma-proportional weight
        """
        self.schedule = schedule or LinearSchedule()

    def resolve_alpha_gamma(self, config: ExpanderConfig):
        """
        Resolve (alpha, gamma base), converting beta/gamma_tilde when present.

        Returns:
            Tuple of alpha and gamma base
        """
        if config.beta is not None:
            alpha, gamma_base = reparametrize_beta(config.beta, config.gamma_tilde)
            logging.info(
                "Reparametrized beta=%.4f, gamma_tilde=%.4f to alpha=%.4f, gamma=%.4f",
                config.beta,
                config.gamma_tilde,
                alpha,
                gamma_base,
            )
            return alpha, gamma_base
        return config.alpha, config.gamma_base

    def build(self, config: ExpanderConfig) -> CoefficientSchedules:
        """
        Build the coefficient schedules.

        Args:
            config: Expander configuration

        Returns:
            CoefficientSchedules for the run
        """
        alpha, gamma_base = self.resolve_alpha_gamma(config)
        schedule = self.schedule
        eta = config.resolved_eta()
        t_min = 0.5 / config.adjoint.steps

        def lambda_fn(t: float) -> float:
            return lambda_weight(
                config.lambda_kind, schedule, config.lambda_band, t, config.lambda_constant, t_min
            )

        def gamma_fn(k: int) -> float:
            return gamma_schedule(config.gamma_kind, gamma_base, k)

        return CoefficientSchedules(
            lambda_fn=lambda_fn,
            alpha_fn=lambda t: alpha,
            gamma_fn=gamma_fn,
            eta_fn=lambda k: eta,
        )
