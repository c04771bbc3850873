"""Service for reward fine-tuning by adjoint matching."""

import logging
from typing import Optional

import numpy as np

from src.core.errors import FineTuningError
from src.core.interfaces.interpolant_schedule import InterpolantSchedule
from src.core.services.datasets.rng_functions import derive_seed
from src.core.services.flowmodel.adam_optimizer_service import AdamOptimizerService
from src.core.services.flowmodel.velocity_field import VelocityField
from src.core.services.sampler.sde_sampler_service import SdeSamplerService
from src.core.services.schedules.interpolant_schedules import LinearSchedule
from src.models.config import AdjointConfig
from src.models.flow import FineTuneReport
from src.models.records import RewardSpec

from .lean_adjoint_functions import am_objective, lean_adjoint_backward


class AdjointMatchingService:
    """Service responsible only for fine-tuning a velocity field toward a reward."""

    def __init__(
        self,
        schedule: Optional[InterpolantSchedule] = None,
        sde_sampler: Optional[SdeSamplerService] = None,
    ):
        """
        Initialize the solver.

        Args:
            schedule: Interpolant schedule of the base model
            sde_sampler: Trajectory sampler
        """
        self.schedule = schedule or LinearSchedule()
        self.sde_sampler = sde_sampler or SdeSamplerService()

    def finetune(
        self,
        base_field: VelocityField,
        reward: RewardSpec,
        config: AdjointConfig,
        seed: int = 0,
    ) -> FineTuneReport:
        """
        Adjoint matching from a copy of the base field.

        Each round samples m trajectories under the current tuned field, solves
        the lean adjoint under the base drift and takes steps_per_round optimizer
        steps on the matching objective.

        Args:
            base_field: Field to start from and anchor the adjoint to
            reward: Reward gradients
            config: Rounds, batch size, trajectory length and optimizer settings
            seed: Stream seed; config.seed wins when set

        Returns:
            FineTuneReport with the tuned field and per-round losses

        Raises:
            FineTuningError: If the objective becomes non-finite
        """
        seed = config.seed if config.seed is not None else seed
        tuned = base_field.copy()
        optimizer = AdamOptimizerService(config.learning_rate, grad_clip=config.grad_clip)
        round_losses = []

        for round_index in range(config.outer_iters):
            batch = self.sde_sampler.sample(
                tuned,
                config.batch_size,
                config.steps,
                self.schedule,
                derive_seed(seed, "am-round", round_index),
            )
            adjoints = lean_adjoint_backward(batch, base_field, self.schedule, reward)
            losses = []
            for _ in range(config.steps_per_round):
                loss, gradients = am_objective(batch, adjoints, tuned, base_field, self.schedule)
                if not np.isfinite(loss):
                    logging.error("Adjoint matching diverged in round %d", round_index)
                    raise FineTuningError("adjoint matching objective is not finite", round_index)
                params = [p.data for p in tuned.parameters()]
                tuned = tuned.with_parameters(optimizer.step(params, gradients))
                losses.append(loss)
            round_losses.append(losses)
            logging.debug(
                "Adjoint matching round %d/%d loss %.6f grad norm %.4f",
                round_index + 1,
                config.outer_iters,
                losses[-1],
                optimizer.last_grad_norm,
            )
        return FineTuneReport(field=tuned, round_losses=round_losses)
