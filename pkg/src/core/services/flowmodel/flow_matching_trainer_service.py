"""Service for conditional flow-matching pretraining."""

import logging
from typing import Optional

import numpy as np

from src.core import diffcore
from src.core.diffcore import Tape
from src.core.errors import DomainError, TrainingError
from src.core.interfaces.interpolant_schedule import InterpolantSchedule
from src.core.services.datasets.rng_functions import derive_rng
from src.core.services.flowmodel.adam_optimizer_service import AdamOptimizerService
from src.core.services.flowmodel.velocity_field import VelocityField
from src.core.services.schedules.interpolant_schedules import LinearSchedule
from src.models.config import TrainConfig
from src.models.flow import TrainingReport


def conditional_target(
    schedule: InterpolantSchedule, x0: np.ndarray, x1: np.ndarray, t
) -> np.ndarray:
    """
    Time derivative of the interpolant: kappa_dot_t x0 + omega_dot_t x1.

    Args:
        schedule: Interpolant schedule
        x0: Source points (n, d) or (d,)
        x1: Target points with the same shape
        t: Scalar time or per-row times (n,)
    """
    x0 = np.asarray(x0, dtype=np.float64)
    x1 = np.asarray(x1, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if t.ndim == 1 and x0.ndim == 2:
        t = t.reshape(-1, 1)
    return schedule.kappa_dot(t) * x0 + schedule.omega_dot(t) * x1


def interpolate(schedule: InterpolantSchedule, x0: np.ndarray, x1: np.ndarray, t) -> np.ndarray:
    """kappa_t x0 + omega_t x1 with per-row times."""
    t = np.asarray(t, dtype=np.float64).reshape(-1, 1)
    return schedule.kappa(t) * x0 + schedule.omega(t) * x1


def flow_matching_loss(
    field: VelocityField,
    schedule: InterpolantSchedule,
    x0: np.ndarray,
    x1: np.ndarray,
    t: np.ndarray,
) -> float:
    """Full-batch mean of ||u(x_t, t) - target||^2."""
    xt = interpolate(schedule, x0, x1, t)
    residual = field.evaluate(xt, t) - conditional_target(schedule, x0, x1, t)
    return float(np.sum(residual * residual) / x0.shape[0])


class FlowMatchingTrainerService:
    """Service responsible only for fitting a velocity field by flow matching."""

    def __init__(self, schedule: Optional[InterpolantSchedule] = None):
        """
        Initialize the trainer.

        Args:
            schedule: Interpolant schedule, linear by default
        """
        self.schedule = schedule or LinearSchedule()

    def pretrain(
        self,
        data: np.ndarray,
        config: TrainConfig,
        seed: Optional[int] = None,
        field: Optional[VelocityField] = None,
    ) -> TrainingReport:
        """
        Minimize the empirical conditional flow-matching loss with Adam.

        Args:
            data: Target samples (n, d)
            config: Training hyperparameters
            seed: Run seed, overridden by config.seed
            field: Starting field; a fresh MLP when omitted

        Returns:
            TrainingReport with the final field and per-epoch average losses

        Raises:
            DomainError: If the data is empty or not finite
            TrainingError: If the loss becomes non-finite
        """
        data = np.asarray(data, dtype=np.float64)
        if data.ndim != 2 or data.shape[0] == 0:
            raise DomainError("pretraining data must be a non-empty (n, d) array")
        if not np.all(np.isfinite(data)):
            raise DomainError("pretraining data must be finite")
        seed = config.seed if config.seed is not None else (seed or 0)
        n, dim = data.shape

        if field is None:
            field = VelocityField.initialize(
                dim, config.hidden_widths, config.activation, rng=derive_rng(seed, "init")
            )
        optimizer = AdamOptimizerService(config.learning_rate, grad_clip=config.grad_clip)
        rng = derive_rng(seed, "pretrain")
        batch_size = min(config.batch_size, n)
        epoch_losses = []

        logging.info(
            "Pretraining on %d points (d=%d), widths=%s, %d epochs",
            n,
            dim,
            field.widths,
            config.epochs,
        )
        for epoch in range(1, config.epochs + 1):
            order = rng.permutation(n)
            weighted_loss = 0.0
            for start in range(0, n, batch_size):
                x1 = data[order[start : start + batch_size]]
                x0 = rng.standard_normal(x1.shape)
                t = rng.uniform(0.0, 1.0, size=x1.shape[0])
                loss, field = self._train_step(field, optimizer, x0, x1, t)
                if not np.isfinite(loss):
                    logging.error("Flow matching loss diverged at epoch %d", epoch)
                    raise TrainingError("flow matching loss is not finite", epoch)
                weighted_loss += loss * x1.shape[0]
            epoch_losses.append(weighted_loss / n)
            if epoch == 1 or epoch % config.log_every == 0 or epoch == config.epochs:
                logging.info("Epoch %d/%d loss %.6f", epoch, config.epochs, epoch_losses[-1])

        return TrainingReport(field=field, epoch_losses=epoch_losses)

    def _train_step(self, field, optimizer, x0, x1, t):
        tape = Tape()
        xt = interpolate(self.schedule, x0, x1, t)
        target = conditional_target(self.schedule, x0, x1, t)
        output, _ = field.forward(xt, t, tape=tape)
        residual = diffcore.sub(output, target, tape=tape)
        loss = diffcore.scale(diffcore.sum_squares(residual, tape=tape), 1.0 / x0.shape[0], tape=tape)
        if not np.isfinite(loss.item()):
            return loss.item(), field
        grads = diffcore.backward(tape, loss, 1.0)
        params = field.parameters()
        gradients = [grads[tape.node_of(p)].data for p in params]
        updated = optimizer.step([p.data for p in params], gradients)
        return loss.item(), field.with_parameters(updated)
