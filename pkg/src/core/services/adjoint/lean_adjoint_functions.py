"""Lean adjoint recursion and the adjoint matching objective."""

import logging
from typing import Callable, List, Optional, Tuple

import numpy as np

from src.core import diffcore
from src.core.diffcore import Tape, Tensor
from src.core.errors import DimensionError, IntegrationError, ScheduleError
from src.core.interfaces.interpolant_schedule import InterpolantSchedule
from src.core.interfaces.velocity_model import VelocityModel
from src.core.services.flowmodel.velocity_field import VelocityField
from src.core.services.schedules.coefficient_functions import clamped_sigma
from src.models.flow import TrajectoryBatch
from src.models.records import AdjointState, RewardSpec

DriftVjp = Callable[[np.ndarray, float, np.ndarray], np.ndarray]


def sde_drift_vjp(field: VelocityModel, schedule: InterpolantSchedule) -> DriftVjp:
    """VJP of 2 u(x, t) - (omega_dot / omega) x with respect to x."""

    def vjp(x: np.ndarray, t: float, cotangent: np.ndarray) -> np.ndarray:
        ratio = float(schedule.omega_dot(t)) / float(schedule.omega(t))
        return 2.0 * field.vjp(x, t, cotangent) - ratio * cotangent

    return vjp


def lean_adjoint_backward(
    batch: TrajectoryBatch,
    base_field: VelocityModel,
    schedule: InterpolantSchedule,
    reward: RewardSpec,
    drift_vjp: Optional[DriftVjp] = None,
) -> AdjointState:
    """
    Solve the lean adjoint backwards along recorded trajectories.

    a_1 = -w_1 grad f_1(X_1) and
    a_{t-h} = a_t + h VJP(drift; a_t) - h w(t) grad f_t(X_t),
    so the adjoint is minus the gradient of the reward-to-go.

    Args:
        batch: Trajectories from the memoryless SDE sampler
        base_field: Field whose drift Jacobian drives the recursion
        schedule: Interpolant schedule used for sampling
        reward: Running and terminal reward gradients
        drift_vjp: Override of the drift VJP, the memoryless SDE drift by default

    Returns:
        AdjointState aligned with the batch grid

    Raises:
        DimensionError: If trajectory and field dimensions differ
        IntegrationError: On the first non-finite adjoint
    """
    steps, count, dim = batch.steps, batch.states.shape[1], batch.states.shape[2]
    if dim != base_field.dim:
        raise DimensionError(f"trajectories have dimension {dim}, field {base_field.dim}")
    vjp = drift_vjp or sde_drift_vjp(base_field, schedule)
    times, states = batch.times, batch.states

    adjoints = np.zeros((steps + 1, count, dim))
    if reward.has_terminal():
        adjoints[steps] = -reward.terminal_weight * np.asarray(reward.terminal_grad(states[steps]))
    if not reward.has_terminal() and not reward.has_running():
        return AdjointState(adjoints)

    for i in range(steps, 0, -1):
        t = float(times[i])
        h = float(times[i] - times[i - 1])
        a = adjoints[i]
        update = a + h * vjp(states[i], t, a)
        weight = reward.running_weight(t) if reward.has_running() else 0.0
        if weight != 0.0:
            update = update - h * weight * np.asarray(reward.running_grad(states[i], t))
        if not np.all(np.isfinite(update)):
            logging.error("Lean adjoint became non-finite at step %d", i - 1)
            raise IntegrationError("lean adjoint became non-finite", i - 1)
        adjoints[i - 1] = update
    return AdjointState(adjoints)


def am_objective(
    batch: TrajectoryBatch,
    adjoints: AdjointState,
    tuned_field: VelocityField,
    base_field: VelocityModel,
    schedule: InterpolantSchedule,
) -> Tuple[float, List[np.ndarray]]:
    """
    sum over t < 1 of ||(2 / sigma)(u_tuned - u_base) + sigma a_t||^2 and its parameter gradient.

    States and adjoints are constants. The base velocity is evaluated on the same
    state blocks, so identical fields give an exactly zero difference.

    Returns:
        Objective value and gradients aligned with tuned_field.parameters()

    Raises:
        DimensionError: If adjoints and trajectories are misaligned
        ScheduleError: If sigma vanishes on a grid point
    """
    if adjoints.adjoints.shape != batch.states.shape:
        raise DimensionError("adjoints are not aligned with the trajectories")
    t_min = float(batch.times[0])
    tape = Tape()
    objective: Optional[Tensor] = None
    for i in range(batch.steps):
        t = float(batch.times[i])
        noise_level = clamped_sigma(schedule, t, t_min)
        if noise_level <= 0.0:
            raise ScheduleError(f"sigma vanished at t={t}")
        x = batch.states[i]
        tuned, _ = tuned_field.forward(x, t, tape=tape)
        difference = diffcore.sub(tuned, base_field.evaluate(x, t), tape=tape)
        residual = diffcore.add(
            diffcore.scale(difference, 2.0 / noise_level, tape=tape),
            Tensor(noise_level * adjoints.at_step(i)),
            tape=tape,
        )
        block = diffcore.sum_squares(residual, tape=tape)
        objective = block if objective is None else diffcore.add(objective, block, tape=tape)

    grads = diffcore.backward(tape, objective, 1.0)
    gradients = [grads[tape.node_of(p)].numpy() for p in tuned_field.parameters()]
    return objective.item(), gradients
