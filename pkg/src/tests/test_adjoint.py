import numpy as np
import pytest

from src.core.errors import DimensionError
from src.core.services.adjoint import (
    AdjointMatchingService,
    am_objective,
    lean_adjoint_backward,
    sde_drift_vjp,
)
from src.core.services.sampler import SdeSamplerService
from src.models.flow import TrajectoryBatch
from src.models.records import AdjointState, RewardSpec
from src.tests.helpers import central_difference, relative_error

STEPS = 8


@pytest.fixture
def flat_batch():
    """Trajectories sitting at the origin; only the time grid matters."""
    times = np.linspace(0.05, 1.0, STEPS + 1)
    return TrajectoryBatch(times, np.zeros((STEPS + 1, 3, 2)), np.zeros((STEPS, 3, 2)))


@pytest.fixture
def sde_batch(small_field, linear_schedule):
    return SdeSamplerService().sample(small_field, 4, 5, linear_schedule, seed=3)


def constant_grad(vector):
    vector = np.asarray(vector, dtype=np.float64)
    return lambda x, *rest: np.broadcast_to(vector, x.shape)


def test_zero_reward_gives_zero_adjoints(flat_batch, small_field, linear_schedule):
    state = lean_adjoint_backward(flat_batch, small_field, linear_schedule, RewardSpec.zero())
    assert state.adjoints.shape == flat_batch.states.shape
    assert np.all(state.adjoints == 0.0)


def test_terminal_condition_is_negative_weighted_gradient(flat_batch, small_field, linear_schedule):
    reward = RewardSpec(terminal_grad=constant_grad([1.0, -2.0]), terminal_weight=0.5)
    zero_drift = lambda x, t, a: np.zeros_like(a)
    state = lean_adjoint_backward(flat_batch, small_field, linear_schedule, reward, drift_vjp=zero_drift)
    np.testing.assert_allclose(state.adjoints[-1], np.tile([-0.5, 1.0], (3, 1)))
    np.testing.assert_allclose(state.adjoints[0], state.adjoints[-1])


def test_linear_drift_recursion(flat_batch, small_field, linear_schedule):
    drift = np.array([[0.3, -0.2], [0.1, 0.4]])
    reward = RewardSpec(terminal_grad=constant_grad([1.0, 0.5]), terminal_weight=1.0)
    state = lean_adjoint_backward(
        flat_batch, small_field, linear_schedule, reward, drift_vjp=lambda x, t, a: a @ drift
    )
    h = flat_batch.step_size
    expected = -np.array([1.0, 0.5])
    for i in range(STEPS, -1, -1):
        np.testing.assert_allclose(state.adjoints[i, 0], expected, atol=1e-12)
        expected = expected @ (np.eye(2) + h * drift)


def test_running_reward_telescopes(flat_batch, small_field, linear_schedule):
    grad = np.array([0.7, -1.1])
    reward = RewardSpec(running_grad=constant_grad(grad), running_weight=lambda t: 1.0)
    zero_drift = lambda x, t, a: np.zeros_like(a)
    state = lean_adjoint_backward(flat_batch, small_field, linear_schedule, reward, drift_vjp=zero_drift)
    span = flat_batch.times[-1] - flat_batch.times[0]
    np.testing.assert_allclose(state.adjoints[0, 1], -span * grad, atol=1e-12)
    np.testing.assert_allclose(state.adjoints[-1], 0.0)


def test_drift_vjp_matches_finite_differences(small_field, linear_schedule, rng):
    x = rng.standard_normal((1, 2))
    cotangent = rng.standard_normal((1, 2))
    t = 0.4
    ratio = linear_schedule.omega_dot(t) / linear_schedule.omega(t)

    def drift_dot(point):
        drift = 2.0 * small_field.evaluate(point, t) - ratio * point
        return float(np.sum(drift * cotangent))

    expected = central_difference(drift_dot, x)
    actual = sde_drift_vjp(small_field, linear_schedule)(x, t, cotangent)
    assert relative_error(actual, expected) < 1e-6


def test_dimension_mismatch(small_field, linear_schedule):
    times = np.linspace(0.1, 1.0, 3)
    batch = TrajectoryBatch(times, np.zeros((3, 2, 3)), np.zeros((2, 2, 3)))
    with pytest.raises(DimensionError):
        lean_adjoint_backward(batch, small_field, linear_schedule, RewardSpec.zero())


def test_objective_vanishes_for_identical_fields(sde_batch, small_field, linear_schedule):
    zeros = AdjointState(np.zeros_like(sde_batch.states))
    loss, gradients = am_objective(sde_batch, zeros, small_field.copy(), small_field, linear_schedule)
    assert loss == 0.0
    assert all(np.all(g == 0.0) for g in gradients)


def test_objective_is_positive_with_adjoints(sde_batch, small_field, linear_schedule, rng):
    adjoints = AdjointState(rng.standard_normal(sde_batch.states.shape))
    loss, _ = am_objective(sde_batch, adjoints, small_field.copy(), small_field, linear_schedule)
    assert loss > 0.0


def test_objective_gradient_matches_finite_differences(sde_batch, small_field, linear_schedule, rng):
    adjoints = AdjointState(0.3 * rng.standard_normal(sde_batch.states.shape))
    params = [p.data for p in small_field.parameters()]

    def loss_of_bias(bias):
        perturbed = list(params)
        perturbed[1] = bias
        value, _ = am_objective(
            sde_batch, adjoints, small_field.with_parameters(perturbed), small_field, linear_schedule
        )
        return value

    _, gradients = am_objective(sde_batch, adjoints, small_field.copy(), small_field, linear_schedule)
    expected = central_difference(loss_of_bias, params[1])
    assert relative_error(gradients[1], expected) < 1e-5


def test_objective_rejects_misaligned_adjoints(sde_batch, small_field, linear_schedule):
    adjoints = AdjointState(np.zeros((2, 4, 2)))
    with pytest.raises(DimensionError):
        am_objective(sde_batch, adjoints, small_field, small_field, linear_schedule)


def test_zero_reward_finetune_is_a_fixed_point(small_field, linear_schedule, fast_adjoint):
    report = AdjointMatchingService(linear_schedule).finetune(
        small_field, RewardSpec.zero(), fast_adjoint, seed=1
    )
    assert report.field.max_abs_difference(small_field) == 0.0
    assert all(loss == 0.0 for losses in report.round_losses for loss in losses)
    assert len(report.round_losses) == fast_adjoint.outer_iters


def test_finetune_moves_toward_terminal_reward(small_field, linear_schedule, fast_adjoint):
    reward = RewardSpec(terminal_grad=constant_grad([1.0, 0.0]), terminal_weight=1.0)
    report = AdjointMatchingService(linear_schedule).finetune(small_field, reward, fast_adjoint, seed=1)
    assert report.field.max_abs_difference(small_field) > 0.0
    assert small_field.max_abs_difference(small_field.copy()) == 0.0
