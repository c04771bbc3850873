import numpy as np
import pytest

from src.core.errors import DimensionError, DomainError
from src.core.services.flowmodel import (
    AdamOptimizerService,
    FlowMatchingTrainerService,
    GaussianTargetField,
    VelocityField,
    clip_by_global_norm,
    conditional_target,
    flow_matching_loss,
)
from src.models.config import TrainConfig
from src.tests.helpers import central_difference, relative_error


def test_linear_conditional_target(linear_schedule, rng):
    x0, x1 = rng.normal(size=(5, 2)), rng.normal(size=(5, 2))
    target = conditional_target(linear_schedule, x0, x1, rng.uniform(size=5))
    assert np.allclose(target, x1 - x0, atol=1e-15)


def test_field_shapes_and_zero_init():
    field = VelocityField.initialize(3, [4], "silu", rng=np.random.default_rng(0), zero_final=True)
    assert field.widths == [4, 4, 3]
    out = field.evaluate(np.ones((6, 3)), 0.4)
    assert out.shape == (6, 3)
    assert np.all(out == 0.0)


def test_field_rejects_bad_inputs(small_field):
    with pytest.raises(DimensionError):
        small_field.evaluate(np.ones((2, 3)), 0.5)
    with pytest.raises(DomainError):
        small_field.evaluate(np.array([[np.nan, 0.0]]), 0.5)
    with pytest.raises(DimensionError):
        small_field.evaluate(np.ones((2, 2)), np.array([0.1, 0.2, 0.3]))


def test_field_vjp_matches_finite_differences(small_field, rng):
    x = rng.normal(size=(3, 2))
    t = np.array([0.1, 0.5, 0.9])
    cotangent = rng.normal(size=(3, 2))
    numeric = central_difference(lambda value: float(np.sum(cotangent * small_field.evaluate(value, t))), x)
    assert relative_error(small_field.vjp(x, t, cotangent), numeric) < 1e-5


def test_copy_and_parameter_difference(small_field):
    clone = small_field.copy()
    assert clone.max_abs_difference(small_field) == 0.0
    params = [p.numpy() for p in small_field.parameters()]
    params[0][0, 0] += 0.25
    shifted = small_field.with_parameters(params)
    assert shifted.max_abs_difference(small_field) == pytest.approx(0.25)
    other = VelocityField.initialize(2, [3], "tanh")
    with pytest.raises(DimensionError):
        other.max_abs_difference(small_field)


def test_loss_is_invariant_to_joint_shuffles(small_field, linear_schedule, rng):
    x0, x1, t = rng.normal(size=(40, 2)), rng.normal(size=(40, 2)), rng.uniform(size=40)
    order = rng.permutation(40)
    first = flow_matching_loss(small_field, linear_schedule, x0, x1, t)
    second = flow_matching_loss(small_field, linear_schedule, x0[order], x1[order], t[order])
    assert first == pytest.approx(second, abs=1e-12)


def test_pretraining_reduces_loss_and_is_deterministic(rng):
    data = rng.normal(loc=[2.0, -1.0], scale=0.3, size=(256, 2))
    config = TrainConfig(epochs=30, batch_size=64, learning_rate=1e-2, hidden_widths=[16, 16])
    trainer = FlowMatchingTrainerService()
    report = trainer.pretrain(data, config, seed=5)
    assert len(report.epoch_losses) == 30
    assert report.epoch_losses[-1] < report.epoch_losses[0]
    again = trainer.pretrain(data, config, seed=5)
    assert again.field.max_abs_difference(report.field) == 0.0


def test_pretraining_rejects_bad_data():
    config = TrainConfig(epochs=1)
    trainer = FlowMatchingTrainerService()
    with pytest.raises(DomainError):
        trainer.pretrain(np.zeros((0, 2)), config)
    with pytest.raises(DomainError):
        trainer.pretrain(np.array([[0.0, np.inf]]), config)


def test_gaussian_field_point_mass_score(linear_schedule, rng):
    mean = np.array([1.0, -2.0])
    field = GaussianTargetField(linear_schedule, mean, std=0.0)
    x = rng.normal(size=(4, 2))
    t = 0.3
    expected = -(x - t * mean) / (1.0 - t) ** 2
    assert np.allclose(field.marginal_score(x, t), expected, rtol=1e-12)
    assert np.allclose(field.evaluate(x, t), (mean - x) / (1.0 - t), rtol=1e-12)


def test_gaussian_field_vjp_is_gain_times_cotangent(gaussian_field, rng):
    x, cotangent = rng.normal(size=(3, 2)), rng.normal(size=(3, 2))
    numeric = central_difference(
        lambda value: float(np.sum(cotangent * gaussian_field.evaluate(value, 0.4))), x
    )
    assert relative_error(gaussian_field.vjp(x, 0.4, cotangent), numeric) < 1e-7


def test_adam_first_step_moves_by_learning_rate():
    optimizer = AdamOptimizerService(0.01)
    params = [np.array([1.0, -1.0, 0.5])]
    updated = optimizer.step(params, [np.array([3.0, -0.2, 1e-3])])
    assert np.allclose(updated[0], params[0] - 0.01 * np.array([1.0, -1.0, 1.0]), atol=1e-6)


def test_adam_zero_gradient_is_a_fixed_point():
    optimizer = AdamOptimizerService(0.1)
    params = [np.array([[1.0, 2.0]])]
    assert np.array_equal(optimizer.step(params, [np.zeros((1, 2))])[0], params[0])


def test_clip_by_global_norm():
    clipped, norm = clip_by_global_norm([np.array([3.0]), np.array([4.0])], 1.0)
    assert norm == pytest.approx(5.0)
    assert np.sqrt(sum(float(np.sum(g * g)) for g in clipped)) == pytest.approx(1.0)
    unchanged, _ = clip_by_global_norm([np.array([0.3])], None)
    assert unchanged[0][0] == 0.3
