import numpy as np
import pandas as pd
import pytest

from src.core.errors import DomainError, ExpansionError, FineTuningError
from src.core.services.adjoint import AdjointMatchingService
from src.core.services.expander import FlowExpanderService, IterateEvaluatorService, running_cost_grad
from src.core.services.metrics import MetricSuiteService
from src.core.services.verifiers import VerifierFactoryService
from src.models.config import ExpanderConfig, MetricConfig, VerifierSpec
from src.models.flow import ScoreConfig

VERIFIER = VerifierSpec(kind="box", lo=(-1.0, -1.0), hi=(1.5, 1.5), temperature=0.1)


@pytest.fixture
def smooth_box():
    return VerifierFactoryService().build_smooth(VERIFIER)


@pytest.fixture
def evaluator():
    config = MetricConfig(samples=40, ode_steps=5, vendi_samples=20)
    verifier = VerifierFactoryService().build(VERIFIER)
    return IterateEvaluatorService(config, MetricSuiteService(config, verifier))


def expander_config(fast_adjoint, **overrides):
    values = {"mode": "global", "iterations": 2, "gamma_base": 0.3, "eta": 0.5, "adjoint": fast_adjoint}
    values.update(overrides)
    return ExpanderConfig(**values)


class FailingSolver(AdjointMatchingService):
    """Adjoint solver that breaks on a given call."""

    def __init__(self, schedule, fail_on: int):
        super().__init__(schedule)
        self.calls = 0
        self.fail_on = fail_on

    def finetune(self, base_field, reward, config, seed=0):
        self.calls += 1
        if self.calls == self.fail_on:
            raise FineTuningError("objective is not finite", 0)
        return super().finetune(base_field, reward, config, seed)


def test_record_layout(small_field, linear_schedule, fast_adjoint, smooth_box, evaluator, tmp_path):
    expander = FlowExpanderService(
        expander_config(fast_adjoint), smooth_box, linear_schedule, evaluator=evaluator
    )
    result = expander.run(small_field, tmp_path, seed=4)

    layout = [(record.k, record.phase) for record in result.records]
    assert layout == [(0, "pretrained"), (1, "expand"), (1, "iterate"), (2, "expand"), (2, "iterate")]
    assert result.records[1].checkpoint_path is None
    for k in range(3):
        assert (tmp_path / "checkpoints" / f"iterate_{k:03d}.fexp").is_file()

    frame = pd.read_csv(tmp_path / "metrics.csv")
    assert list(frame["phase"]) == [phase for _, phase in layout]
    assert {"entropy", "validity", "vendi"} <= set(frame.columns)
    assert (tmp_path / "samples.csv").is_file()
    assert result.samples.shape == (40, 2)


def test_phases_can_be_folded(small_field, linear_schedule, fast_adjoint, smooth_box):
    config = expander_config(fast_adjoint, record_phases=False)
    result = FlowExpanderService(config, smooth_box, linear_schedule).run(small_field, seed=4)
    assert [record.phase for record in result.records] == ["pretrained", "iterate", "iterate"]


def test_nse_matches_global_without_projection(small_field, linear_schedule, fast_adjoint, tmp_path):
    nse = FlowExpanderService(expander_config(fast_adjoint, mode="nse", eta=None), None, linear_schedule)
    plain = FlowExpanderService(expander_config(fast_adjoint, eta=0.0), None, linear_schedule)
    first = nse.run(small_field, tmp_path / "nse", seed=9)
    second = plain.run(small_field, tmp_path / "global", seed=9)

    assert first.field.max_abs_difference(second.field) == 0.0
    assert [r.phase for r in first.records] == [r.phase for r in second.records]
    final = "checkpoints/iterate_002.fexp"
    assert (tmp_path / "nse" / final).read_bytes() == (tmp_path / "global" / final).read_bytes()


def test_zero_gamma_is_a_no_op(small_field, linear_schedule, fast_adjoint):
    config = expander_config(fast_adjoint, mode="nse", eta=None, gamma_base=0.0)
    result = FlowExpanderService(config, None, linear_schedule).run(small_field, seed=2)
    assert result.field.max_abs_difference(small_field) == 0.0
    assert len(result.records) == 3


def test_expansion_moves_the_field(small_field, linear_schedule, fast_adjoint):
    config = expander_config(fast_adjoint, mode="nse", eta=None, iterations=1)
    result = FlowExpanderService(config, None, linear_schedule).run(small_field, seed=2)
    assert result.field.max_abs_difference(small_field) > 0.0


def test_projecting_mode_needs_smooth_verifier(linear_schedule, fast_adjoint):
    with pytest.raises(DomainError):
        FlowExpanderService(expander_config(fast_adjoint, mode="constr"), None, linear_schedule)


def test_constr_only_projects(small_field, linear_schedule, fast_adjoint, smooth_box):
    config = expander_config(fast_adjoint, mode="constr", iterations=1)
    result = FlowExpanderService(config, smooth_box, linear_schedule).run(small_field, seed=2)
    assert [record.phase for record in result.records] == ["pretrained", "iterate"]


def test_failure_keeps_completed_records(small_field, linear_schedule, fast_adjoint, smooth_box, tmp_path):
    config = expander_config(fast_adjoint, iterations=3)
    solver = FailingSolver(linear_schedule, fail_on=3)
    expander = FlowExpanderService(config, smooth_box, linear_schedule, adjoint_solver=solver)

    with pytest.raises(ExpansionError) as caught:
        expander.run(small_field, tmp_path, seed=1)

    assert [(r.k, r.phase) for r in caught.value.records] == [(0, "pretrained"), (1, "expand"), (1, "iterate")]
    assert isinstance(caught.value.cause, FineTuningError)
    frame = pd.read_csv(tmp_path / "metrics.csv")
    assert len(frame) == 3


def test_local_gradient_with_zero_alpha_is_global(small_field, gaussian_field, linear_schedule, rng):
    x = rng.standard_normal((16, 2))
    clip = ScoreConfig(0.05)
    for t in (0.1, 0.5, 0.99):
        local = running_cost_grad("local", small_field, gaussian_field, linear_schedule, 0.0, x, t, clip)
        plain = running_cost_grad("global", small_field, gaussian_field, linear_schedule, 0.0, x, t, clip)
        np.testing.assert_array_equal(local, plain)


def test_local_gradient_matches_global_at_the_pretrained_field(small_field, linear_schedule, rng):
    x = rng.standard_normal((8, 2))
    clip = ScoreConfig(0.05)
    same = running_cost_grad("local", small_field, small_field, linear_schedule, 2.0, x, 0.5, clip)
    plain = running_cost_grad("global", small_field, small_field, linear_schedule, 2.0, x, 0.5, clip)
    np.testing.assert_allclose(same, plain)


def test_unknown_gradient_kind(small_field, linear_schedule, rng):
    x = rng.standard_normal((2, 2))
    with pytest.raises(DomainError):
        running_cost_grad("nearest", small_field, small_field, linear_schedule, 0.0, x, 0.5, ScoreConfig(0.05))
