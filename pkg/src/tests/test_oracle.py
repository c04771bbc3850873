import numpy as np
import pytest

from src.core.errors import AcceptanceCheckError, DivergenceError, DomainError, InfeasibilityError
from src.core.services.oracle import (
    OracleSweepService,
    entropy,
    expand_then_project_discrete,
    first_variation,
    fixed_point_step,
    grid_measure,
    kl,
    md_step,
    optimum,
    random_mask,
    random_measure,
    run_md,
    total_variation,
)
from src.models.config import OracleConfig
from src.models.measures import DiscreteMeasure, SupportMask
from src.models.records import OracleCheck, OracleReport


@pytest.fixture
def small_oracle_config():
    return OracleConfig(trials=50, instances=10, iterations=30, max_cells=40, fixed_point_iterations=200)


def test_entropy_and_kl_basics():
    uniform = DiscreteMeasure.uniform(4)
    assert entropy(uniform) == pytest.approx(np.log(4.0))
    assert kl(uniform, uniform) == pytest.approx(0.0)
    point = DiscreteMeasure(np.array([1.0, 0.0, 0.0, 0.0]))
    assert entropy(point) == 0.0
    assert kl(point, uniform) == pytest.approx(np.log(4.0))


def test_kl_diverges_outside_support():
    q = DiscreteMeasure(np.array([0.5, 0.5]))
    p = DiscreteMeasure(np.array([1.0, 0.0]))
    with pytest.raises(DivergenceError):
        kl(q, p)


def test_step_equals_expand_then_project(rng):
    for _ in range(100):
        size = int(rng.integers(2, 60))
        q = random_measure(rng, size)
        mask = random_mask(rng, size)
        grad = rng.normal(0.0, 3.0, size)
        gamma = float(rng.uniform(0.05, 2.0))
        direct = md_step(q, grad, gamma, mask)
        split = expand_then_project_discrete(q, grad, gamma, mask)
        assert total_variation(direct, split) < 1e-12


def test_step_keeps_mass_on_mask(rng):
    q = random_measure(rng, 10)
    mask = SupportMask(np.arange(10) < 4)
    stepped = md_step(q, first_variation("entropy", q, mask), 0.4, mask)
    assert np.all(stepped.weights[4:] == 0.0)
    assert np.sum(stepped.weights) == pytest.approx(1.0)


def test_step_with_disjoint_mask_is_infeasible():
    q = DiscreteMeasure(np.array([1.0, 0.0, 0.0]))
    mask = SupportMask(np.array([False, True, True]))
    with pytest.raises(InfeasibilityError):
        md_step(q, np.zeros(3), 0.5, mask)
    with pytest.raises(InfeasibilityError):
        expand_then_project_discrete(q, np.zeros(3), 0.5, mask)


def test_step_rejects_nonpositive_gamma(rng):
    q = random_measure(rng, 5)
    with pytest.raises(DomainError):
        md_step(q, np.zeros(5), 0.0, SupportMask.full(5))


def test_first_variation_needs_positive_mass():
    q = DiscreteMeasure(np.array([1.0, 0.0]))
    with pytest.raises(DomainError):
        first_variation("entropy", q)
    assert first_variation("entropy", q, SupportMask(np.array([True, False])))[1] == 0.0


def test_unit_step_reaches_optimum_in_one_iteration(rng):
    q0 = random_measure(rng, 30)
    mask = random_mask(rng, 30)
    result = run_md(q0, "entropy", lambda k: 1.0, mask, 5)
    assert result.gaps[1] == pytest.approx(0.0, abs=1e-12)
    assert total_variation(result.iterates[1], DiscreteMeasure.uniform(30, mask)) < 1e-12


def test_gap_stays_under_rate_bound(rng):
    q0 = random_measure(rng, 40)
    mask = random_mask(rng, 40)
    result = run_md(q0, "entropy", lambda k: 0.3, mask, 50)
    assert result.bounds[0] == np.inf
    assert result.bound_holds()
    assert result.is_monotone()
    assert [row["k"] for row in result.rows()] == list(range(51))


def test_rate_bound_uses_step_sum(rng):
    q0 = random_measure(rng, 20)
    mask = SupportMask.full(20)
    result = run_md(q0, "entropy", lambda k: 0.2, mask, 10)
    distance = kl(result.optimum, q0)
    assert result.bounds[10] == pytest.approx(distance / 2.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 9.0])
def test_fixed_point_of_regularized_objective(rng, alpha):
    p_pre, q = random_measure(rng, 25), random_measure(rng, 25)
    mask = SupportMask.full(25)
    gamma = fixed_point_step(alpha)
    for _ in range(200):
        q = md_step(q, first_variation("entropy_minus_alpha_kl", q, mask, p_pre, alpha), gamma, mask)
    expected = p_pre.weights ** (alpha / (1.0 + alpha))
    np.testing.assert_allclose(q.weights, expected / expected.sum(), atol=1e-9)


def test_fixed_point_step():
    assert fixed_point_step(0.5) == 0.5
    assert fixed_point_step(9.0) == pytest.approx(0.1)


def test_optimum_of_entropy_is_uniform_on_mask():
    mask = SupportMask(np.array([True, False, True, True]))
    np.testing.assert_allclose(optimum("entropy", mask).weights, [1 / 3, 0.0, 1 / 3, 1 / 3])


def test_long_runs_stay_in_log_space():
    tiny = np.array([0.0, -800.0, -1600.0])
    q = DiscreteMeasure.from_log(tiny)
    assert q.log_weights is not None
    assert np.all(q.support())
    result = run_md(q, "entropy", lambda k: 0.5, SupportMask.full(3), 40)
    assert result.gaps[-1] < result.gaps[0]


def test_grid_measure():
    q = grid_measure((-1.0, -1.0), (1.0, 1.0), 4, lambda xy: np.ones(xy.shape[0]))
    assert q.size == 16
    np.testing.assert_allclose(q.weights, 1.0 / 16.0)
    np.testing.assert_allclose(q.centers[0], [-0.75, -0.75])
    with pytest.raises(DomainError):
        grid_measure((0.0, 0.0), (1.0, 1.0), 3, lambda xy: -np.ones(xy.shape[0]))


def test_sweep_passes(small_oracle_config):
    service = OracleSweepService(small_oracle_config, seed=3)
    report = service.run()
    assert report.passed, [check.to_row() for check in report.failures()]
    names = [check.name for check in report.checks]
    assert names[0] == "expand_then_project"
    assert "rate_gamma_1" in names and "fixed_point_alpha_9" in names
    assert report.curve[0]["k"] == 0
    assert len(report.curve) == small_oracle_config.iterations + 1
    service.verify(report)


def test_sweep_is_deterministic(small_oracle_config):
    first = OracleSweepService(small_oracle_config, seed=3).decomposition_check()
    second = OracleSweepService(small_oracle_config, seed=3).decomposition_check()
    assert first.worst == second.worst


def test_verify_raises_on_failure():
    report = OracleReport(checks=[OracleCheck("monotone_gap", False, 1.0)], curve=[])
    with pytest.raises(AcceptanceCheckError):
        OracleSweepService.verify(report)
