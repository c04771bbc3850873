"""Service running the randomized discrete oracle sweeps."""

import logging
import time
from typing import Optional, Tuple

import numpy as np

from src.config.settings import settings
from src.core.errors import AcceptanceCheckError
from src.core.services.datasets.rng_functions import derive_rng
from src.models.config import OracleConfig
from src.models.measures import DiscreteMeasure, SupportMask
from src.models.records import OracleCheck, OracleReport

from .discrete_functions import (
    expand_then_project_discrete,
    first_variation,
    md_step,
    optimum,
    total_variation,
)
from .mirror_descent_service import GAP_TOLERANCE, MirrorDescentService

FIXED_POINT_MAX_CELLS = 100
CURVE_CELLS = 50


def random_measure(rng: np.random.Generator, size: int) -> DiscreteMeasure:
    weights = rng.dirichlet(np.ones(size))
    return DiscreteMeasure(weights / np.sum(weights))


def random_mask(rng: np.random.Generator, size: int, keep: float = 0.5) -> SupportMask:
    cells = rng.random(size) < keep
    if not np.any(cells):
        cells[rng.integers(size)] = True
    return SupportMask(cells)


def fixed_point_step(alpha: float) -> float:
    """Largest step up to 0.5 inside the 1 / (1 + alpha) stability limit."""
    return min(0.5, 1.0 / (1.0 + alpha))


class OracleSweepService:
    """Service responsible only for the randomized exact-oracle checks."""

    def __init__(self, config: Optional[OracleConfig] = None, seed: int = 0):
        """
        Initialize the sweeps.

        Args:
            config: Trial counts, iteration counts and step sizes
            seed: Run seed; config.seed wins when set
        """
        self.config = config or OracleConfig()
        self.seed = self.config.seed if self.config.seed is not None else seed

    def _instance(self, rng: np.random.Generator, max_cells: int) -> Tuple[int, DiscreteMeasure, SupportMask]:
        size = int(rng.integers(2, max_cells + 1))
        return size, random_measure(rng, size), random_mask(rng, size)

    def decomposition_check(self) -> OracleCheck:
        """Constrained step against expand-then-project on random instances."""
        rng = derive_rng(self.seed, "oracle", "decomposition")
        worst = 0.0
        for _ in range(self.config.trials):
            size, q, mask = self._instance(rng, self.config.max_cells)
            grad = rng.normal(0.0, 3.0, size)
            gamma = float(rng.uniform(0.05, 2.0))
            direct = md_step(q, grad, gamma, mask)
            split = expand_then_project_discrete(q, grad, gamma, mask)
            worst = max(worst, total_variation(direct, split))
        passed = worst < settings.ORACLE_EQUALITY_TOLERANCE
        return OracleCheck("expand_then_project", passed, worst, f"{self.config.trials} trials")

    def rate_check(self, gamma: float) -> OracleCheck:
        """Entropy gaps against KL(q* || q0) / sum gamma; gamma = 1 must converge in one step."""
        rng = derive_rng(self.seed, "oracle", "rate", int(round(gamma * 1e6)))
        worst = -np.inf
        one_step = 0.0
        runner = MirrorDescentService("entropy")
        for _ in range(self.config.instances):
            _, q0, mask = self._instance(rng, self.config.max_cells)
            result = runner.run(q0, lambda k: gamma, mask, self.config.iterations)
            worst = max(worst, max(g - b for g, b in zip(result.gaps[1:], result.bounds[1:])))
            one_step = max(one_step, result.gaps[1])
        passed = worst <= GAP_TOLERANCE
        detail = f"gamma={gamma}, K={self.config.iterations}"
        if gamma == 1.0:
            passed = passed and one_step <= GAP_TOLERANCE
            detail += f", gap(1)={one_step:.3e}"
        return OracleCheck(f"rate_gamma_{gamma:g}", passed, float(worst), detail)

    def fixed_point_check(self, alpha: float) -> OracleCheck:
        """KL-regularized iterations against q* proportional to p^(alpha / (1 + alpha))."""
        rng = derive_rng(self.seed, "oracle", "fixed-point", int(round(alpha * 1e6)))
        gamma = fixed_point_step(alpha)
        cells = min(FIXED_POINT_MAX_CELLS, self.config.max_cells)
        worst = 0.0
        for _ in range(self.config.instances):
            size = int(rng.integers(2, cells + 1))
            p_pre, q0 = random_measure(rng, size), random_measure(rng, size)
            mask = SupportMask.full(size)
            q = q0
            for _ in range(self.config.fixed_point_iterations):
                q = md_step(
                    q, first_variation("entropy_minus_alpha_kl", q, mask, p_pre, alpha), gamma, mask
                )
            target = optimum("entropy_minus_alpha_kl", mask, p_pre, alpha)
            worst = max(worst, total_variation(q, target))
        passed = worst < settings.ORACLE_FIXED_POINT_TOLERANCE
        return OracleCheck(f"fixed_point_alpha_{alpha:g}", passed, worst, f"gamma={gamma:g}")

    def monotone_check(self) -> OracleCheck:
        """Entropy gaps never increase after the first masked step for constant steps in (0, 1]."""
        rng = derive_rng(self.seed, "oracle", "monotone")
        worst = -np.inf
        runner = MirrorDescentService("entropy")
        for _ in range(self.config.instances):
            _, q0, mask = self._instance(rng, self.config.max_cells)
            gamma = float(rng.uniform(0.05, 1.0))
            result = runner.run(q0, lambda k: gamma, mask, self.config.iterations)
            worst = max(worst, float(np.max(np.diff(result.gaps[1:]), initial=-np.inf)))
        return OracleCheck("monotone_gap", worst <= GAP_TOLERANCE, worst, "gamma in [0.05, 1]")

    def curve(self):
        """(k, gap, bound) rows, k = 0..K, for one instance at the smallest rate gamma."""
        rng = derive_rng(self.seed, "oracle", "curve")
        size = min(CURVE_CELLS, self.config.max_cells)
        q0, mask = random_measure(rng, size), random_mask(rng, size)
        gamma = min(self.config.rate_gammas)
        result = MirrorDescentService("entropy").run(q0, lambda k: gamma, mask, self.config.iterations)
        return result.rows()

    def run(self) -> OracleReport:
        """Run every sweep and collect a report."""
        started = time.perf_counter()
        checks = [self.decomposition_check()]
        checks.extend(self.rate_check(gamma) for gamma in self.config.rate_gammas)
        checks.extend(self.fixed_point_check(alpha) for alpha in self.config.alphas)
        checks.append(self.monotone_check())
        for check in checks:
            log = logging.info if check.passed else logging.error
            log(
                "Oracle check %s: %s (worst %.3e, %s)",
                check.name,
                "pass" if check.passed else "FAIL",
                check.worst,
                check.detail,
            )
        logging.info("Oracle sweeps finished in %.2fs", time.perf_counter() - started)
        return OracleReport(checks=checks, curve=self.curve())

    @staticmethod
    def verify(report: OracleReport) -> None:
        """
        Raises:
            AcceptanceCheckError: If any check failed
        """
        failures = report.failures()
        if failures:
            names = ", ".join(check.name for check in failures)
            raise AcceptanceCheckError(f"oracle checks failed: {names}")
