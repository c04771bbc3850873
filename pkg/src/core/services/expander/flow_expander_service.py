"""Service running the verifier-constrained expansion loop."""

import logging
import time
from pathlib import Path
from typing import List, Optional, Union

from src.core.errors import DomainError, ExpansionError, FlowExpanderError
from src.core.interfaces.interpolant_schedule import InterpolantSchedule
from src.core.services.adjoint.adjoint_matching_service import AdjointMatchingService
from src.core.services.datasets.rng_functions import derive_seed
from src.core.services.flowmodel.velocity_field import VelocityField
from src.core.services.schedules.coefficient_schedule_builder_service import (
    CoefficientScheduleBuilderService,
    CoefficientSchedules,
)
from src.core.services.schedules.interpolant_schedules import LinearSchedule
from src.core.services.verifiers.smooth_verifier import SmoothVerifier
from src.database.repositories.files.checkpoint_saver_service import CheckpointSaverService
from src.database.repositories.files.metrics_csv_saver_service import MetricsCsvSaverService
from src.database.repositories.files.samples_csv_saver_service import SamplesCsvSaverService
from src.models.config import ExpanderConfig
from src.models.flow import ExpansionResult, ScoreConfig
from src.models.records import IterateRecord, MetricSnapshot, RewardSpec

from .iterate_evaluator_service import IterateEvaluatorService
from .running_cost_functions import running_cost_grad

EXPANDING_MODES = ("global", "local", "nse")
TERMINAL_MODES = ("terminal_only", "fdc")
PROJECTING_MODES = ("global", "local", "constr")


class FlowExpanderService:
    """Service responsible only for the outer expand-then-project iterations."""

    def __init__(
        self,
        config: ExpanderConfig,
        smooth_verifier: Optional[SmoothVerifier] = None,
        schedule: Optional[InterpolantSchedule] = None,
        adjoint_solver: Optional[AdjointMatchingService] = None,
        evaluator: Optional[IterateEvaluatorService] = None,
        coefficient_builder: Optional[CoefficientScheduleBuilderService] = None,
        checkpoint_saver: Optional[CheckpointSaverService] = None,
        metrics_saver: Optional[MetricsCsvSaverService] = None,
        samples_saver: Optional[SamplesCsvSaverService] = None,
    ):
        """
        Initialize the expander.

        Args:
            config: Mode, iteration count, schedules and solver settings
            smooth_verifier: Differentiable verifier for projection steps
            schedule: Interpolant schedule of the pretrained model
            adjoint_solver: Fine-tuning solver
            evaluator: Metric snapshots per iterate; None skips metrics
            coefficient_builder: Builder for lambda, alpha, gamma and eta
            checkpoint_saver: Iterate checkpoint writer
            metrics_saver: metrics.csv writer
            samples_saver: samples.csv writer
        """
        if config.mode in PROJECTING_MODES and smooth_verifier is None and config.resolved_eta() > 0.0:
            raise DomainError(f"mode {config.mode} needs a smooth verifier for projection")
        self.config = config
        self.smooth_verifier = smooth_verifier
        self.schedule = schedule or LinearSchedule()
        self.adjoint_solver = adjoint_solver or AdjointMatchingService(self.schedule)
        self.evaluator = evaluator
        builder = coefficient_builder or CoefficientScheduleBuilderService(self.schedule)
        self.coefficients: CoefficientSchedules = builder.build(config)
        self.score_config = ScoreConfig(config.epsilon_clip)
        self.checkpoint_saver = checkpoint_saver or CheckpointSaverService()
        self.metrics_saver = metrics_saver or MetricsCsvSaverService()
        self.samples_saver = samples_saver or SamplesCsvSaverService()

    @property
    def alpha(self) -> float:
        return self.coefficients.alpha(1.0)

    def _gradient_kind(self) -> str:
        if self.config.mode in ("local", "fdc", "nse") and self.alpha != 0.0:
            return "local"
        return "global"

    def expand_step(
        self, field_in: VelocityField, pre_field: VelocityField, k: int, seed: int
    ) -> VelocityField:
        """
        Fine-tune toward the running cost gamma_k lambda_t grad dG_t(p_t^{k-1}).

        Scores are frozen at field_in for the whole step. gamma_k = 0 returns field_in.
        """
        gamma = self.coefficients.gamma(k)
        if gamma == 0.0:
            logging.info("Iteration %d: gamma is 0, skipping expansion", k)
            return field_in
        kind, alpha, schedule, clip = self._gradient_kind(), self.alpha, self.schedule, self.score_config

        def running_grad(x, t):
            return running_cost_grad(kind, field_in, pre_field, schedule, alpha, x, t, clip)

        reward = RewardSpec(
            running_grad=running_grad,
            running_weight=lambda t: gamma * self.coefficients.lambda_(t),
        )
        logging.info("Iteration %d: expanding (%s gradient, gamma=%.4f)", k, kind, gamma)
        return self.adjoint_solver.finetune(field_in, reward, self.config.adjoint, seed).field

    def project_step(self, field_in: VelocityField, eta: float, seed: int) -> VelocityField:
        """Fine-tune toward eta log v~ at the terminal time; eta = 0 returns field_in."""
        if eta == 0.0:
            return field_in
        if self.smooth_verifier is None:
            raise DomainError("projection needs a smooth verifier")
        reward = RewardSpec(terminal_grad=self.smooth_verifier.grad_log, terminal_weight=eta)
        logging.info("Projecting onto the verifier set (eta=%.4f)", eta)
        return self.adjoint_solver.finetune(field_in, reward, self.config.adjoint, seed).field

    def terminal_step(
        self, field_in: VelocityField, pre_field: VelocityField, k: int, seed: int
    ) -> VelocityField:
        """Terminal-only baseline: reward gamma_k times the score gradient at 1 - epsilon."""
        gamma = self.coefficients.gamma(k)
        if gamma == 0.0:
            return field_in
        kind, alpha, schedule, clip = self._gradient_kind(), self.alpha, self.schedule, self.score_config

        def terminal_grad(x):
            return running_cost_grad(kind, field_in, pre_field, schedule, alpha, x, 1.0, clip)

        reward = RewardSpec(terminal_grad=terminal_grad, terminal_weight=gamma)
        logging.info("Iteration %d: terminal %s reward (gamma=%.4f)", k, kind, gamma)
        return self.adjoint_solver.finetune(field_in, reward, self.config.adjoint, seed).field

    def run(
        self,
        pre_field: VelocityField,
        output_dir: Optional[Union[str, Path]] = None,
        seed: int = 0,
    ) -> ExpansionResult:
        """
        Run K outer iterations of the configured mode.

        global/local expand then project, nse only expands, constr only projects,
        terminal_only and fdc fine-tune on a terminal score reward. Records are
        written to metrics.csv in output_dir even when the loop fails.

        Args:
            pre_field: Pretrained field, iterate 0
            output_dir: Destination of checkpoints, metrics.csv and samples.csv
            seed: Run seed; config.seed wins when set

        Returns:
            ExpansionResult with the final field and records

        Raises:
            ExpansionError: Wrapping the first failure, with the completed records
        """
        seed = self.config.seed if self.config.seed is not None else seed
        output_dir = Path(output_dir) if output_dir is not None else None
        records: List[IterateRecord] = []
        logging.info(
            "Flow expansion: mode=%s, K=%d, alpha=%.4f, lambda*=%.4f",
            self.config.mode,
            self.config.iterations,
            self.alpha,
            self.coefficients.lambda_star(),
        )

        field = pre_field
        started = time.perf_counter()
        samples = self._record(records, 0, "pretrained", field, output_dir, seed, started)
        try:
            for k in range(1, self.config.iterations + 1):
                started = time.perf_counter()
                eta = self.coefficients.eta(k)
                if self.config.mode in EXPANDING_MODES:
                    field = self.expand_step(field, pre_field, k, derive_seed(seed, "expand", k))
                    projects = self.config.mode in PROJECTING_MODES and eta != 0.0
                    if projects and self.config.record_phases:
                        self._record(records, k, "expand", field, None, seed, started)
                if self.config.mode in TERMINAL_MODES:
                    field = self.terminal_step(field, pre_field, k, derive_seed(seed, "terminal", k))
                if self.config.mode in PROJECTING_MODES:
                    field = self.project_step(field, eta, derive_seed(seed, "project", k))
                samples = self._record(records, k, "iterate", field, output_dir, seed, started)
        except FlowExpanderError as e:
            logging.error("Expansion failed after %d records: %s", len(records), e)
            self._save_records(records, output_dir)
            raise ExpansionError(f"expansion failed: {e}", records, cause=e) from e

        self._save_records(records, output_dir)
        if output_dir is not None and samples is not None:
            self.samples_saver.save(samples, output_dir / "samples.csv")
        return ExpansionResult(field=field, records=records, samples=samples)

    def _record(self, records, k, phase, field, output_dir, seed, started):
        checkpoint = None
        if output_dir is not None and phase != "expand":
            checkpoint = str(
                self.checkpoint_saver.save(field, output_dir / "checkpoints" / f"iterate_{k:03d}.fexp")
            )
        snapshot, samples = MetricSnapshot(), None
        if self.evaluator is not None:
            snapshot, samples = self.evaluator.evaluate(field, seed)
        records.append(IterateRecord(k, phase, checkpoint, snapshot, time.perf_counter() - started))
        logging.info(
            "k=%d %s: entropy=%s validity=%s vendi=%s",
            k,
            phase,
            snapshot.entropy,
            snapshot.validity,
            snapshot.vendi,
        )
        return samples

    def _save_records(self, records, output_dir) -> None:
        if output_dir is not None:
            self.metrics_saver.save_records(records, output_dir / "metrics.csv")
