"""Service wiring configuration to the pretrain, expand, oracle, eval and plot pipelines."""

import logging
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np

from src.core.errors import UsageError
from src.core.interfaces.verifier import Verifier
from src.core.services.datasets.global_setting_generator_service import gen_global_setting
from src.core.services.datasets.local_setting_generator_service import gen_local_setting
from src.core.services.datasets.toy_geometry import default_verifier_spec
from src.core.services.expander.flow_expander_service import FlowExpanderService
from src.core.services.expander.iterate_evaluator_service import IterateEvaluatorService
from src.core.services.flowmodel.flow_matching_trainer_service import FlowMatchingTrainerService
from src.core.services.flowmodel.velocity_field import VelocityField
from src.core.services.metrics.metric_suite_service import MetricSuiteService
from src.core.services.metrics.validity_functions import filter_samples
from src.core.services.oracle.oracle_sweep_service import OracleSweepService
from src.core.services.plotting.svg_plot_service import SvgPlotService
from src.core.services.schedules.interpolant_schedules import build_schedule
from src.core.services.verifiers.verifier_factory_service import VerifierFactoryService
from src.database.repositories.files.checkpoint_loader_service import CheckpointLoaderService
from src.database.repositories.files.checkpoint_saver_service import CheckpointSaverService
from src.database.repositories.files.metrics_csv_saver_service import MetricsCsvSaverService
from src.database.repositories.files.samples_csv_loader_service import SamplesCsvLoaderService
from src.database.repositories.files.samples_csv_saver_service import SamplesCsvSaverService
from src.models.config import MetricConfig, RunConfig
from src.models.flow import ExpansionResult
from src.models.records import OracleReport

PRETRAINED_CHECKPOINT = "pretrained.fexp"


class ExperimentRunnerService:
    """Service responsible only for running one CLI subcommand from a RunConfig."""

    def __init__(
        self,
        verifier_factory: Optional[VerifierFactoryService] = None,
        checkpoint_saver: Optional[CheckpointSaverService] = None,
        checkpoint_loader: Optional[CheckpointLoaderService] = None,
        samples_saver: Optional[SamplesCsvSaverService] = None,
        samples_loader: Optional[SamplesCsvLoaderService] = None,
        metrics_saver: Optional[MetricsCsvSaverService] = None,
        plot_service: Optional[SvgPlotService] = None,
    ):
        self.verifier_factory = verifier_factory or VerifierFactoryService()
        self.checkpoint_saver = checkpoint_saver or CheckpointSaverService()
        self.checkpoint_loader = checkpoint_loader or CheckpointLoaderService()
        self.samples_saver = samples_saver or SamplesCsvSaverService()
        self.samples_loader = samples_loader or SamplesCsvLoaderService()
        self.metrics_saver = metrics_saver or MetricsCsvSaverService(self.samples_saver)
        self.plot_service = plot_service or SvgPlotService()

    @staticmethod
    def output_dir(config: RunConfig) -> Path:
        path = Path(config.output_dir)
        path.mkdir(parents=True, exist_ok=True)
        return path

    def generate_dataset(self, config: RunConfig) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        """Training points (and mode labels for the trimodal set)."""
        n = config.train.data_count
        if config.dataset.kind == "ellipse_partial":
            return gen_global_setting(config.dataset, n, config.seed), None
        return gen_local_setting(config.dataset, n, config.seed)

    def weak_verifier(self, config: RunConfig) -> Verifier:
        spec = config.verifier or default_verifier_spec(
            config.dataset, temperature=config.expander.temperature
        )
        return self.verifier_factory.build(spec)

    def validity_verifier(self, config: RunConfig) -> Verifier:
        spec = config.validity_verifier or default_verifier_spec(config.dataset, strong=True)
        return self.verifier_factory.build(spec)

    def pretrain(self, config: RunConfig) -> VelocityField:
        """
        Generate the dataset, fit a field and write data.csv, train_loss.csv and the checkpoint.

        Returns:
            Pretrained field
        """
        out = self.output_dir(config)
        points, labels = self.generate_dataset(config)
        self.samples_saver.save(points, out / "data.csv", labels)
        trainer = FlowMatchingTrainerService(build_schedule(config.schedule))
        report = trainer.pretrain(points, config.train, config.seed)
        self.metrics_saver.save_losses(report.epoch_losses, out / "train_loss.csv")
        self.checkpoint_saver.save(report.field, out / PRETRAINED_CHECKPOINT)
        return report.field

    def pretrained_field(self, config: RunConfig) -> VelocityField:
        if config.pretrained_checkpoint is not None:
            return self.checkpoint_loader.load(config.pretrained_checkpoint)
        logging.info("No pretrained checkpoint configured, pretraining first")
        return self.pretrain(config)

    def expand(self, config: RunConfig) -> ExpansionResult:
        """Run the configured expansion mode and write its outputs."""
        pre_field = self.pretrained_field(config)
        schedule = build_schedule(config.schedule)
        smooth = None
        if config.expander.mode in ("global", "local", "constr") and config.expander.resolved_eta() > 0.0:
            spec = config.verifier or default_verifier_spec(
                config.dataset, temperature=config.expander.temperature
            )
            smooth = self.verifier_factory.build_smooth(spec)
        evaluator = IterateEvaluatorService(
            config.metrics, MetricSuiteService(config.metrics, self.validity_verifier(config))
        )
        expander = FlowExpanderService(
            config.expander,
            smooth_verifier=smooth,
            schedule=schedule,
            evaluator=evaluator,
            checkpoint_saver=self.checkpoint_saver,
            metrics_saver=self.metrics_saver,
            samples_saver=self.samples_saver,
        )
        return expander.run(pre_field, self.output_dir(config), config.seed)

    def oracle(self, config: RunConfig) -> OracleReport:
        """
        Run the oracle sweeps, write oracle_curve.csv and oracle_summary.csv.

        Raises:
            AcceptanceCheckError: After writing outputs, if any check failed
        """
        out = self.output_dir(config)
        service = OracleSweepService(config.oracle, config.seed)
        report = service.run()
        self.metrics_saver.save_rows(report.curve, ["k", "gap", "bound"], out / "oracle_curve.csv")
        self.metrics_saver.save_rows(
            [check.to_row() for check in report.checks],
            ["check", "passed", "worst", "detail"],
            out / "oracle_summary.csv",
        )
        service.verify(report)
        return report

    def evaluate(self, config: RunConfig, samples_path: Optional[str] = None) -> Dict:
        """
        Metrics of a samples CSV, written to eval.csv.

        Raises:
            UsageError: If no samples file is given or it holds no rows
        """
        path = samples_path or config.eval.samples
        if path is None:
            raise UsageError("eval needs a samples CSV (--samples or eval.samples)")
        points, _ = self.samples_loader.load(path)
        metric_config = MetricConfig(**{**config.metrics.model_dump(), "enabled": config.eval.metrics})
        snapshot = MetricSuiteService(metric_config, self.validity_verifier(config)).snapshot(
            points, config.seed
        )
        acceptance = None
        if config.verifier is not None:
            _, acceptance = filter_samples(points, self.weak_verifier(config))
        row = {
            "samples": int(points.shape[0]),
            "entropy": snapshot.entropy,
            "validity": snapshot.validity,
            "vendi": snapshot.vendi,
            "filter_acceptance": acceptance,
        }
        self.metrics_saver.save_rows([row], list(row), self.output_dir(config) / "eval.csv")
        logging.info("Evaluation of %s: %s", path, row)
        return row

    def plot(self, config: RunConfig):
        """
        Render the configured figure.

        Raises:
            UsageError: If the configuration has no plot section
        """
        spec = config.plot
        if spec is None:
            raise UsageError("plot needs a plot section")
        path = self.output_dir(config) / spec.output
        labels = [Path(p).stem for p in spec.inputs] if len(spec.inputs) > 1 else None
        if spec.kind == "curve":
            frames = [self.samples_loader.load_frame(p) for p in spec.inputs]
            return self.plot_service.curve(frames, path, spec.column, spec.phase, "k", spec.title)
        point_sets = [self.samples_loader.load(p)[0] for p in spec.inputs]
        if spec.kind == "scatter2d":
            outlines = self.validity_verifier(config).outline() if spec.overlay_verifier else None
            return self.plot_service.scatter(
                point_sets, path, outlines, labels, spec.x_label, spec.y_label, spec.title
            )
        return self.plot_service.histogram(
            [points[:, 0] for points in point_sets], path, spec.bins, labels, spec.x_label, spec.title
        )
