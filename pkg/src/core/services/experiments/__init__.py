"""End-to-end experiment pipelines."""

from .experiment_runner_service import PRETRAINED_CHECKPOINT, ExperimentRunnerService

__all__ = ["ExperimentRunnerService", "PRETRAINED_CHECKPOINT"]
