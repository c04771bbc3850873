"""
Example showing how to drive the flow expander as a library.

Every collaborator is constructed explicitly and passed in, so the same objects
can be swapped for stubs in tests or reused across runs.

Usage:
    from src.examples.library_usage_example import FlowExpansionExample

    demo = FlowExpansionExample(seed=3, output_dir="runs/example")
    demo.run_full_demo()
"""

import logging
import os
import sys

# Add the project root to the Python path for proper imports
current_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(os.path.dirname(current_dir))
sys.path.insert(0, project_root)

import numpy as np

from src.config.settings import settings
from src.core.services.datasets import default_verifier_spec, gen_global_setting
from src.core.services.expander import FlowExpanderService, IterateEvaluatorService
from src.core.services.flowmodel import FlowMatchingTrainerService
from src.core.services.metrics import MetricSuiteService, knn_entropy, validity, vendi
from src.core.services.oracle import grid_measure, run_md
from src.core.services.schedules import LinearSchedule
from src.core.services.verifiers import VerifierFactoryService
from src.models.config import AdjointConfig, DatasetSpec, ExpanderConfig, MetricConfig, TrainConfig
from src.models.measures import SupportMask

logging.basicConfig(level=logging.INFO, format=settings.LOG_FORMAT)
logger = logging.getLogger(__name__)


class FlowExpansionExample:
    """Small end-to-end tour: oracle, pretraining, one short global expansion."""

    def __init__(self, seed: int = 0, output_dir: str = None):
        """
        Args:
            seed: Run seed shared by every stage
            output_dir: Where checkpoints and CSVs go; nothing is written when None
        """
        self.seed = seed
        self.output_dir = output_dir
        self.schedule = LinearSchedule()
        self.dataset = DatasetSpec(kind="ellipse_partial")
        self.verifiers = VerifierFactoryService()
        self.strong = self.verifiers.build(default_verifier_spec(self.dataset, strong=True))

    def demo_oracle(self):
        """Entropy mirror descent on a grid restricted to the upper half-plane."""
        logger.info("Running discrete mirror descent...")
        q0 = grid_measure((-2.0, -2.0), (2.0, 2.0), 10, lambda xy: np.exp(-np.sum(xy**2, axis=1)))
        mask = SupportMask(q0.centers[:, 1] >= 0.0)
        result = run_md(q0, "entropy", lambda k: 0.3, mask, 20)
        for row in result.rows()[::5]:
            logger.info("k=%d gap=%.3e bound=%.3e", row["k"], row["gap"], row["bound"])
        return result

    def demo_pretrain(self, epochs: int = 200):
        logger.info("Pretraining on the partially covered ellipse...")
        data = gen_global_setting(self.dataset, 2000, self.seed)
        logger.info(
            "Data: entropy %.3f, validity %.3f, vendi %.2f",
            knn_entropy(data),
            validity(data, self.strong),
            vendi(data[:300]),
        )
        config = TrainConfig(epochs=epochs, data_count=data.shape[0])
        return FlowMatchingTrainerService(self.schedule).pretrain(data, config, self.seed).field

    def demo_expand(self, pre_field, iterations: int = 2):
        logger.info("Running %d global expansion iterations...", iterations)
        config = ExpanderConfig(
            mode="global",
            iterations=iterations,
            adjoint=AdjointConfig(outer_iters=5, batch_size=64, steps=20),
        )
        metrics = MetricConfig(samples=500, vendi_samples=200)
        expander = FlowExpanderService(
            config,
            smooth_verifier=self.verifiers.build_smooth(default_verifier_spec(self.dataset)),
            schedule=self.schedule,
            evaluator=IterateEvaluatorService(metrics, MetricSuiteService(metrics, self.strong)),
        )
        result = expander.run(pre_field, self.output_dir, self.seed)
        for record in result.records:
            logger.info("%s", record.to_row())
        return result

    def run_full_demo(self):
        logger.info("Starting flow expander demo")
        self.demo_oracle()
        pre_field = self.demo_pretrain()
        self.demo_expand(pre_field)
        logger.info("Demo completed")


if __name__ == "__main__":
    FlowExpansionExample(seed=0).run_full_demo()
