"""Application defaults for the flow expander."""

import os
from typing import List, Tuple


class Settings:
    """Defaults used when a run configuration leaves a value out."""

    APP_VERSION: str = "2.0.0"
    LOG_FORMAT: str = "%(asctime)s - %(levelname)s - %(message)s"

    # Worker threads
    THREADS_ENV_VAR: str = "FEXP_THREADS"
    DEFAULT_THREADS: int = 1

    # Checkpoint format
    CHECKPOINT_MAGIC: bytes = b"FEXP1\n"

    # Network and pretraining
    HIDDEN_WIDTHS: List[int] = [128, 128, 128]
    ACTIVATION: str = "silu"
    PRETRAIN_EPOCHS: int = 200
    PRETRAIN_BATCH_SIZE: int = 256
    PRETRAIN_LEARNING_RATE: float = 1e-3
    PRETRAIN_DATA_COUNT: int = 4096
    PRETRAIN_LOG_EVERY: int = 25
    ADAM_BETA1: float = 0.9
    ADAM_BETA2: float = 0.999
    ADAM_EPSILON: float = 1e-8

    # Samplers
    SDE_STEPS: int = 40
    ODE_EVAL_STEPS: int = 200
    EPSILON_CLIP_TOY: float = 0.02

    # Adjoint matching
    AM_OUTER_ITERS: int = 4
    AM_BATCH_SIZE: int = 4
    AM_STEPS_PER_ROUND: int = 1
    AM_LEARNING_RATE: float = 5.5e-4
    GRAD_CLIP_NORM: float = 10.0

    # Verifier smoothing
    SMOOTH_TEMPERATURE: float = 10.0
    CLOSED_SET_TOLERANCE: float = 1e-12

    # Expansion defaults (global toy)
    GLOBAL_ITERATIONS: int = 10
    GLOBAL_GAMMA_BASE: float = 1.5
    GLOBAL_ETA: float = 2.0
    GLOBAL_LAMBDA: float = 1.2
    GLOBAL_LAMBDA_BAND: float = 0.05

    # Datasets
    ELLIPSE_SEMI_AXES: Tuple[float, float] = (2.0, 1.2)
    ELLIPSE_ROTATION: float = 0.4
    ELLIPSE_CENTER: Tuple[float, float] = (0.0, 0.0)
    ELLIPSE_MODE_FRACTIONS: List[Tuple[float, float]] = [
        (-0.55, 0.35),
        (-0.2, 0.55),
        (-0.75, -0.05),
    ]
    ELLIPSE_MODE_WEIGHTS: List[float] = [0.4, 0.35, 0.25]
    ELLIPSE_MODE_SPREAD: float = 0.25
    TRIMODAL_CENTERS: List[Tuple[float, float]] = [(0.0, 0.0), (-3.0, 0.0), (3.0, 0.0)]
    TRIMODAL_WEIGHTS: List[float] = [0.9, 0.05, 0.05]
    TRIMODAL_SPREAD: float = 0.35
    TRIMODAL_INVALID_MODE: int = 1
    TRIMODAL_WEAK_BOX: Tuple[Tuple[float, float], Tuple[float, float]] = (
        (-1.6, -3.0),
        (4.6, 3.0),
    )
    TRIMODAL_VALID_BOX: Tuple[Tuple[float, float], Tuple[float, float]] = (
        (-1.5, -2.5),
        (4.5, 2.5),
    )
    MIN_ACCEPTANCE_RATE: float = 0.01

    # Metrics
    METRIC_SAMPLES: int = 5000
    KNN_NEIGHBORS: int = 5
    DUPLICATE_JITTER: float = 1e-9
    VENDI_SAMPLES: int = 1000
    JACOBI_MAX_SIZE: int = 200
    JACOBI_MAX_SWEEPS: int = 100
    JACOBI_TOLERANCE: float = 1e-14
    SYMMETRY_TOLERANCE: float = 1e-10

    # Discrete oracle
    ORACLE_PROP_TRIALS: int = 1000
    ORACLE_RATE_INSTANCES: int = 100
    ORACLE_ITERATIONS: int = 50
    ORACLE_MAX_CELLS: int = 200
    ORACLE_FIXED_POINT_ITERATIONS: int = 200
    ORACLE_ALPHAS: List[float] = [0.5, 1.0, 9.0]
    ORACLE_EQUALITY_TOLERANCE: float = 1e-12
    ORACLE_FIXED_POINT_TOLERANCE: float = 1e-8
    LOG_SPACE_THRESHOLD: float = 1e-300

    # Plots
    CONFIDENCE_LEVEL: float = 0.95

    def thread_count(self) -> int:
        """
        Worker thread cap from the environment.

        Returns:
            Positive thread count, DEFAULT_THREADS when the variable is unset or invalid
        """
        raw = os.environ.get(self.THREADS_ENV_VAR)
        if not raw:
            return self.DEFAULT_THREADS
        try:
            return max(1, int(raw))
        except ValueError:
            return self.DEFAULT_THREADS


# Global settings instance
settings = Settings()
