"""Pydantic models for run configuration."""

from pathlib import Path
from typing import Annotated, List, Literal, Optional, Tuple

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config.settings import settings


class StrictModel(BaseModel):
    """Base model rejecting unknown keys."""

    model_config = ConfigDict(extra="forbid")


def _require_existing(path: str) -> str:
    if not Path(path).exists():
        raise ValueError(f"file '{path}' does not exist")
    return path


ExistingPath = Annotated[str, AfterValidator(_require_existing)]


class ScheduleSpec(StrictModel):
    """Interpolant schedule selection."""

    kind: Literal["linear", "power"] = Field("linear", description="Schedule family")
    power: float = Field(1.0, ge=1.0, description="Exponent of the power schedule")


class DatasetSpec(StrictModel):
    """Synthetic dataset geometry."""

    kind: Literal["ellipse_partial", "trimodal"] = Field(
        "ellipse_partial", description="Toy regime"
    )
    n: int = Field(settings.PRETRAIN_DATA_COUNT, ge=1, description="Point count")
    center: Tuple[float, float] = Field(settings.ELLIPSE_CENTER)
    semi_axes: Tuple[float, float] = Field(settings.ELLIPSE_SEMI_AXES)
    rotation: float = Field(settings.ELLIPSE_ROTATION, description="Radians")
    mode_fractions: List[Tuple[float, float]] = Field(
        default_factory=lambda: list(settings.ELLIPSE_MODE_FRACTIONS),
        description="Ellipse-frame mixture means as fractions of the semi-axes",
    )
    mode_centers: List[Tuple[float, float]] = Field(
        default_factory=lambda: list(settings.TRIMODAL_CENTERS)
    )
    mode_weights: Optional[List[float]] = Field(
        None, description="Mixture weights; defaults depend on kind"
    )
    mode_spread: Optional[float] = Field(None, gt=0.0)
    invalid_mode: int = Field(settings.TRIMODAL_INVALID_MODE, ge=0)

    @field_validator("semi_axes")
    @classmethod
    def _positive_axes(cls, value):
        if min(value) <= 0:
            raise ValueError("semi-axes must be positive")
        return value

    @model_validator(mode="after")
    def _consistent_mixture(self):
        weights = self.resolved_weights()
        if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-9:
            raise ValueError("mode weights must be non-negative and sum to 1")
        means = self.mode_fractions if self.kind == "ellipse_partial" else self.mode_centers
        if len(weights) != len(means):
            raise ValueError("mode weights and mode means differ in length")
        if self.kind == "trimodal" and self.invalid_mode >= len(means):
            raise ValueError("invalid_mode index out of range")
        return self

    def resolved_weights(self) -> List[float]:
        if self.mode_weights is not None:
            return list(self.mode_weights)
        if self.kind == "ellipse_partial":
            return list(settings.ELLIPSE_MODE_WEIGHTS)
        return list(settings.TRIMODAL_WEIGHTS)

    def resolved_spread(self) -> float:
        if self.mode_spread is not None:
            return self.mode_spread
        if self.kind == "ellipse_partial":
            return settings.ELLIPSE_MODE_SPREAD
        return settings.TRIMODAL_SPREAD


class TrainConfig(StrictModel):
    """Flow-matching pretraining hyperparameters."""

    epochs: int = Field(settings.PRETRAIN_EPOCHS, gt=0)
    batch_size: int = Field(settings.PRETRAIN_BATCH_SIZE, gt=0)
    learning_rate: float = Field(settings.PRETRAIN_LEARNING_RATE, gt=0.0)
    seed: Optional[int] = Field(None, description="Defaults to the run seed")
    data_count: int = Field(settings.PRETRAIN_DATA_COUNT, gt=0)
    hidden_widths: List[int] = Field(default_factory=lambda: list(settings.HIDDEN_WIDTHS))
    activation: Literal["silu", "tanh"] = Field(settings.ACTIVATION)
    grad_clip: Optional[float] = Field(None, gt=0.0)
    log_every: int = Field(settings.PRETRAIN_LOG_EVERY, gt=0)

    @field_validator("hidden_widths")
    @classmethod
    def _positive_widths(cls, value):
        if not value or min(value) <= 0:
            raise ValueError("hidden widths must be positive")
        return value


class AdjointConfig(StrictModel):
    """Adjoint matching solver settings."""

    outer_iters: int = Field(settings.AM_OUTER_ITERS, gt=0, description="Rounds N")
    batch_size: int = Field(settings.AM_BATCH_SIZE, gt=0, description="Trajectories m")
    steps: int = Field(settings.SDE_STEPS, ge=2, description="Trajectory length")
    learning_rate: float = Field(settings.AM_LEARNING_RATE, gt=0.0)
    steps_per_round: int = Field(settings.AM_STEPS_PER_ROUND, gt=0)
    grad_clip: Optional[float] = Field(settings.GRAD_CLIP_NORM, gt=0.0)
    seed: Optional[int] = None


class VerifierSpec(StrictModel):
    """Hard verifier descriptor; `parts` nests specs for intersections."""

    kind: Literal["ellipse", "box", "band", "intersection"]
    center: Optional[Tuple[float, ...]] = None
    semi_axes: Optional[Tuple[float, ...]] = None
    rotation: float = 0.0
    lo: Optional[Tuple[float, ...]] = None
    hi: Optional[Tuple[float, ...]] = None
    normal: Optional[Tuple[float, ...]] = None
    lower: Optional[float] = None
    upper: Optional[float] = None
    parts: List["VerifierSpec"] = Field(default_factory=list)
    temperature: float = Field(settings.SMOOTH_TEMPERATURE, gt=0.0)

    @model_validator(mode="after")
    def _required_fields(self):
        required = {
            "ellipse": ("center", "semi_axes"),
            "box": ("lo", "hi"),
            "band": ("normal", "lower", "upper"),
        }.get(self.kind, ())
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.kind} verifier needs {', '.join(missing)}")
        if self.kind == "intersection" and not self.parts:
            raise ValueError("intersection verifier needs at least one part")
        return self


VerifierSpec.model_rebuild()


class ExpanderConfig(StrictModel):
    """Outer loop settings for every expansion mode."""

    mode: Literal["global", "local", "nse", "terminal_only", "fdc", "constr"] = "global"
    iterations: int = Field(settings.GLOBAL_ITERATIONS, ge=1, description="K")
    gamma_kind: Literal["constant", "harmonic_decay", "paper_toy", "fast_decay"] = "paper_toy"
    gamma_base: float = Field(settings.GLOBAL_GAMMA_BASE, ge=0.0, description="0 disables expansion")
    beta: Optional[float] = Field(None, ge=0.0, lt=1.0)
    gamma_tilde: Optional[float] = Field(None, gt=0.0)
    eta: Optional[float] = Field(None, ge=0.0, description="Projection strength")
    alpha: float = Field(0.0, ge=0.0)
    lambda_kind: Literal["zero_band_constant", "zero_band_sigma"] = "zero_band_constant"
    lambda_constant: float = Field(settings.GLOBAL_LAMBDA, ge=0.0)
    lambda_band: float = Field(settings.GLOBAL_LAMBDA_BAND, gt=0.0, lt=1.0)
    epsilon_clip: float = Field(settings.EPSILON_CLIP_TOY, gt=0.0, lt=0.5)
    temperature: float = Field(settings.SMOOTH_TEMPERATURE, gt=0.0)
    seed: Optional[int] = None
    record_phases: bool = True
    adjoint: AdjointConfig = Field(default_factory=AdjointConfig)

    @model_validator(mode="after")
    def _mode_invariants(self):
        if (self.beta is None) != (self.gamma_tilde is None):
            raise ValueError("beta and gamma_tilde must be given together")
        if self.mode == "global" and (self.alpha != 0.0 or self.beta not in (None, 0.0)):
            raise ValueError("mode global requires alpha = 0")
        if self.mode == "nse" and self.eta not in (None, 0.0):
            raise ValueError("mode nse requires eta = 0")
        return self

    def resolved_eta(self) -> float:
        if self.mode == "nse":
            return 0.0
        if self.eta is not None:
            return self.eta
        return settings.GLOBAL_ETA


class MetricConfig(StrictModel):
    """Metric snapshot settings."""

    samples: int = Field(settings.METRIC_SAMPLES, ge=2)
    ode_steps: int = Field(settings.ODE_EVAL_STEPS, ge=1)
    knn_k: int = Field(settings.KNN_NEIGHBORS, ge=1)
    vendi_samples: int = Field(settings.VENDI_SAMPLES, ge=1)
    kernel: Literal["rbf", "exp_distance"] = "rbf"
    bandwidth: Optional[float] = Field(None, gt=0.0)
    enabled: List[Literal["entropy", "validity", "vendi"]] = Field(
        default_factory=lambda: ["entropy", "validity", "vendi"]
    )


class OracleConfig(StrictModel):
    """Discrete mirror-descent sweep settings."""

    trials: int = Field(settings.ORACLE_PROP_TRIALS, ge=1)
    instances: int = Field(settings.ORACLE_RATE_INSTANCES, ge=1)
    iterations: int = Field(settings.ORACLE_ITERATIONS, ge=1)
    max_cells: int = Field(settings.ORACLE_MAX_CELLS, ge=2)
    rate_gammas: List[float] = Field(default_factory=lambda: [1.0, 0.3])
    alphas: List[float] = Field(default_factory=lambda: list(settings.ORACLE_ALPHAS))
    fixed_point_iterations: int = Field(settings.ORACLE_FIXED_POINT_ITERATIONS, ge=1)
    seed: Optional[int] = None

    @field_validator("rate_gammas")
    @classmethod
    def _gammas_in_range(cls, value):
        if not value or any(g <= 0 or g > 1 for g in value):
            raise ValueError("rate gammas must lie in (0, 1]")
        return value


class EvalConfig(StrictModel):
    """Standalone metric evaluation."""

    samples: Optional[ExistingPath] = None
    metrics: List[Literal["entropy", "validity", "vendi"]] = Field(
        default_factory=lambda: ["entropy", "validity", "vendi"]
    )


class PlotSpec(StrictModel):
    """Figure description."""

    kind: Literal["scatter2d", "histogram1d", "curve"]
    inputs: List[ExistingPath] = Field(..., min_length=1)
    overlay_verifier: bool = False
    x_label: str = "x1"
    y_label: str = "x2"
    output: str = "plot.svg"
    column: str = "entropy"
    phase: Optional[str] = None
    bins: int = Field(60, ge=1)
    title: Optional[str] = None


class RunConfig(StrictModel):
    """Complete configuration for one CLI invocation."""

    seed: int = Field(..., description="Mandatory run seed")
    output_dir: str = "runs/default"
    schedule: ScheduleSpec = Field(default_factory=ScheduleSpec)
    dataset: DatasetSpec = Field(default_factory=DatasetSpec)
    train: TrainConfig = Field(default_factory=TrainConfig)
    expander: ExpanderConfig = Field(default_factory=ExpanderConfig)
    verifier: Optional[VerifierSpec] = None
    validity_verifier: Optional[VerifierSpec] = None
    metrics: MetricConfig = Field(default_factory=MetricConfig)
    oracle: OracleConfig = Field(default_factory=OracleConfig)
    eval: EvalConfig = Field(default_factory=EvalConfig)
    plot: Optional[PlotSpec] = None
    pretrained_checkpoint: Optional[ExistingPath] = None
