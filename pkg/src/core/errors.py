"""Exception hierarchy for the flow expander library."""

import math
from typing import Any, List, Optional

USAGE = "usage"
NUMERICAL = "numerical"
ACCEPTANCE = "acceptance"


class FlowExpanderError(Exception):
    """Base class for every error raised by this package."""

    category: str = NUMERICAL


class DimensionError(FlowExpanderError):
    """Shapes or grids do not line up."""


class DomainError(FlowExpanderError):
    """An argument lies outside the domain of an operation."""


class ScheduleError(FlowExpanderError):
    """A schedule produced an invalid coefficient (negative radicand, zero sigma)."""


class LookupFailedError(FlowExpanderError):
    """A tensor or node was requested from a tape that never recorded it."""


class TapeConsumedError(FlowExpanderError):
    """A tape was reused after its backward pass."""


class CapabilityError(FlowExpanderError):
    """The object does not support the requested capability."""


class InfeasibilityError(FlowExpanderError):
    """All probability mass was masked out."""


class GeometryError(FlowExpanderError):
    """A dataset geometry rejects almost every proposal."""


class TrainingError(FlowExpanderError):
    """Training diverged."""

    def __init__(self, message: str, epoch: int):
        super().__init__(f"{message} (epoch {epoch})")
        self.epoch = epoch


class IntegrationError(FlowExpanderError):
    """A sampler or adjoint solve produced a non-finite state."""

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step


class FineTuningError(FlowExpanderError):
    """Adjoint matching diverged."""

    def __init__(self, message: str, round_index: int):
        super().__init__(f"{message} (round {round_index})")
        self.round_index = round_index


class DivergenceError(FlowExpanderError):
    """KL divergence is infinite because supports do not nest."""

    def __init__(self, message: str):
        super().__init__(message)
        self.value = math.inf


class NumericalError(FlowExpanderError):
    """An iterative solver exhausted its budget."""

    def __init__(self, message: str, sweeps: int):
        super().__init__(f"{message} after {sweeps} sweeps")
        self.sweeps = sweeps


class FormatError(FlowExpanderError):
    """A file on disk does not follow the expected layout."""

    category = USAGE


class ConfigError(FlowExpanderError):
    """A configuration entry is malformed or invalid."""

    category = USAGE

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        location = ""
        if key is not None:
            location += f"key '{key}'"
        if line is not None:
            location += f"{' ' if location else ''}at line {line}"
        super().__init__(f"{location}: {message}" if location else message)
        self.key = key
        self.line = line


class UsageError(FlowExpanderError):
    """The command line or its inputs are unusable."""

    category = USAGE


class AcceptanceCheckError(FlowExpanderError):
    """A theory check (bound, equality, fixed point) failed."""

    category = ACCEPTANCE


class ExpansionError(FlowExpanderError):
    """The outer expansion loop failed; completed records are preserved."""

    def __init__(self, message: str, records: List[Any], cause: Optional[BaseException] = None):
        super().__init__(message)
        self.records = records
        self.cause = cause
        if cause is not None and isinstance(cause, FlowExpanderError):
            self.category = cause.category


def exit_code_for(error: BaseException) -> int:
    """
    Map an exception to the CLI exit status.

    Args:
        error: Raised exception

    Returns:
        1 for usage/config problems, 2 for numerical failures, 3 for failed checks
    """
    if isinstance(error, FlowExpanderError):
        return {USAGE: 1, NUMERICAL: 2, ACCEPTANCE: 3}.get(error.category, 2)
    if isinstance(error, (FileNotFoundError, PermissionError, IsADirectoryError)):
        return 1
    return 2
