"""Expand-then-project outer loop and its baselines."""

from .flow_expander_service import FlowExpanderService
from .iterate_evaluator_service import IterateEvaluatorService
from .running_cost_functions import running_cost_grad

__all__ = ["FlowExpanderService", "IterateEvaluatorService", "running_cost_grad"]
