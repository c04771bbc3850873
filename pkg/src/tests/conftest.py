"""Shared fixtures for the flow expander test suite."""

import numpy as np
import pytest

from src.core.services.flowmodel import GaussianTargetField, VelocityField
from src.core.services.schedules import LinearSchedule
from src.models.config import AdjointConfig


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def linear_schedule():
    return LinearSchedule()


@pytest.fixture
def small_field():
    """Tiny 2-D MLP, deterministic."""
    return VelocityField.initialize(2, [8, 8], "tanh", rng=np.random.default_rng(7))


@pytest.fixture
def gaussian_field(linear_schedule):
    return GaussianTargetField(linear_schedule, mean=[1.0, -0.5], std=0.5)


@pytest.fixture
def fast_adjoint():
    return AdjointConfig(outer_iters=2, batch_size=8, steps=6, learning_rate=1e-3)
