"""Flow samplers and the score transform."""

from .ode_sampler_service import OdeSamplerService, euler_integrate
from .score_functions import clipped_time, score
from .sde_sampler_service import SdeSamplerService, sde_drift, sde_time_grid

__all__ = [
    "OdeSamplerService",
    "SdeSamplerService",
    "clipped_time",
    "euler_integrate",
    "score",
    "sde_drift",
    "sde_time_grid",
]
