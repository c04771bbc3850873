"""Seeded synthetic datasets for the two toy settings."""

from .global_setting_generator_service import GlobalSettingGeneratorService, gen_global_setting
from .local_setting_generator_service import LocalSettingGeneratorService, gen_local_setting
from .rng_functions import derive_rng, derive_seed, derive_seed_sequence, tag_key
from .toy_geometry import (
    default_verifier_spec,
    ellipse_for,
    ellipse_mode_means,
    trimodal_valid_box,
    trimodal_weak_box,
)

__all__ = [
    "GlobalSettingGeneratorService",
    "LocalSettingGeneratorService",
    "default_verifier_spec",
    "derive_rng",
    "derive_seed",
    "derive_seed_sequence",
    "ellipse_for",
    "ellipse_mode_means",
    "gen_global_setting",
    "gen_local_setting",
    "tag_key",
    "trimodal_valid_box",
    "trimodal_weak_box",
]
