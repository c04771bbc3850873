"""Verifiers paired with the toy datasets."""

import numpy as np

from src.config.settings import settings
from src.core.services.verifiers.geometric_verifiers import BoxVerifier, EllipseVerifier
from src.models.config import DatasetSpec, VerifierSpec


def ellipse_for(spec: DatasetSpec) -> EllipseVerifier:
    """Strong verifier of the global setting: the configured ellipse."""
    return EllipseVerifier(spec.center, spec.semi_axes, spec.rotation)


def ellipse_mode_means(spec: DatasetSpec) -> np.ndarray:
    """World-frame mixture means from their ellipse-frame axis fractions."""
    fractions = np.asarray(spec.mode_fractions, dtype=np.float64)
    return ellipse_for(spec).from_frame(fractions * np.asarray(spec.semi_axes))


def trimodal_weak_box() -> BoxVerifier:
    """Weak verifier of the local setting; rejects the left mode."""
    lo, hi = settings.TRIMODAL_WEAK_BOX
    return BoxVerifier(lo, hi)


def trimodal_valid_box() -> BoxVerifier:
    """Validity set of the local setting, nested inside the weak box."""
    lo, hi = settings.TRIMODAL_VALID_BOX
    return BoxVerifier(lo, hi)


def default_verifier_spec(
    spec: DatasetSpec, strong: bool = False, temperature: float = settings.SMOOTH_TEMPERATURE
) -> VerifierSpec:
    """
    Verifier descriptor matching a dataset.

    Args:
        spec: Dataset geometry
        strong: Return the validity set used for scoring instead of the weak verifier
        temperature: Smoothing temperature carried by the descriptor
    """
    if spec.kind == "ellipse_partial":
        return VerifierSpec(
            kind="ellipse",
            center=tuple(spec.center),
            semi_axes=tuple(spec.semi_axes),
            rotation=spec.rotation,
            temperature=temperature,
        )
    lo, hi = settings.TRIMODAL_VALID_BOX if strong else settings.TRIMODAL_WEAK_BOX
    return VerifierSpec(kind="box", lo=tuple(lo), hi=tuple(hi), temperature=temperature)
