"""Hard verifiers, intersections and smoothed surrogates."""

from .geometric_verifiers import (
    BoxVerifier,
    EllipseVerifier,
    HalfspaceBandVerifier,
    rotation_matrix,
)
from .intersection_verifier import (
    IntersectionVerifier,
    containment_holds,
    intersect,
    sample_accepted,
)
from .smooth_verifier import SmoothVerifier, smooth
from .verifier_factory_service import VerifierFactoryService


def ellipse_verifier(center, semi_axes, rotation: float = 0.0) -> EllipseVerifier:
    return EllipseVerifier(center, semi_axes, rotation)


def box_verifier(lo, hi) -> BoxVerifier:
    return BoxVerifier(lo, hi)


def halfspace_band_verifier(normal, offsets) -> HalfspaceBandVerifier:
    lower, upper = offsets
    return HalfspaceBandVerifier(normal, lower, upper)


__all__ = [
    "BoxVerifier",
    "EllipseVerifier",
    "HalfspaceBandVerifier",
    "IntersectionVerifier",
    "SmoothVerifier",
    "VerifierFactoryService",
    "box_verifier",
    "containment_holds",
    "ellipse_verifier",
    "halfspace_band_verifier",
    "intersect",
    "rotation_matrix",
    "sample_accepted",
    "smooth",
]
