"""Service for building verifiers from configuration."""

import logging

from src.core.interfaces.verifier import Verifier
from src.models.config import VerifierSpec

from .geometric_verifiers import BoxVerifier, EllipseVerifier, HalfspaceBandVerifier
from .intersection_verifier import intersect
from .smooth_verifier import SmoothVerifier


class VerifierFactoryService:
    """Service responsible only for turning verifier descriptors into objects."""

    def build(self, spec: VerifierSpec) -> Verifier:
        """
        Build a hard verifier.

        Args:
            spec: Validated descriptor

        Returns:
            Verifier instance
        """
        if spec.kind == "ellipse":
            verifier = EllipseVerifier(spec.center, spec.semi_axes, spec.rotation)
        elif spec.kind == "box":
            verifier = BoxVerifier(spec.lo, spec.hi)
        elif spec.kind == "band":
            verifier = HalfspaceBandVerifier(spec.normal, spec.lower, spec.upper)
        else:
            verifier = intersect([self.build(part) for part in spec.parts])
        logging.debug("Built verifier %s", verifier.descriptor())
        return verifier

    def build_smooth(self, spec: VerifierSpec) -> SmoothVerifier:
        """Build the sigmoid surrogate at the descriptor's temperature."""
        return SmoothVerifier(self.build(spec), spec.temperature)
