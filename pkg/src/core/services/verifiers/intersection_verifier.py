"""Intersection of verifiers and weak-verifier containment checks."""

from typing import Dict, List, Sequence

import numpy as np

from src.core.errors import CapabilityError, DomainError
from src.core.interfaces.verifier import Verifier


class IntersectionVerifier(Verifier):
    """v(x) = min_i v_i(x); margin is the smallest part margin."""

    kind = "intersection"

    def __init__(self, parts: Sequence[Verifier]):
        if not parts:
            raise DomainError("intersection needs at least one verifier")
        self.parts = list(parts)

    def accepts(self, x):
        result = self.parts[0].accepts(x)
        for part in self.parts[1:]:
            result = result & part.accepts(x)
        return result

    def supports_margin(self) -> bool:
        return all(part.supports_margin() for part in self.parts)

    def _margins(self, x) -> np.ndarray:
        if not self.supports_margin():
            raise CapabilityError("an intersection part has no margin function")
        return np.stack([part.margin(x) for part in self.parts], axis=1)

    def margin(self, x):
        return np.min(self._margins(x), axis=1)

    def margin_grad(self, x):
        active = np.argmin(self._margins(x), axis=1)
        grads = np.stack([part.margin_grad(x) for part in self.parts], axis=0)
        return grads[active, np.arange(active.shape[0])]

    def outline(self) -> List[np.ndarray]:
        lines: List[np.ndarray] = []
        for part in self.parts:
            lines.extend(part.outline())
        return lines

    def bounding_box(self):
        boxes = [part.bounding_box() for part in self.parts]
        boxes = [box for box in boxes if box is not None]
        if not boxes:
            return None
        lo = np.max([box[0] for box in boxes], axis=0)
        hi = np.min([box[1] for box in boxes], axis=0)
        return lo, hi

    def descriptor(self) -> Dict:
        return {"kind": self.kind, "parts": [part.descriptor() for part in self.parts]}


def intersect(verifiers: Sequence[Verifier]) -> Verifier:
    """
    Compose verifiers by intersection.

    Raises:
        DomainError: If the list is empty
    """
    return IntersectionVerifier(verifiers)


def sample_accepted(
    verifier: Verifier, n: int, rng: np.random.Generator, max_draws: int = 100
) -> np.ndarray:
    """
    Rejection-sample n points uniformly from a bounded accepted set.

    Raises:
        CapabilityError: If the verifier has no bounding box
        DomainError: If too few proposals are accepted
    """
    box = verifier.bounding_box()
    if box is None:
        raise CapabilityError(f"verifier kind '{verifier.kind}' is unbounded")
    lo, hi = box
    accepted: List[np.ndarray] = []
    total = 0
    for _ in range(max_draws):
        proposals = rng.uniform(lo, hi, size=(n, lo.shape[0]))
        keep = proposals[verifier.accepts(proposals)]
        accepted.append(keep)
        total += keep.shape[0]
        if total >= n:
            return np.concatenate(accepted, axis=0)[:n]
    raise DomainError("accepted set is too small to rejection-sample")


def containment_holds(
    inner: Verifier, outer: Verifier, n: int, rng: np.random.Generator
) -> bool:
    """Check outer accepts every one of n uniform draws from inner's set."""
    points = sample_accepted(inner, n, rng)
    return bool(np.all(outer.accepts(points)))
