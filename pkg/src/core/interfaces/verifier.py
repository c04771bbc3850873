"""Abstract interface for hard verifiers."""

from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.core.errors import CapabilityError


class Verifier(ABC):
    """Membership predicate v: R^d -> {0, 1} with an optional signed margin."""

    kind: str = "verifier"

    @abstractmethod
    def accepts(self, x: np.ndarray) -> np.ndarray:
        """
        Evaluate the predicate on a batch.

        Args:
            x: Array of shape (n, d)

        Returns:
            Boolean array of shape (n,)
        """
        pass

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.accepts(x).astype(np.float64)

    def supports_margin(self) -> bool:
        return False

    def margin(self, x: np.ndarray) -> np.ndarray:
        """Signed margin, positive inside the accepted set."""
        raise CapabilityError(f"verifier kind '{self.kind}' has no margin function")

    def margin_grad(self, x: np.ndarray) -> np.ndarray:
        """Gradient of the margin with respect to x."""
        raise CapabilityError(f"verifier kind '{self.kind}' has no margin gradient")

    def outline(self) -> List[np.ndarray]:
        """Boundary polylines for 2-D overlays."""
        return []

    def bounding_box(self) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        """Axis-aligned box containing the accepted set, None when unbounded."""
        return None

    @abstractmethod
    def descriptor(self) -> Dict:
        """Kind and geometric parameters."""
        pass
