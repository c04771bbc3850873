"""Ellipse, box and half-space band verifiers."""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from src.config.settings import settings
from src.core.errors import DimensionError, DomainError
from src.core.interfaces.verifier import Verifier

Bounds = Optional[Tuple[np.ndarray, np.ndarray]]


def _batch(x: np.ndarray, dim: int) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != dim:
        raise DimensionError(f"verifier expects dimension {dim}, got {x.shape[1]}")
    return x


def rotation_matrix(angle: float, dim: int) -> np.ndarray:
    """Rotation by `angle` in the (x1, x2) plane; identity elsewhere."""
    rotation = np.eye(dim)
    if angle != 0.0:
        if dim < 2:
            raise DomainError("rotation needs at least two dimensions")
        c, s = np.cos(angle), np.sin(angle)
        rotation[:2, :2] = [[c, -s], [s, c]]
    return rotation


class EllipseVerifier(Verifier):
    """Closed ellipsoid q(x) = ||Lambda^-1 R^T (x - c)||^2 <= 1."""

    kind = "ellipse"

    def __init__(self, center: Sequence[float], semi_axes: Sequence[float], rotation: float = 0.0):
        self.center = np.asarray(center, dtype=np.float64).reshape(-1)
        self.semi_axes = np.asarray(semi_axes, dtype=np.float64).reshape(-1)
        if self.center.shape != self.semi_axes.shape:
            raise DimensionError("center and semi-axes differ in dimension")
        if np.any(self.semi_axes <= 0.0):
            raise DomainError(f"semi-axes must be positive, got {self.semi_axes.tolist()}")
        self.rotation = float(rotation)
        self.dim = self.center.shape[0]
        self._rotation = rotation_matrix(self.rotation, self.dim)

    def to_frame(self, x: np.ndarray) -> np.ndarray:
        """Coordinates in the ellipse frame, R^T (x - c)."""
        return (_batch(x, self.dim) - self.center) @ self._rotation

    def from_frame(self, u: np.ndarray) -> np.ndarray:
        return np.atleast_2d(u) @ self._rotation.T + self.center

    def quadratic_form(self, x: np.ndarray) -> np.ndarray:
        u = self.to_frame(x) / self.semi_axes
        return np.sum(u * u, axis=1)

    def accepts(self, x):
        return self.quadratic_form(x) <= 1.0 + settings.CLOSED_SET_TOLERANCE

    def supports_margin(self) -> bool:
        return True

    def margin(self, x):
        return 1.0 - self.quadratic_form(x)

    def margin_grad(self, x):
        return -2.0 * (self.to_frame(x) / self.semi_axes**2) @ self._rotation.T

    def outline(self, points: int = 256) -> List[np.ndarray]:
        if self.dim != 2:
            return []
        angles = np.linspace(0.0, 2.0 * np.pi, points)
        frame = np.stack([np.cos(angles), np.sin(angles)], axis=1) * self.semi_axes
        return [self.from_frame(frame)]

    def bounding_box(self) -> Bounds:
        shape = self._rotation @ np.diag(self.semi_axes**2) @ self._rotation.T
        half = np.sqrt(np.diag(shape))
        return self.center - half, self.center + half

    def area(self) -> float:
        """Volume of the ellipsoid (area in 2-D)."""
        log_unit_ball = 0.5 * self.dim * np.log(np.pi) - gammaln(0.5 * self.dim + 1.0)
        return float(np.exp(log_unit_ball) * np.prod(self.semi_axes))

    def descriptor(self) -> Dict:
        return {
            "kind": self.kind,
            "center": self.center.tolist(),
            "semi_axes": self.semi_axes.tolist(),
            "rotation": self.rotation,
        }


class BoxVerifier(Verifier):
    """Closed axis-aligned box lo <= x <= hi."""

    kind = "box"

    def __init__(self, lo: Sequence[float], hi: Sequence[float]):
        self.lo = np.asarray(lo, dtype=np.float64).reshape(-1)
        self.hi = np.asarray(hi, dtype=np.float64).reshape(-1)
        if self.lo.shape != self.hi.shape:
            raise DimensionError("box bounds differ in dimension")
        if np.any(self.lo >= self.hi):
            raise DomainError(f"box needs lo < hi, got {self.lo.tolist()} and {self.hi.tolist()}")
        self.dim = self.lo.shape[0]

    def _slacks(self, x):
        x = _batch(x, self.dim)
        return np.concatenate([x - self.lo, self.hi - x], axis=1)

    def accepts(self, x):
        return np.all(self._slacks(x) >= -settings.CLOSED_SET_TOLERANCE, axis=1)

    def supports_margin(self) -> bool:
        return True

    def margin(self, x):
        return np.min(self._slacks(x), axis=1)

    def margin_grad(self, x):
        slacks = self._slacks(x)
        active = np.argmin(slacks, axis=1)
        grad = np.zeros((slacks.shape[0], self.dim))
        rows = np.arange(slacks.shape[0])
        lower = active < self.dim
        grad[rows[lower], active[lower]] = 1.0
        grad[rows[~lower], active[~lower] - self.dim] = -1.0
        return grad

    def outline(self) -> List[np.ndarray]:
        if self.dim != 2:
            return []
        (x0, y0), (x1, y1) = self.lo, self.hi
        return [np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]])]

    def bounding_box(self) -> Bounds:
        return self.lo.copy(), self.hi.copy()

    def descriptor(self) -> Dict:
        return {"kind": self.kind, "lo": self.lo.tolist(), "hi": self.hi.tolist()}


class HalfspaceBandVerifier(Verifier):
    """Closed slab lower <= <n, x> <= upper for a unit normal n."""

    kind = "band"

    def __init__(self, normal: Sequence[float], lower: float, upper: float, extent: float = 10.0):
        normal = np.asarray(normal, dtype=np.float64).reshape(-1)
        length = float(np.linalg.norm(normal))
        if length == 0.0:
            raise DomainError("band normal must be non-zero")
        if lower >= upper:
            raise DomainError(f"band needs lower < upper, got {lower} and {upper}")
        self.normal = normal / length
        self.lower = float(lower)
        self.upper = float(upper)
        self.extent = float(extent)
        self.dim = self.normal.shape[0]

    def _projection(self, x):
        return _batch(x, self.dim) @ self.normal

    def accepts(self, x):
        p = self._projection(x)
        tol = settings.CLOSED_SET_TOLERANCE
        return (p >= self.lower - tol) & (p <= self.upper + tol)

    def supports_margin(self) -> bool:
        return True

    def margin(self, x):
        p = self._projection(x)
        return np.minimum(p - self.lower, self.upper - p)

    def margin_grad(self, x):
        p = self._projection(x)
        sign = np.where(p - self.lower <= self.upper - p, 1.0, -1.0)
        return sign[:, None] * self.normal

    def outline(self) -> List[np.ndarray]:
        if self.dim != 2:
            return []
        tangent = np.array([-self.normal[1], self.normal[0]])
        lines = []
        for offset in (self.lower, self.upper):
            base = offset * self.normal
            lines.append(np.stack([base - self.extent * tangent, base + self.extent * tangent]))
        return lines

    def bounding_box(self) -> Bounds:
        return None

    def descriptor(self) -> Dict:
        return {
            "kind": self.kind,
            "normal": self.normal.tolist(),
            "lower": self.lower,
            "upper": self.upper,
        }
