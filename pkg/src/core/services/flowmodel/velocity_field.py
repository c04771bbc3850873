"""Multilayer perceptron velocity field u_theta(x, t)."""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core import diffcore
from src.core.diffcore import Tape, Tensor
from src.core.errors import DimensionError, DomainError
from src.core.interfaces.velocity_model import TimeLike, VelocityModel

ACTIVATION_CODES = {"silu": 0, "tanh": 1}
ACTIVATION_NAMES = {code: name for name, code in ACTIVATION_CODES.items()}


def time_column(t: TimeLike, n: int) -> np.ndarray:
    """Broadcast a scalar or per-row time to an (n, 1) column."""
    column = np.asarray(t, dtype=np.float64)
    if column.ndim == 0:
        return np.full((n, 1), float(column))
    column = column.reshape(-1, 1)
    if column.shape[0] != n:
        raise DimensionError(f"time vector has {column.shape[0]} rows, expected {n}")
    return column


class VelocityField(VelocityModel):
    """
    MLP on the concatenated input (x, t).

    Layer widths run from d + 1 to d; hidden layers share one activation and
    the last layer is linear. Parameters are immutable tensors, so a field can
    be evaluated from many threads at once.
    """

    def __init__(
        self,
        weights: Sequence[Tensor],
        biases: Sequence[Tensor],
        activation: str = "silu",
    ):
        if activation not in ACTIVATION_CODES:
            raise DomainError(f"unknown activation '{activation}'")
        if not weights or len(weights) != len(biases):
            raise DimensionError("a velocity field needs matching weight and bias lists")
        self._weights = [w if isinstance(w, Tensor) else Tensor(w) for w in weights]
        self._biases = [
            Tensor(np.reshape(b.data if isinstance(b, Tensor) else b, (1, -1)))
            for b in biases
        ]
        for index, (w, b) in enumerate(zip(self._weights, self._biases)):
            if w.ndim != 2 or b.shape != (1, w.shape[1]):
                raise DimensionError(f"layer {index} has weight {w.shape} and bias {b.shape}")
            if index > 0 and self._weights[index - 1].shape[1] != w.shape[0]:
                raise DimensionError(f"layer {index} breaks the width chain")
        if self._weights[0].shape[0] != self._weights[-1].shape[1] + 1:
            raise DimensionError("input width must equal output width + 1")
        if not all(p.is_finite() for p in self.parameters()):
            raise DomainError("velocity field parameters must be finite")
        self.activation = activation

    @classmethod
    def initialize(
        cls,
        dim: int,
        hidden_widths: Sequence[int],
        activation: str = "silu",
        rng: Optional[np.random.Generator] = None,
        zero_final: bool = False,
    ) -> "VelocityField":
        """
        Fresh field with U(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases.

        Args:
            dim: State dimension d
            hidden_widths: Hidden layer widths
            activation: Hidden activation
            rng: Random generator
            zero_final: Zero the last layer so the field is identically 0

        Returns:
            New VelocityField
        """
        rng = rng or np.random.default_rng(0)
        widths = [dim + 1, *hidden_widths, dim]
        weights, biases = [], []
        for layer, (fan_in, fan_out) in enumerate(zip(widths[:-1], widths[1:])):
            bound = 1.0 / np.sqrt(fan_in)
            w = rng.uniform(-bound, bound, size=(fan_in, fan_out))
            b = rng.uniform(-bound, bound, size=(1, fan_out))
            if zero_final and layer == len(widths) - 2:
                w, b = np.zeros_like(w), np.zeros_like(b)
            weights.append(Tensor(w))
            biases.append(Tensor(b))
        return cls(weights, biases, activation)

    @property
    def dim(self) -> int:
        return self._weights[-1].shape[1]

    @property
    def widths(self) -> List[int]:
        return [self._weights[0].shape[0]] + [w.shape[1] for w in self._weights]

    @property
    def weights(self) -> List[Tensor]:
        return list(self._weights)

    @property
    def biases(self) -> List[Tensor]:
        return list(self._biases)

    def parameters(self) -> List[Tensor]:
        """Parameters in layer order: W0, b0, W1, b1, ..."""
        params: List[Tensor] = []
        for w, b in zip(self._weights, self._biases):
            params.extend((w, b))
        return params

    def with_parameters(self, params: Sequence) -> "VelocityField":
        """New field of the same architecture with the given parameters."""
        if len(params) != 2 * len(self._weights):
            raise DimensionError("parameter count does not match the architecture")
        return VelocityField(params[0::2], params[1::2], self.activation)

    def copy(self) -> "VelocityField":
        return self.with_parameters(self.parameters())

    def forward(
        self, x: np.ndarray, t: TimeLike, tape: Optional[Tape] = None
    ) -> Tuple[Tensor, Tensor]:
        """
        Forward pass, optionally recorded.

        Returns:
            Output tensor (n, d) and the input tensor holding x
        """
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.dim:
            raise DimensionError(f"expected inputs of shape (n, {self.dim}), got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise DomainError("velocity field inputs must be finite")
        n = x.shape[0]
        x_tensor = Tensor(x)
        if tape is not None:
            tape.watch(x_tensor)
        hidden = diffcore.concat([x_tensor, Tensor(time_column(t, n))], axis=1, tape=tape)
        ones = Tensor(np.ones((n, 1)))
        last = len(self._weights) - 1
        for layer, (w, b) in enumerate(zip(self._weights, self._biases)):
            hidden = diffcore.add(
                diffcore.matmul(hidden, w, tape=tape),
                diffcore.matmul(ones, b, tape=tape),
                tape=tape,
            )
            if layer < last:
                hidden = diffcore.pointwise(self.activation, hidden, tape=tape)
        return hidden, x_tensor

    def evaluate(self, x: np.ndarray, t: TimeLike) -> np.ndarray:
        output, _ = self.forward(x, t)
        return output.data

    def vjp(self, x: np.ndarray, t: TimeLike, cotangent: np.ndarray) -> np.ndarray:
        tape = Tape()
        output, x_tensor = self.forward(x, t, tape=tape)
        grads = diffcore.backward(tape, output, np.asarray(cotangent, dtype=np.float64))
        return grads[tape.node_of(x_tensor)].numpy()

    def max_abs_difference(self, other: "VelocityField") -> float:
        """Largest absolute parameter difference against a same-shaped field."""
        mine, theirs = self.parameters(), other.parameters()
        if len(mine) != len(theirs) or any(a.shape != b.shape for a, b in zip(mine, theirs)):
            raise DimensionError("fields have different architectures")
        return max(float(np.max(np.abs(a.data - b.data))) for a, b in zip(mine, theirs))

    def descriptor(self) -> dict:
        return {"widths": self.widths, "activation": self.activation}
