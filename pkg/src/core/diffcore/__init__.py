"""Minimal reverse-mode automatic differentiation for small MLPs."""

from .ops import (
    POINTWISE_KINDS,
    add,
    backward,
    concat,
    matmul,
    pointwise,
    scale,
    silu,
    sub,
    sum_squares,
    tanh,
    total,
)
from .tape import Tape, TapeEntry
from .tensor import Tensor

__all__ = [
    "POINTWISE_KINDS",
    "Tape",
    "TapeEntry",
    "Tensor",
    "add",
    "backward",
    "concat",
    "matmul",
    "pointwise",
    "scale",
    "silu",
    "sub",
    "sum_squares",
    "tanh",
    "total",
]
