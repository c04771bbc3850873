"""Immutable dense float64 tensor."""

from typing import Sequence, Tuple, Union

import numpy as np

ArrayLike = Union["Tensor", np.ndarray, Sequence, float, int]


class Tensor:
    """Read-only row-major float64 array; safe to share across threads."""

    __slots__ = ("_data",)

    def __init__(self, data: ArrayLike):
        if isinstance(data, Tensor):
            array = data._data
        else:
            array = np.array(data, dtype=np.float64, order="C", copy=True)
            array.setflags(write=False)
        self._data = array

    @classmethod
    def zeros(cls, shape: Tuple[int, ...]) -> "Tensor":
        return cls(np.zeros(shape, dtype=np.float64))

    @property
    def data(self) -> np.ndarray:
        """Read-only view of the values."""
        return self._data

    @property
    def shape(self) -> Tuple[int, ...]:
        return self._data.shape

    @property
    def size(self) -> int:
        return int(self._data.size)

    @property
    def ndim(self) -> int:
        return self._data.ndim

    def is_scalar(self) -> bool:
        return self._data.size == 1 and self._data.ndim <= 2

    def numpy(self) -> np.ndarray:
        """Writable copy of the values."""
        return np.array(self._data, copy=True)

    def item(self) -> float:
        return float(self._data.reshape(-1)[0])

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self._data)))

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape})"
