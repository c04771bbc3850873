"""Differentiable primitives and the backward pass."""

from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np
from scipy.special import expit

from src.core.diffcore.tape import Tape, TapeEntry
from src.core.diffcore.tensor import Tensor
from src.core.errors import DimensionError, DomainError, LookupFailedError

POINTWISE_KINDS = ("tanh", "silu", "add", "scale", "sub")


def _as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def matmul(a: Tensor, b: Tensor, tape: Optional[Tape] = None) -> Tensor:
    """
    Matrix product of two 2-D tensors.

    Raises:
        DimensionError: If the operands are not 2-D or inner dimensions differ
    """
    a, b = _as_tensor(a), _as_tensor(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul shapes {a.shape} and {b.shape} do not agree")
    out = Tensor(a.data @ b.data)
    if tape is not None:
        tape.record("matmul", (a, b), out)
    return out


def _binary_shape(a: Tensor, b: Tensor, kind: str):
    if a.shape == b.shape:
        return a.shape
    if b.is_scalar():
        return a.shape
    if a.is_scalar():
        return b.shape
    raise DimensionError(f"{kind} shapes {a.shape} and {b.shape} are incompatible")


def _scalar_view(tensor: Tensor, shape) -> np.ndarray:
    if tensor.shape == shape:
        return tensor.data
    return tensor.data.reshape(())


def pointwise(kind: str, *args, tape: Optional[Tape] = None) -> Tensor:
    """
    Elementwise primitive.

    Args:
        kind: One of tanh, silu (unary), add, sub (binary), scale (tensor, float)
        args: Operands
        tape: Optional tape to record on

    Returns:
        Elementwise result

    Raises:
        DimensionError: If operand shapes are neither equal nor scalar-with-tensor
        DomainError: If the kind is unknown or the arity is wrong
    """
    if kind in ("tanh", "silu"):
        if len(args) != 1:
            raise DomainError(f"{kind} takes one operand")
        x = _as_tensor(args[0])
        if kind == "tanh":
            out = Tensor(np.tanh(x.data))
            saved = {"y": out.data}
        else:
            sig = expit(x.data)
            out = Tensor(x.data * sig)
            saved = {"x": x.data, "sigmoid": sig}
        if tape is not None:
            tape.record(kind, (x,), out, saved)
        return out

    if kind == "scale":
        if len(args) != 2:
            raise DomainError("scale takes a tensor and a constant")
        x = _as_tensor(args[0])
        factor = float(args[1])
        out = Tensor(x.data * factor)
        if tape is not None:
            tape.record(kind, (x,), out, {"factor": factor})
        return out

    if kind in ("add", "sub"):
        if len(args) != 2:
            raise DomainError(f"{kind} takes two operands")
        a, b = _as_tensor(args[0]), _as_tensor(args[1])
        shape = _binary_shape(a, b, kind)
        lhs, rhs = _scalar_view(a, shape), _scalar_view(b, shape)
        out = Tensor(lhs + rhs if kind == "add" else lhs - rhs)
        if tape is not None:
            tape.record(kind, (a, b), out)
        return out

    raise DomainError(f"unknown pointwise kind '{kind}'")


def add(a: Tensor, b: Tensor, tape: Optional[Tape] = None) -> Tensor:
    return pointwise("add", a, b, tape=tape)


def sub(a: Tensor, b: Tensor, tape: Optional[Tape] = None) -> Tensor:
    return pointwise("sub", a, b, tape=tape)


def scale(x: Tensor, factor: float, tape: Optional[Tape] = None) -> Tensor:
    return pointwise("scale", x, factor, tape=tape)


def tanh(x: Tensor, tape: Optional[Tape] = None) -> Tensor:
    return pointwise("tanh", x, tape=tape)


def silu(x: Tensor, tape: Optional[Tape] = None) -> Tensor:
    return pointwise("silu", x, tape=tape)


def total(x: Tensor, tape: Optional[Tape] = None) -> Tensor:
    """Sum of all entries as a scalar tensor."""
    x = _as_tensor(x)
    out = Tensor(np.sum(x.data))
    if tape is not None:
        tape.record("sum", (x,), out)
    return out


def sum_squares(x: Tensor, tape: Optional[Tape] = None) -> Tensor:
    """Sum of squared entries as a scalar tensor."""
    x = _as_tensor(x)
    out = Tensor(np.sum(x.data * x.data))
    if tape is not None:
        tape.record("sum_squares", (x,), out, {"x": x.data})
    return out


def concat(tensors: Sequence[Tensor], axis: int = 1, tape: Optional[Tape] = None) -> Tensor:
    """
    Concatenate 2-D tensors along an axis.

    Raises:
        DimensionError: If the list is empty or off-axis sizes differ
    """
    tensors = [_as_tensor(tensor) for tensor in tensors]
    if not tensors:
        raise DimensionError("concat needs at least one tensor")
    if any(tensor.ndim != 2 for tensor in tensors):
        raise DimensionError("concat supports 2-D tensors only")
    other = 1 - axis
    if len({tensor.shape[other] for tensor in tensors}) != 1:
        raise DimensionError(
            f"concat off-axis sizes differ: {[tensor.shape for tensor in tensors]}"
        )
    out = Tensor(np.concatenate([tensor.data for tensor in tensors], axis=axis))
    if tape is not None:
        sizes = [tensor.shape[axis] for tensor in tensors]
        tape.record("concat", tensors, out, {"axis": axis, "sizes": sizes})
    return out


def _reduce_to(grad: np.ndarray, shape) -> np.ndarray:
    if grad.shape == tuple(shape):
        return grad
    return np.full(shape, np.sum(grad))


def _vjp_matmul(entry: TapeEntry, g: np.ndarray, tape: Tape) -> List[np.ndarray]:
    a = tape.tensor(entry.operands[0]).data
    b = tape.tensor(entry.operands[1]).data
    return [g @ b.T, a.T @ g]


def _vjp_tanh(entry: TapeEntry, g: np.ndarray, tape: Tape) -> List[np.ndarray]:
    y = entry.saved["y"]
    return [g * (1.0 - y * y)]


def _vjp_silu(entry: TapeEntry, g: np.ndarray, tape: Tape) -> List[np.ndarray]:
    x, sig = entry.saved["x"], entry.saved["sigmoid"]
    return [g * sig * (1.0 + x * (1.0 - sig))]


def _vjp_scale(entry: TapeEntry, g: np.ndarray, tape: Tape) -> List[np.ndarray]:
    return [g * entry.saved["factor"]]


def _vjp_add(entry: TapeEntry, g: np.ndarray, tape: Tape) -> List[np.ndarray]:
    shapes = [tape.tensor(node).shape for node in entry.operands]
    return [_reduce_to(g, shapes[0]), _reduce_to(g, shapes[1])]


def _vjp_sub(entry: TapeEntry, g: np.ndarray, tape: Tape) -> List[np.ndarray]:
    shapes = [tape.tensor(node).shape for node in entry.operands]
    return [_reduce_to(g, shapes[0]), -_reduce_to(g, shapes[1])]


def _vjp_sum(entry: TapeEntry, g: np.ndarray, tape: Tape) -> List[np.ndarray]:
    shape = tape.tensor(entry.operands[0]).shape
    return [np.full(shape, float(np.sum(g)))]


def _vjp_sum_squares(entry: TapeEntry, g: np.ndarray, tape: Tape) -> List[np.ndarray]:
    return [2.0 * float(np.sum(g)) * entry.saved["x"]]


def _vjp_concat(entry: TapeEntry, g: np.ndarray, tape: Tape) -> List[np.ndarray]:
    bounds = np.cumsum(entry.saved["sizes"])[:-1]
    return list(np.split(g, bounds, axis=entry.saved["axis"]))


_VJP_RULES: Dict[str, Callable[[TapeEntry, np.ndarray, Tape], List[np.ndarray]]] = {
    "matmul": _vjp_matmul,
    "tanh": _vjp_tanh,
    "silu": _vjp_silu,
    "scale": _vjp_scale,
    "add": _vjp_add,
    "sub": _vjp_sub,
    "sum": _vjp_sum,
    "sum_squares": _vjp_sum_squares,
    "concat": _vjp_concat,
}


def backward(
    tape: Tape, output: Union[Tensor, int], seed: Union[Tensor, np.ndarray, float]
) -> Dict[int, Tensor]:
    """
    Reverse pass: gradient of <seed, output> for every recorded tensor.

    Args:
        tape: Tape holding the forward computation; consumed by this call
        output: Output tensor or its node id
        seed: Cotangent with the output's shape

    Returns:
        Map from node id to gradient tensor (zeros for nodes the output does not reach)

    Raises:
        LookupFailedError: If the output is not on the tape
        DimensionError: If the seed shape differs from the output shape
    """
    node = output if isinstance(output, int) else tape.node_of(output)
    out_tensor = tape.tensor(node)
    seed_array = np.asarray(seed.data if isinstance(seed, Tensor) else seed, dtype=np.float64)
    if seed_array.shape != out_tensor.shape:
        if seed_array.size == out_tensor.size == 1:
            seed_array = seed_array.reshape(out_tensor.shape)
        else:
            raise DimensionError(
                f"seed shape {seed_array.shape} differs from output shape {out_tensor.shape}"
            )
    tape.mark_consumed()

    grads: List[Optional[np.ndarray]] = [None] * len(tape)
    grads[node] = np.array(seed_array, dtype=np.float64, copy=True)
    for entry in reversed(tape.entries):
        if entry.node > node:
            continue
        g = grads[entry.node]
        if g is None:
            continue
        rule = _VJP_RULES.get(entry.kind)
        if rule is None:
            raise LookupFailedError(f"no derivative rule for '{entry.kind}'")
        for operand, contribution in zip(entry.operands, rule(entry, g, tape)):
            if grads[operand] is None:
                grads[operand] = np.array(contribution, dtype=np.float64, copy=True)
            else:
                grads[operand] = grads[operand] + contribution

    result: Dict[int, Tensor] = {}
    for index in range(len(tape)):
        g = grads[index]
        result[index] = Tensor(g) if g is not None else Tensor.zeros(tape.tensor(index).shape)
    return result
