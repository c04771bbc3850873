"""Operation tape for reverse-mode differentiation."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

from src.core.diffcore.tensor import Tensor
from src.core.errors import LookupFailedError, TapeConsumedError


@dataclass
class TapeEntry:
    """One recorded primitive: operands and output by node id."""

    node: int
    kind: str
    operands: Tuple[int, ...]
    saved: Dict[str, Any] = field(default_factory=dict)


class Tape:
    """
    Ordered record of primitive operations.

    Node ids are assigned in creation order, so every operand id precedes the
    id of its consumer. A tape is confined to one thread and consumed by
    exactly one backward pass.
    """

    def __init__(self):
        self._node_by_object: Dict[int, int] = {}
        self._tensors: List[Tensor] = []
        self._entries: List[TapeEntry] = []
        self._consumed = False

    def __len__(self) -> int:
        return len(self._tensors)

    @property
    def consumed(self) -> bool:
        return self._consumed

    @property
    def entries(self) -> List[TapeEntry]:
        return self._entries

    def watch(self, tensor: Tensor) -> int:
        """Register a leaf tensor (input or parameter) and return its node id."""
        self._ensure_open()
        node = self._node_by_object.get(id(tensor))
        if node is not None:
            return node
        node = len(self._tensors)
        self._tensors.append(tensor)
        self._node_by_object[id(tensor)] = node
        return node

    def record(
        self,
        kind: str,
        operands: Sequence[Tensor],
        output: Tensor,
        saved: Dict[str, Any] = None,
    ) -> int:
        """Append a primitive; unseen operands become leaves."""
        operand_ids = tuple(self.watch(operand) for operand in operands)
        node = self.watch(output)
        self._entries.append(TapeEntry(node, kind, operand_ids, saved or {}))
        return node

    def node_of(self, tensor: Tensor) -> int:
        """
        Look up the node id of a recorded tensor.

        Raises:
            LookupFailedError: If the tensor was never recorded on this tape
        """
        node = self._node_by_object.get(id(tensor))
        if node is None:
            raise LookupFailedError(f"{tensor!r} is not recorded on this tape")
        return node

    def tensor(self, node: int) -> Tensor:
        if node < 0 or node >= len(self._tensors):
            raise LookupFailedError(f"node {node} is not on this tape")
        return self._tensors[node]

    def mark_consumed(self) -> None:
        self._ensure_open()
        self._consumed = True

    def _ensure_open(self) -> None:
        if self._consumed:
            raise TapeConsumedError("tape already consumed by a backward pass")
