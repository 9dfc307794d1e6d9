from collections import deque
from typing import Deque, Sequence

import numpy as np

from skunroll.autodiff.blocks import ProxBlockParams, prox_block_apply
from skunroll.autodiff.ops import concat
from skunroll.autodiff.tensor import Tensor
from skunroll.networks.exceptions import UnrollParameterException


class MomentumBuffer:
    """The last P + 1 iterates, newest first. Missing entries before layer P read as zeros."""

    def __init__(self, memory: int, initial: Tensor) -> None:
        if memory < 1:
            raise UnrollParameterException("memory", memory, ">= 1, memoryless blocks do not use a buffer")
        self.memory = memory
        self._items: Deque[Tensor] = deque([initial], maxlen=memory + 1)
        self._zeros = Tensor(np.zeros_like(initial.values))

    def push(self, item: Tensor) -> None:
        self._items.appendleft(item)

    def __len__(self) -> int:
        return len(self._items)

    def stacked(self) -> Tensor:
        padding = [self._zeros] * (self.memory + 1 - len(self._items))
        return concat(list(self._items) + padding)


def apply_momentum(buffer: MomentumBuffer, block: ProxBlockParams, extra_channels: Sequence[Tensor]) -> Tensor:
    """Runs `block` on the P + 1 stacked history channels instead of the current iterate alone"""
    return prox_block_apply(block, buffer.stacked(), extra_channels)
