from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from skunroll.common.typing import TFloatDtype
from skunroll.autodiff.exceptions import TensorShapeException
from skunroll.autodiff.ops import add, channel, concat, conv2d, prelu
from skunroll.autodiff.tensor import Tensor

DEFAULT_HIDDEN_CHANNELS = 32
DEFAULT_KERNEL_SIZE = 5
PRELU_INITIAL_SLOPE = 0.1


@dataclass
class ProxBlockParams:
    """Three convolutions with two PReLU activations in between"""
    w1: Tensor
    b1: Tensor
    a1: Tensor
    w2: Tensor
    b2: Tensor
    a2: Tensor
    w3: Tensor
    b3: Tensor

    @property
    def in_channels(self) -> int:
        return self.w1.shape[1]

    @property
    def out_channels(self) -> int:
        return self.w3.shape[0]

    def named_tensors(self) -> Dict[str, Tensor]:
        return {"w1": self.w1, "b1": self.b1, "a1": self.a1, "w2": self.w2, "b2": self.b2, "a2": self.a2, "w3": self.w3, "b3": self.b3}

    def tensors(self) -> List[Tensor]:
        return list(self.named_tensors().values())

    def num_parameters(self) -> int:
        return sum(t.values.size for t in self.tensors())


def init_prox_block(in_channels: int,
                    rng: np.random.Generator,
                    out_channels: int = 1,
                    hidden_channels: int = DEFAULT_HIDDEN_CHANNELS,
                    kernel_size: int = DEFAULT_KERNEL_SIZE,
                    dtype: TFloatDtype = "float64") -> ProxBlockParams:
    """He scaled Gaussian kernels drawn from `rng`, zero biases and PReLU slopes of 0.1"""

    def kernel(c_out: int, c_in: int) -> Tensor:
        std = np.sqrt(2.0 / (c_in * kernel_size ** 2))
        return Tensor((rng.standard_normal((c_out, c_in, kernel_size, kernel_size)) * std).astype(dtype), requires_grad=True)

    def bias(c: int) -> Tensor:
        return Tensor(np.zeros(c, dtype=dtype), requires_grad=True)

    def slope() -> Tensor:
        return Tensor(np.asarray(PRELU_INITIAL_SLOPE, dtype=dtype), requires_grad=True)

    return ProxBlockParams(
        w1=kernel(hidden_channels, in_channels), b1=bias(hidden_channels), a1=slope(),
        w2=kernel(hidden_channels, hidden_channels), b2=bias(hidden_channels), a2=slope(),
        w3=kernel(out_channels, hidden_channels), b3=bias(out_channels)
    )


def zero_prox_block(params: ProxBlockParams) -> None:
    """Zeroes every kernel and bias in place, which makes the block a pure skip connection"""
    for name, t in params.named_tensors().items():
        if not name.startswith("a"):
            t.values = np.zeros_like(t.values)


def prox_block_apply(params: ProxBlockParams, primary_in: Tensor, extra_channels: Sequence[Tensor]) -> Tensor:
    """conv -> prelu -> conv -> prelu -> conv on the channel stack [primary_in, *extra_channels],
    plus a skip from the first channel of `primary_in`"""
    stacked = concat([primary_in] + list(extra_channels))
    if stacked.shape[0] != params.in_channels:
        raise TensorShapeException("prox block input channels", (params.in_channels,), (stacked.shape[0],))
    h = prelu(conv2d(stacked, params.w1, params.b1), params.a1)
    h = prelu(conv2d(h, params.w2, params.b2), params.a2)
    return add(conv2d(h, params.w3, params.b3), channel(primary_in, 0))
