from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from skunroll.common.typing import NDArrayF
from skunroll.autodiff.exceptions import OptimizerParameterException, TensorShapeException
from skunroll.autodiff.tensor import Tensor


@dataclass
class AdamState:
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    step: int = 0
    first_moments: List[NDArrayF] = field(default_factory=list)
    second_moments: List[NDArrayF] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.lr < 0:
            raise OptimizerParameterException("lr", self.lr, ">= 0")
        for name in ("beta1", "beta2"):
            value = getattr(self, name)
            if not 0.0 <= value < 1.0:
                raise OptimizerParameterException(name, value, "value in [0, 1)")
        if not self.epsilon > 0:
            raise OptimizerParameterException("epsilon", self.epsilon, "> 0")


def adam_step(state: AdamState, params: Sequence[Tensor], grads: Sequence[NDArrayF]) -> None:
    """Bias corrected Adam update, writes new values into `params` in place"""
    if len(params) != len(grads):
        raise TensorShapeException("adam gradients", (len(params),), (len(grads),))
    for p, g in zip(params, grads):
        if p.shape != g.shape:
            raise TensorShapeException(f"adam gradient of {p.name or 'parameter'}", p.shape, g.shape)
    if not state.first_moments:
        state.first_moments = [np.zeros_like(p.values) for p in params]
        state.second_moments = [np.zeros_like(p.values) for p in params]
    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step
    for i, (p, g) in enumerate(zip(params, grads)):
        m = state.beta1 * state.first_moments[i] + (1.0 - state.beta1) * g
        v = state.beta2 * state.second_moments[i] + (1.0 - state.beta2) * g * g
        state.first_moments[i], state.second_moments[i] = m, v
        update = state.lr * (m / correction1) / (np.sqrt(v / correction2) + state.epsilon)
        p.values = (p.values - update).astype(p.values.dtype)
