from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from skunroll.autodiff.blocks import ProxBlockParams, init_prox_block, zero_prox_block
from skunroll.autodiff.tensor import Tensor
from skunroll.networks.configuration import UnrollConfig

INITIAL_STEP_SIZE = 1.0


@dataclass
class NetworkParams:
    """Per layer dual and primal block parameters with the trainable step sizes sigma_k and tau_k"""
    dual_blocks: List[ProxBlockParams]
    primal_blocks: List[ProxBlockParams]
    sigmas: List[Tensor]
    taus: List[Tensor]

    @property
    def num_layers(self) -> int:
        return len(self.primal_blocks)

    @property
    def momentum_memory(self) -> int:
        # the primal block sees P + 1 history channels and the step channel
        return self.primal_blocks[0].in_channels - 2 if self.primal_blocks else 0

    def named_tensors(self) -> Dict[str, Tensor]:
        named: Dict[str, Tensor] = {}
        for k in range(self.num_layers):
            for block, params in (("dual", self.dual_blocks[k]), ("primal", self.primal_blocks[k])):
                for name, t in params.named_tensors().items():
                    named[f"layer{k}.{block}.{name}"] = t
            named[f"layer{k}.sigma"] = self.sigmas[k]
            named[f"layer{k}.tau"] = self.taus[k]
        return named

    def tensors(self) -> List[Tensor]:
        return list(self.named_tensors().values())

    def num_parameters(self) -> int:
        return sum(t.values.size for t in self.tensors())

    def copy_values(self) -> Dict[str, np.ndarray]:  # type: ignore[type-arg]
        return {name: t.values.copy() for name, t in self.named_tensors().items()}


def dual_in_channels(momentum_memory: int) -> int:
    # dual history, sigma * A x, b
    return momentum_memory + 3


def primal_in_channels(momentum_memory: int) -> int:
    # primal history, tau * A^T y
    return momentum_memory + 2


def init_network_params(cfg: UnrollConfig) -> NetworkParams:
    """Seeded initialization, the same config always yields bit identical parameters"""
    rng = np.random.default_rng(cfg.seed)
    dual, primal, sigmas, taus = [], [], [], []
    for k in range(cfg.num_layers):
        dual.append(init_prox_block(dual_in_channels(cfg.momentum_memory), rng, hidden_channels=cfg.hidden_channels, dtype=cfg.dtype))
        primal.append(init_prox_block(primal_in_channels(cfg.momentum_memory), rng, hidden_channels=cfg.hidden_channels, dtype=cfg.dtype))
        sigmas.append(Tensor(np.asarray(INITIAL_STEP_SIZE, dtype=cfg.dtype), requires_grad=True, name=f"layer{k}.sigma"))
        taus.append(Tensor(np.asarray(INITIAL_STEP_SIZE, dtype=cfg.dtype), requires_grad=True, name=f"layer{k}.tau"))
    return NetworkParams(dual, primal, sigmas, taus)


def zero_network_params(params: NetworkParams) -> NetworkParams:
    """Zeroes all convolution kernels and biases in place, step sizes are kept"""
    for block in params.dual_blocks + params.primal_blocks:
        zero_prox_block(block)
    return params
