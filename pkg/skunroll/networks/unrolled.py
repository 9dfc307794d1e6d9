"""Unrolled primal-dual networks.

Every variant runs the same layer loop. Layer k picks a subset i (always 0 without subsets) and a
grid reduction factor f_k (always 1 without sketching), then
    y_i <- D_k([y_i history, sigma_k * A_i x_s, b_i])
    x   <- P_k([x history, tau_k * A_i^T y_i])
where x_s = S(x) and A_i works on the reduced grid when f_k > 1. Option 1 upsamples the adjoint
product and keeps the primal block at full resolution, option 2 runs the primal block on sketched
inputs and upsamples its output. Forward products are charged to the ledger, their adjoints used
during backpropagation are not.
"""
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from skunroll.common.typing import NDArrayF
from skunroll.imaging.containers import Image, SamplerSpec, Sinogram
from skunroll.imaging.sampling import downsample_adjoint_array, downsample_array, upsample_adjoint_array, upsample_array
from skunroll.autodiff.blocks import prox_block_apply
from skunroll.autodiff.ops import linear_op_node, scale
from skunroll.autodiff.tensor import Tensor
from skunroll.tomo.exceptions import GridMismatchException, SubsetPartitionException
from skunroll.tomo.ledger import CostLedger
from skunroll.tomo.operators import LinearOperatorBase, ProjectionOperator
from skunroll.networks.bank import OperatorBank
from skunroll.networks.configuration import TSubsetRule, UnrollConfig
from skunroll.networks.exceptions import IncompatibleGridsException, LayerDivergenceException, UnrollParameterException
from skunroll.networks.momentum import MomentumBuffer, apply_momentum
from skunroll.networks.params import NetworkParams

TArrayMap = Callable[[NDArrayF], NDArrayF]


def _charged(op_apply: Callable[..., NDArrayF], ledger: Optional[CostLedger]) -> TArrayMap:
    def apply(v: NDArrayF) -> NDArrayF:
        return op_apply(v, ledger)
    return apply


def _uncharged(op_apply: Callable[..., NDArrayF]) -> TArrayMap:
    def apply(v: NDArrayF) -> NDArrayF:
        return op_apply(v)
    return apply


def _project(op: LinearOperatorBase, x: Tensor, ledger: Optional[CostLedger]) -> Tensor:
    return linear_op_node(_charged(op.apply, ledger), _uncharged(op.apply_adjoint), x)


def _backproject(op: LinearOperatorBase, y: Tensor, ledger: Optional[CostLedger]) -> Tensor:
    return linear_op_node(_charged(op.apply_adjoint, ledger), _uncharged(op.apply), y)


def _sampler(forward: Callable[[NDArrayF, int], NDArrayF], adjoint: Callable[[NDArrayF, int], NDArrayF], factor: int) -> Callable[[Tensor], Tensor]:
    def apply(x: Tensor) -> Tensor:
        return linear_op_node(lambda v: forward(v, factor), lambda v: adjoint(v, factor), x)
    return apply


class _History:
    """Current iterate, or the stacked momentum buffer when memory is enabled"""

    def __init__(self, memory: int, initial: Tensor) -> None:
        self.current = initial
        self.buffer = MomentumBuffer(memory, initial) if memory > 0 else None

    def push(self, item: Tensor) -> None:
        self.current = item
        if self.buffer is not None:
            self.buffer.push(item)

    def stacked(self) -> Tensor:
        return self.buffer.stacked() if self.buffer is not None else self.current


def _check_finite(t: Tensor, layer: int, block: str) -> None:
    if not np.all(np.isfinite(t.values)):
        raise LayerDivergenceException(layer, block)


def _subset_rows(subsets: Sequence[LinearOperatorBase], b: Sinogram, dtype: np.dtype) -> List[Tensor]:  # type: ignore[type-arg]
    if len(subsets) == 1:
        if b.values.shape != subsets[0].range_shape:
            raise GridMismatchException(subsets[0].range_shape, b.values.shape)
        return [Tensor(b.values[None].astype(dtype))]
    rows = []
    for s in subsets:
        if not isinstance(s, ProjectionOperator):
            raise SubsetPartitionException("only projection operators can be split into several subsets")
        if b.values.shape != s.geometry.sinogram_shape:
            raise GridMismatchException(s.geometry.sinogram_shape, b.values.shape)
        rows.append(Tensor(b.values[list(s.angles)][None].astype(dtype)))
    return rows


def _unroll(params: NetworkParams,
            operators: Dict[int, Sequence[LinearOperatorBase]],
            factors: Sequence[int],
            b: Sinogram,
            x0: Image,
            ledger: Optional[CostLedger],
            option: int,
            rule: TSubsetRule,
            seed: int,
            subset_tags: Optional[List[int]]) -> Tensor:
    if len(factors) != params.num_layers:
        raise UnrollParameterException("factors", len(factors), f"one factor per layer ({params.num_layers})")
    full = operators[1]
    m = len(full)
    if x0.values.shape != full[0].domain_shape:
        raise GridMismatchException(full[0].domain_shape, x0.values.shape)
    dtype = params.primal_blocks[0].w1.dtype if params.num_layers else x0.values.dtype
    memory = params.momentum_memory
    rng = np.random.default_rng(seed)
    b_rows = _subset_rows(full, b, dtype)

    x = Tensor(x0.values[None].astype(dtype))
    x_history = _History(memory, x)
    y_histories = [_History(memory, Tensor(np.zeros((1,) + op.range_shape, dtype=dtype))) for op in full]

    for k in range(params.num_layers):
        i = k % m if rule == "cyclic" else int(rng.integers(m))
        if subset_tags is not None:
            subset_tags.append(i)
        factor = factors[k]
        op = operators[factor][i]
        down = _sampler(downsample_array, downsample_adjoint_array, factor)
        up = _sampler(upsample_array, upsample_adjoint_array, factor)

        x_in = x if factor == 1 else down(x)
        dual_extra = [scale(_project(op, x_in, ledger), params.sigmas[k]), b_rows[i]]
        y_history = y_histories[i]
        if y_history.buffer is not None:
            y = apply_momentum(y_history.buffer, params.dual_blocks[k], dual_extra)
        else:
            y = prox_block_apply(params.dual_blocks[k], y_history.current, dual_extra)
        _check_finite(y, k, "dual")
        y_history.push(y)

        step = _backproject(op, y, ledger)
        if factor == 1:
            x = prox_block_apply(params.primal_blocks[k], x_history.stacked(), [scale(step, params.taus[k])])
        elif option == 1:
            x = prox_block_apply(params.primal_blocks[k], x_history.stacked(), [scale(up(step), params.taus[k])])
        else:
            x = up(prox_block_apply(params.primal_blocks[k], down(x_history.stacked()), [scale(step, params.taus[k])]))
        _check_finite(x, k, "primal")
        x_history.push(x)
    return x


def lpd_forward(params: NetworkParams, op: LinearOperatorBase, b: Sinogram, x0: Image, ledger: Optional[CostLedger]) -> Tensor:
    """Learned primal-dual, one full forward and one full adjoint product per layer"""
    return _unroll(params, {1: [op]}, (1,) * params.num_layers, b, x0, ledger, 1, "cyclic", 0, None)


def lspd_forward(params: NetworkParams,
                 subsets: Sequence[LinearOperatorBase],
                 b: Sinogram,
                 x0: Image,
                 ledger: Optional[CostLedger],
                 rule: TSubsetRule = "cyclic",
                 seed: int = 0,
                 subset_tags: Optional[List[int]] = None) -> Tensor:
    """Learned stochastic primal-dual, layer k updates the dual block of a single subset only"""
    return _unroll(params, {1: subsets}, (1,) * params.num_layers, b, x0, ledger, 1, rule, seed, subset_tags)


def _check_sketch(op_full: LinearOperatorBase, op_sketch: LinearOperatorBase, sampler: SamplerSpec) -> None:
    full_side, sketch_side = op_full.domain_shape[0], op_sketch.domain_shape[0]
    if sketch_side * sampler.factor != full_side or op_full.range_shape != op_sketch.range_shape:
        raise IncompatibleGridsException(full_side, sketch_side, sampler.factor)


def _sketch_factors(num_layers: int, factor: int, k_switch: int) -> List[int]:
    if not 0 <= k_switch <= num_layers:
        raise UnrollParameterException("k_switch", k_switch, f"value in [0, {num_layers}]")
    return [factor if k < k_switch else 1 for k in range(num_layers)]


def sklpd_forward(params: NetworkParams,
                  op_full: LinearOperatorBase,
                  op_sketch: LinearOperatorBase,
                  sampler: SamplerSpec,
                  b: Sinogram,
                  x0: Image,
                  ledger: Optional[CostLedger],
                  option: int,
                  k_switch: int) -> Tensor:
    """Sketched learned primal-dual, layers before `k_switch` use the operator on the reduced grid"""
    _check_sketch(op_full, op_sketch, sampler)
    operators = {1: [op_full], sampler.factor: [op_sketch]}
    factors = _sketch_factors(params.num_layers, sampler.factor, k_switch)
    return _unroll(params, operators, factors, b, x0, ledger, option, "cyclic", 0, None)


def sklspd_forward(params: NetworkParams,
                   subsets_full: Sequence[ProjectionOperator],
                   subsets_sketch: Sequence[ProjectionOperator],
                   sampler: SamplerSpec,
                   b: Sinogram,
                   x0: Image,
                   ledger: Optional[CostLedger],
                   option: int,
                   k_switch: int,
                   rule: TSubsetRule = "cyclic",
                   seed: int = 0,
                   subset_tags: Optional[List[int]] = None) -> Tensor:
    """Sketched learned stochastic primal-dual"""
    if len(subsets_full) != len(subsets_sketch):
        raise SubsetPartitionException("partitions at both resolutions must have the same number of subsets")
    for full, sketch in zip(subsets_full, subsets_sketch):
        _check_sketch(full, sketch, sampler)
        if getattr(full, "angles", None) != getattr(sketch, "angles", None):
            raise SubsetPartitionException("partitions at both resolutions must hold the same angles")
    operators = {1: subsets_full, sampler.factor: subsets_sketch}
    factors = _sketch_factors(params.num_layers, sampler.factor, k_switch)
    return _unroll(params, operators, factors, b, x0, ledger, option, rule, seed, subset_tags)


def network_forward(params: NetworkParams,
                    cfg: UnrollConfig,
                    bank: OperatorBank,
                    b: Sinogram,
                    x0: Image,
                    ledger: Optional[CostLedger],
                    seed: Optional[int] = None,
                    subset_tags: Optional[List[int]] = None) -> Tensor:
    """Runs the variant selected by `cfg`, including per layer sketch schedules.

    `seed` drives the uniform random subset rule and defaults to `cfg.seed`.
    """
    m = cfg.effective_subsets
    if m != 1 and m != bank.num_subsets:
        raise UnrollParameterException("num_subsets", m, f"the number of subsets in the operator bank ({bank.num_subsets})")
    factors = cfg.layer_factors()
    operators: Dict[int, Sequence[LinearOperatorBase]] = {}
    for factor in set(factors) | {1}:
        operators[factor] = bank.subsets(factor) if m > 1 else [bank.full(factor)]
    return _unroll(params, operators, factors, b, x0, ledger, cfg.option, cfg.subset_rule,
                   cfg.seed if seed is None else seed, subset_tags)


def reconstruct(params: NetworkParams,
                cfg: UnrollConfig,
                bank: OperatorBank,
                b: Sinogram,
                x0: Image,
                ledger: Optional[CostLedger]) -> Image:
    return Image(network_forward(params, cfg, bank, b, x0, ledger).values[0])
