from typing import List, Optional, Sequence

import numpy as np

from skunroll.common import logger
from skunroll.common.typing import NDArrayF, Shape2D
from skunroll.imaging.containers import Image, Sinogram
from skunroll.prox.operators import _prox_conjugate_data, _prox_regularizer
from skunroll.prox.terms import DataTerm, Regularizer
from skunroll.tomo.exceptions import GridMismatchException, SubsetPartitionException
from skunroll.tomo.ledger import CostLedger
from skunroll.tomo.operators import LinearOperatorBase, ProjectionOperator, check_partition
from skunroll.solvers.configuration import PDHGConfig
from skunroll.solvers.exceptions import SolverParameterException
from skunroll.solvers.pdhg import _check_finite, objective_value, resolve_step_sizes
from skunroll.solvers.trace import SolveTrace


class _StackedOperator(LinearOperatorBase):
    """Row stack of subset operators, used only for the uncharged norm estimate"""

    def __init__(self, subsets: Sequence[LinearOperatorBase]) -> None:
        self.subsets = subsets

    @property
    def domain_shape(self) -> Shape2D:
        return self.subsets[0].domain_shape

    @property
    def range_shape(self) -> Shape2D:
        return (sum(s.range_shape[0] for s in self.subsets), self.subsets[0].range_shape[1])

    def _forward(self, values: NDArrayF) -> NDArrayF:
        return np.concatenate([s.apply(values) for s in self.subsets], axis=0)

    def _adjoint(self, values: NDArrayF) -> NDArrayF:
        splits = np.cumsum([s.range_shape[0] for s in self.subsets])[:-1]
        return sum(s.apply_adjoint(v) for s, v in zip(self.subsets, np.split(values, splits, axis=0)))


def _subset_rows(subsets: Sequence[LinearOperatorBase], term: DataTerm) -> List[NDArrayF]:
    if len(subsets) == 1:
        if term.data.values.shape != subsets[0].range_shape:
            raise GridMismatchException(subsets[0].range_shape, term.data.values.shape)
        return [term.data.values]
    if not all(isinstance(s, ProjectionOperator) for s in subsets):
        raise SubsetPartitionException("only projection operators can be split into several subsets")
    check_partition(list(subsets))  # type: ignore[arg-type]
    full = subsets[0].geometry.sinogram_shape  # type: ignore[attr-defined]
    if term.data.values.shape != full:
        raise GridMismatchException(full, term.data.values.shape)
    return [term.data.values[list(s.angles)] for s in subsets]  # type: ignore[attr-defined]


def spdhg_solve(subsets: Sequence[LinearOperatorBase],
                term: DataTerm,
                reg: Regularizer,
                cfg: PDHGConfig,
                x0: Image,
                ledger: Optional[CostLedger] = None) -> SolveTrace:
    """Stochastic PDHG over a row partition A = [A_1; ...; A_m].

    Each iteration samples one subset i uniformly with a generator seeded by `cfg.seed`, updates only the
    dual block y_i and extrapolates z = A^T y with factor 1/p_i = m:
        x+ = prox_{tau r}(x - tau zbar)
        y_i+ = prox_{sigma f_i*}(y_i + sigma A_i x+)
        dz = A_i^T (y_i+ - y_i), z+ = z + dz, zbar = z+ + beta m dz
    All subsets share sigma. With m == 1 this is PDHG with dual extrapolation.
    """
    m = len(subsets)
    if m < 1:
        raise SubsetPartitionException("no subsets given")
    if cfg.num_subsets != m:
        raise SolverParameterException("num_subsets", cfg.num_subsets, f"number of given subsets ({m})")
    rows = _subset_rows(subsets, term)
    if x0.values.shape != subsets[0].domain_shape:
        raise GridMismatchException(subsets[0].domain_shape, x0.values.shape)

    ledger = ledger or CostLedger()
    sigma, tau = resolve_step_sizes(subsets[0] if m == 1 else _StackedOperator(subsets), cfg, "SPDHG")
    beta = cfg.momentum_beta
    rng = np.random.default_rng(cfg.seed)
    x = x0.values.copy()
    ys = [np.zeros(s.range_shape, dtype=x.dtype) for s in subsets]
    z = np.zeros_like(x)
    z_bar = z
    q: Optional[NDArrayF] = None
    objectives: List[float] = [objective_value(subsets, rows, reg, x)]
    costs = [ledger.accumulated_cost]

    for k in range(1, cfg.iterations + 1):
        i = int(rng.integers(m))
        op = subsets[i]
        x, q = _prox_regularizer(reg, x - tau * z_bar, tau, q)
        y_new = _prox_conjugate_data(rows[i], ys[i] + sigma * op.apply(x, ledger), sigma)
        dz = op.apply_adjoint(y_new - ys[i], ledger)
        z = z + dz
        z_bar = z + (beta * m) * dz
        ys[i] = y_new
        _check_finite("SPDHG", k, x, y_new)
        objectives.append(objective_value(subsets, rows, reg, x))
        costs.append(ledger.accumulated_cost)

    logger.info(f"SPDHG finished {cfg.iterations} iterations over {m} subsets with objective {objectives[-1]} "
                f"at cost {ledger.accumulated_cost}")
    return SolveTrace(objectives, Image(x), Sinogram(_assemble_dual(subsets, ys)), ledger, costs)


def _assemble_dual(subsets: Sequence[LinearOperatorBase], ys: Sequence[NDArrayF]) -> NDArrayF:
    if len(subsets) == 1:
        return ys[0]
    full = np.zeros(subsets[0].geometry.sinogram_shape, dtype=ys[0].dtype)  # type: ignore[attr-defined]
    for s, y in zip(subsets, ys):
        full[list(s.angles)] = y  # type: ignore[attr-defined]
    return full
