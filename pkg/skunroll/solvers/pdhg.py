"""Primal-dual hybrid gradient for min_x 1/2 ||A x - b||^2 + r(x)."""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from skunroll.common import logger
from skunroll.common.typing import NDArrayF
from skunroll.imaging.containers import Image, Sinogram
from skunroll.prox.operators import _prox_conjugate_data, _prox_regularizer, _regularizer_value
from skunroll.prox.terms import DataTerm, Regularizer
from skunroll.tomo.exceptions import GridMismatchException
from skunroll.tomo.ledger import CostLedger
from skunroll.tomo.operators import LinearOperatorBase
from skunroll.solvers.configuration import PDHGConfig
from skunroll.solvers.exceptions import SolverDivergenceException
from skunroll.solvers.power_method import power_method_norm
from skunroll.solvers.trace import SolveTrace

STEP_SIZE_SAFETY = 0.95


def resolve_step_sizes(op: LinearOperatorBase, cfg: PDHGConfig, solver: str) -> Tuple[float, float]:
    """Fills missing step sizes from the operator norm and warns when sigma * tau * ||A||^2 > 1"""
    if cfg.sigma is not None and cfg.tau is not None:
        sigma, tau = cfg.sigma, cfg.tau
        # only needed for the warning
        norm = power_method_norm(op, cfg.power_iterations, cfg.seed)
    else:
        norm = power_method_norm(op, cfg.power_iterations, cfg.seed)
        default = STEP_SIZE_SAFETY / norm if norm > 0 else 1.0
        sigma = cfg.sigma if cfg.sigma is not None else default
        tau = cfg.tau if cfg.tau is not None else default
    if sigma * tau * norm ** 2 > 1.0:
        logger.warning(f"{solver} step sizes sigma={sigma} tau={tau} exceed the convergence bound for ||A||={norm}")
    return sigma, tau


def objective_value(ops: Sequence[LinearOperatorBase], data_rows: Sequence[NDArrayF], reg: Regularizer, x: NDArrayF) -> float:
    """1/2 sum_i ||A_i x - b_i||^2 + r(x), computed without charging"""
    value = 0.0
    for op, b in zip(ops, data_rows):
        value += 0.5 * float(np.sum((op.apply(x) - b) ** 2))
    return value + _regularizer_value(reg, x)


def _check_finite(solver: str, iteration: int, *arrays: NDArrayF) -> None:
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise SolverDivergenceException(solver, iteration)


def _check_shapes(op: LinearOperatorBase, term: DataTerm, x0: Image) -> None:
    if x0.values.shape != op.domain_shape:
        raise GridMismatchException(op.domain_shape, x0.values.shape)
    if term.data.values.shape != op.range_shape:
        raise GridMismatchException(op.range_shape, term.data.values.shape)


def pdhg_solve(op: LinearOperatorBase,
               term: DataTerm,
               reg: Regularizer,
               cfg: PDHGConfig,
               x0: Image,
               ledger: Optional[CostLedger] = None) -> SolveTrace:
    """Runs `cfg.iterations` PDHG steps from `x0` with a zero dual start.

    Primal extrapolation:
        y+ = prox_{sigma f*}(y + sigma A xbar), x+ = prox_{tau r}(x - tau A^T y+), xbar = x+ + beta (x+ - x)
    Dual extrapolation keeps z = A^T y and moves the momentum step to it:
        x+ = prox_{tau r}(x - tau zbar), y+ = prox_{sigma f*}(y + sigma A x+), zbar = z+ + beta (z+ - z)
    Either form costs one forward and one adjoint product per iteration.
    """
    _check_shapes(op, term, x0)
    ledger = ledger or CostLedger()
    sigma, tau = resolve_step_sizes(op, cfg, "PDHG")
    beta = cfg.momentum_beta
    b = term.data.values
    x = x0.values.copy()
    y = np.zeros(op.range_shape, dtype=x.dtype)
    q: Optional[NDArrayF] = None
    objectives: List[float] = [objective_value([op], [b], reg, x)]
    costs = [ledger.accumulated_cost]

    if cfg.extrapolation == "primal":
        x_bar = x
        for k in range(1, cfg.iterations + 1):
            y = _prox_conjugate_data(b, y + sigma * op.apply(x_bar, ledger), sigma)
            x_new, q = _prox_regularizer(reg, x - tau * op.apply_adjoint(y, ledger), tau, q)
            x_bar = x_new + beta * (x_new - x)
            x = x_new
            _check_finite("PDHG", k, x, y)
            objectives.append(objective_value([op], [b], reg, x))
            costs.append(ledger.accumulated_cost)
    else:
        z = np.zeros_like(x)
        z_bar = z
        for k in range(1, cfg.iterations + 1):
            x, q = _prox_regularizer(reg, x - tau * z_bar, tau, q)
            y_new = _prox_conjugate_data(b, y + sigma * op.apply(x, ledger), sigma)
            dz = op.apply_adjoint(y_new - y, ledger)
            z = z + dz
            z_bar = z + beta * dz
            y = y_new
            _check_finite("PDHG", k, x, y)
            objectives.append(objective_value([op], [b], reg, x))
            costs.append(ledger.accumulated_cost)

    logger.info(f"PDHG finished {cfg.iterations} iterations with objective {objectives[-1]} at cost {ledger.accumulated_cost}")
    return SolveTrace(objectives, Image(x), Sinogram(y), ledger, costs)
