from typing import List

import numpy as np

from skunroll.tomo.operators import LinearOperatorBase
from skunroll.solvers.exceptions import SolverParameterException


def power_method_estimates(op: LinearOperatorBase, iters: int, seed: int) -> List[float]:
    """Successive estimates sqrt(||A x_k||^2 / ||x_k||^2) with x_k = (A^T A)^k x_0, non-decreasing in k"""
    if iters < 1:
        raise SolverParameterException("iters", iters, ">= 1")
    x = np.random.default_rng(seed).standard_normal(op.domain_shape)
    x /= np.linalg.norm(x)
    estimates: List[float] = []
    for _ in range(iters):
        ax = op.apply(x)
        estimates.append(float(np.linalg.norm(ax)))
        x = op.apply_adjoint(ax)
        norm = np.linalg.norm(x)
        if norm == 0:
            # x is in the null space, nothing more to learn
            estimates.extend([estimates[-1]] * (iters - len(estimates)))
            break
        x /= norm
    return estimates


def power_method_norm(op: LinearOperatorBase, iters: int, seed: int) -> float:
    """Largest singular value of `op`, products are not charged to any ledger"""
    return power_method_estimates(op, iters, seed)[-1]
