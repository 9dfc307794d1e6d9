from dataclasses import dataclass
from typing import Literal, Optional

from skunroll.solvers.exceptions import SolverParameterException

TExtrapolation = Literal["primal", "dual"]


@dataclass(frozen=True)
class PDHGConfig:
    """Step sizes and schedule of PDHG and SPDHG.

    Unset `sigma` and `tau` default to 0.95 / ||A|| estimated by the power method. `extrapolation`
    selects which variable receives the momentum step in PDHG, SPDHG always extrapolates the dual.
    """
    sigma: Optional[float] = None
    tau: Optional[float] = None
    momentum_beta: float = 1.0
    iterations: int = 100
    seed: int = 0
    num_subsets: int = 1
    extrapolation: TExtrapolation = "primal"
    power_iterations: int = 50

    def __post_init__(self) -> None:
        for name in ("sigma", "tau"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise SolverParameterException(name, value, "> 0")
        if not 0.0 <= self.momentum_beta <= 1.0:
            raise SolverParameterException("momentum_beta", self.momentum_beta, "value in [0, 1]")
        if self.iterations < 1:
            raise SolverParameterException("iterations", self.iterations, ">= 1")
        if self.num_subsets < 1:
            raise SolverParameterException("num_subsets", self.num_subsets, ">= 1")
        if self.extrapolation not in ("primal", "dual"):
            raise SolverParameterException("extrapolation", self.extrapolation, "primal or dual")
        if self.power_iterations < 1:
            raise SolverParameterException("power_iterations", self.power_iterations, ">= 1")
