import threading
from fractions import Fraction
from typing import Literal, NamedTuple

from skunroll.tomo.exceptions import OperatorParameterException

TProductKind = Literal["forward", "adjoint"]


class LedgerSnapshot(NamedTuple):
    accumulated_cost: Fraction
    num_forward: int
    num_adjoint: int
    operator_seconds: float


class CostLedger:
    """Weighted count of forward/adjoint products.

    One unit of cost is one full-resolution, all-angle operator application. Costs are kept as exact
    fractions so that e.g. 12 layers of quarter-subset, half-resolution products sum to exactly 3.
    Charging is atomic so a ledger may be shared by threads.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._cost = Fraction(0)
        self._num_forward = 0
        self._num_adjoint = 0
        self._seconds = 0.0

    def charge(self, kind: TProductKind, weight: Fraction, seconds: float = 0.0) -> None:
        if weight < 0:
            raise OperatorParameterException("weight", weight, "a non-negative cost")
        with self._lock:
            self._cost += weight
            if kind == "forward":
                self._num_forward += 1
            else:
                self._num_adjoint += 1
            self._seconds += seconds

    @property
    def accumulated_cost(self) -> Fraction:
        return self._cost

    @property
    def num_forward(self) -> int:
        return self._num_forward

    @property
    def num_adjoint(self) -> int:
        return self._num_adjoint

    @property
    def operator_seconds(self) -> float:
        return self._seconds

    def snapshot(self) -> LedgerSnapshot:
        with self._lock:
            return LedgerSnapshot(self._cost, self._num_forward, self._num_adjoint, self._seconds)

    def __repr__(self) -> str:
        return f"CostLedger(cost={self._cost}, forward={self._num_forward}, adjoint={self._num_adjoint})"
