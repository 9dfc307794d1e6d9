from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from skunroll.common.file_storage import FileStorage
from skunroll.imaging.containers import Image, Sinogram
from skunroll.tomo.ledger import CostLedger

TRACE_CSV_HEADER = "iteration,objective,cumulative_cost"


@dataclass
class SolveTrace:
    """Objective per iteration (index 0 is the initial point) with the ledger cost accumulated up to it"""
    objectives: List[float]
    primal: Image
    dual: Sinogram
    ledger: CostLedger
    costs: List[Fraction] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.objectives) - 1

    def to_csv(self) -> str:
        lines = [TRACE_CSV_HEADER]
        for i, (objective, cost) in enumerate(zip(self.objectives, self.costs)):
            lines.append(f"{i},{objective!r},{float(cost)!r}")
        return "\n".join(lines) + "\n"

    def save_csv(self, storage: FileStorage, relative_path: str) -> str:
        return storage.save(relative_path, self.to_csv())
