import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, NamedTuple, Optional, Type

import numpy as np

from skunroll.common import logger
from skunroll.common.file_storage import FileStorage
from skunroll.common.json import json
from skunroll.imaging.containers import Image
from skunroll.imaging.metrics import psnr, ssim
from skunroll.imaging.raw_format import save_array
from skunroll.tomo.fbp import fbp_reconstruct
from skunroll.tomo.ledger import CostLedger
from skunroll.networks.bank import OperatorBank
from skunroll.networks.checkpoint import load_checkpoint
from skunroll.networks.cost import operator_cost
from skunroll.networks.unrolled import reconstruct
from skunroll.harness.configuration import RunConfiguration, benchmark_variants
from skunroll.harness.dataset import Dataset
from skunroll.harness.exceptions import GeometryMismatchException
from skunroll.harness.previews import save_preview

REPORT_COLUMNS = ("method", "operator_cost", "measured_cost", "psnr_mean", "ssim_mean", "operator_seconds")
FBP_METHOD = "fbp"


class BenchmarkRow(NamedTuple):
    method: str
    operator_cost: float
    measured_cost: float
    psnr_mean: float
    ssim_mean: float
    operator_seconds: float


@dataclass
class BenchmarkReport:
    rows: List[BenchmarkRow]

    def to_csv(self) -> str:
        lines = [",".join(REPORT_COLUMNS)]
        lines.extend(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"rows": [row._asdict() for row in self.rows]}, indent=2)

    def format_table(self) -> str:
        lines = [f"{'method':<10} {'cost':>8} {'measured':>9} {'PSNR':>8} {'SSIM':>7}"]
        for r in self.rows:
            lines.append(f"{r.method:<10} {r.operator_cost:>8.3f} {r.measured_cost:>9.3f} {r.psnr_mean:>8.3f} {r.ssim_mean:>7.4f}")
        return "\n".join(lines)

    def save(self, storage: FileStorage, name: str = "report") -> None:
        storage.save(name + ".csv", self.to_csv())
        storage.save(name + ".json", self.to_json())


def _evaluate(method: str,
              test: Dataset,
              reconstruct_item: Callable[[int, CostLedger], Image],
              cost: Fraction,
              out: Optional[FileStorage],
              previews: int,
              record_wall_time: bool) -> BenchmarkRow:
    ledger = CostLedger()
    psnrs, ssims = [], []
    if out is not None:
        out.create_folder(method, exists_ok=True)
    for i, item in enumerate(test.items):
        recon = reconstruct_item(i, ledger)
        psnrs.append(psnr(recon, item.image))
        ssims.append(ssim(recon, item.image))
        if out is not None:
            save_array(out, f"{method}/{i:05d}.uskd", recon.values)
            if i < previews:
                save_preview(out, f"{method}/{i:05d}.pgm", recon)
    measured = float(ledger.accumulated_cost) / max(len(test), 1)
    seconds = ledger.operator_seconds if record_wall_time else 0.0
    row = BenchmarkRow(method, float(cost), measured, float(np.mean(psnrs)), float(np.mean(ssims)), seconds)
    logger.info(f"Benchmarked {method}: cost {row.operator_cost} PSNR {row.psnr_mean:.3f} SSIM {row.ssim_mean:.4f}")
    return row


def run_benchmark(C: Type[RunConfiguration], test: Dataset, checkpoints_path: str, reconstructions: Optional[FileStorage] = None) -> BenchmarkReport:
    """Scores the FBP baseline and every configured variant's checkpoint on the test set.

    FBP is reported with cost 1: its backprojection is charged as a single full adjoint product.
    """
    if len(test) == 0:
        logger.warning("Benchmark runs on an empty test set")
    filter_name = C.SOLVER_FBP_FILTER
    side = test.geometry.full_grid_side
    x0s = [fbp_reconstruct(test.geometry, item.sinogram, side, filter_name) for item in test.items]  # type: ignore[arg-type]

    def _fbp(i: int, ledger: CostLedger) -> Image:
        ledger.charge("adjoint", Fraction(1))
        return x0s[i]

    rows = [_evaluate(FBP_METHOD, test, _fbp, Fraction(1), reconstructions, C.BENCHMARK_PREVIEWS, C.BENCHMARK_RECORD_WALL_TIME)]
    for variant in benchmark_variants(C):
        path = os.path.join(checkpoints_path, variant)
        checkpoint = load_checkpoint(path)
        if checkpoint.geometry != test.geometry:
            raise GeometryMismatchException(path, test.geometry.as_dict(), checkpoint.geometry.as_dict())
        cfg = checkpoint.config
        bank = OperatorBank(checkpoint.geometry, cfg.effective_subsets, C.UNROLL_SUBSET_SCHEME)  # type: ignore[arg-type]

        def _network(i: int, ledger: CostLedger) -> Image:
            return reconstruct(checkpoint.params, cfg, bank, test.items[i].sinogram, x0s[i], ledger)

        rows.append(_evaluate(variant, test, _network, operator_cost(cfg), reconstructions, C.BENCHMARK_PREVIEWS,
                              C.BENCHMARK_RECORD_WALL_TIME))
    return BenchmarkReport(rows)
