import argparse
import dataclasses
import os
import sys
from typing import Any, NoReturn, Optional, Sequence, Type

from skunroll.common import logger
from skunroll.common.configuration import make_configuration, load_configuration_file, dump_configuration_file
from skunroll.common.exceptions import SkunrollException
from skunroll.common.file_storage import FileStorage
from skunroll.common.typing import DictStrAny
from skunroll.imaging.raw_format import save_array
from skunroll.prox.terms import DataTerm
from skunroll.tomo.fbp import fbp_reconstruct
from skunroll.tomo.geometry import Geometry, fan_beam_geometry
from skunroll.tomo.ledger import CostLedger
from skunroll.tomo.operators import adjoint_discrepancy, build_operator, partition_subsets
from skunroll.solvers.pdhg import pdhg_solve
from skunroll.solvers.spdhg import spdhg_solve
from skunroll.autodiff.gradcheck import gradient_check
from skunroll.autodiff.ops import mse
from skunroll.networks.bank import OperatorBank
from skunroll.networks.checkpoint import load_checkpoint, save_checkpoint
from skunroll.networks.configuration import VARIANTS
from skunroll.networks.params import init_network_params
from skunroll.networks.trainer import TrainingPair, train_network
from skunroll.networks.unrolled import network_forward, reconstruct
from skunroll.harness import configuration as run_config
from skunroll.harness.benchmark import run_benchmark
from skunroll.harness.configuration import SECTIONS, ProductionRunConfiguration, RunConfiguration
from skunroll.harness.dataset import generate_dataset, load_dataset, save_dataset
from skunroll.harness.exceptions import CheckFailedException, GeometryMismatchException
from skunroll.harness.measurements import NoiseSpec, simulate_measurements
from skunroll.harness.phantoms import PhantomSpec, generate_phantom
from skunroll.harness.previews import save_preview

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2
COMMANDS = ("gen-data", "train", "reconstruct", "benchmark", "adjoint-test", "grad-check")
RECONSTRUCT_METHODS = ("fbp", "pdhg", "spdhg", "network")
GRAD_CHECK_GRID = 16
GRAD_CHECK_LAYERS = 3
GRAD_CHECK_HIDDEN = 4


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as exit code 1 instead of argparse's 2"""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def _make_parser() -> _ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--config", help="Flat section.key: value YAML run configuration")
    common.add_argument("--seed", type=int, help="Overrides run.seed")
    common.add_argument("--out", help="Overrides run.out, the root folder of all run artifacts")
    common.add_argument("--variant", choices=VARIANTS, help="Overrides unroll.variant")
    common.add_argument("--epochs", type=int, help="Overrides train.epochs")
    common.add_argument("--factor", type=int, help="Overrides unroll.sketch_factor")
    common.add_argument("--subsets", type=int, help="Overrides unroll.num_subsets and solver.num_subsets")

    parser = _ArgumentParser(prog="skunroll", description="Sketched unrolled networks for tomographic reconstruction",
                             formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    subparsers = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)
    subparsers.add_parser("gen-data", parents=[common], help="Generates train and test datasets")
    subparsers.add_parser("train", parents=[common], help="Trains the selected network variant")
    reconstruct_parser = subparsers.add_parser("reconstruct", parents=[common], help="Reconstructs the test set")
    reconstruct_parser.add_argument("--method", choices=RECONSTRUCT_METHODS, help="Defaults to solver.kind")
    reconstruct_parser.add_argument("--limit", type=int, help="Reconstructs only the first N test items")
    subparsers.add_parser("benchmark", parents=[common], help="Scores FBP and trained variants on the test set")
    subparsers.add_parser("adjoint-test", parents=[common], help="Checks the projector adjoint on the configured geometry")
    subparsers.add_parser("grad-check", parents=[common], help="Compares network gradients with finite differences")
    return parser


def _resolve_configuration(args: argparse.Namespace) -> Type[RunConfiguration]:
    initial: DictStrAny = load_configuration_file(args.config, RunConfiguration) if args.config else {}
    overrides = {
        "RUN_SEED": args.seed,
        "RUN_OUT": args.out,
        "UNROLL_VARIANT": args.variant,
        "TRAIN_EPOCHS": args.epochs,
        "UNROLL_SKETCH_FACTOR": args.factor,
        "UNROLL_NUM_SUBSETS": args.subsets,
        "SOLVER_NUM_SUBSETS": args.subsets,
    }
    initial.update({k: v for k, v in overrides.items() if v is not None})
    return make_configuration(RunConfiguration, ProductionRunConfiguration, initial_values=initial)


class _RunLayout:
    """<out>/data/{train,test}, <out>/checkpoints/<variant>, <out>/logs, <out>/reconstructions and <out>/report.*"""

    def __init__(self, out: str) -> None:
        self.root = FileStorage(out, makedirs=True)
        for folder in ("data", "checkpoints", "logs", "reconstructions"):
            self.root.create_folder(folder, exists_ok=True)
        self.logs = FileStorage(self.root.make_full_path("logs"))
        self.reconstructions = FileStorage(self.root.make_full_path("reconstructions"))

    def data_path(self, split: str) -> str:
        return self.root.make_full_path(os.path.join("data", split))

    def checkpoint_path(self, variant: str) -> str:
        return self.root.make_full_path(os.path.join("checkpoints", variant))


def _gen_data(C: Type[RunConfiguration], layout: _RunLayout) -> None:
    geom = run_config.geometry(C)
    noise = run_config.noise_spec(C, C.RUN_SEED)
    for split, count in (("train", C.DATA_TRAIN_COUNT), ("test", C.DATA_TEST_COUNT)):
        dataset = generate_dataset(geom, count, C.RUN_SEED, split, C.PHANTOM_KIND, C.PHANTOM_NUM_ELLIPSES,  # type: ignore[arg-type]
                                   noise, C.DATA_POOL_TYPE, C.DATA_MAX_PARALLELISM)  # type: ignore[arg-type]
        save_dataset(layout.data_path(split), dataset)
        print(f"{split}: {count} items in {layout.data_path(split)}")


def _train(C: Type[RunConfiguration], layout: _RunLayout) -> None:
    geom = run_config.geometry(C)
    train = load_dataset(layout.data_path("train"), geom)
    cfg = run_config.unroll_config(C)
    bank = OperatorBank(geom, cfg.effective_subsets, C.UNROLL_SUBSET_SCHEME)  # type: ignore[arg-type]
    pairs = [TrainingPair(item.sinogram, item.image) for item in train.items]
    result = train_network(cfg, bank, pairs, C.TRAIN_EPOCHS, C.TRAIN_LR, C.RUN_SEED,
                           record_wall_time=C.TRAIN_RECORD_WALL_TIME, fbp_filter=C.SOLVER_FBP_FILTER)  # type: ignore[arg-type]
    save_checkpoint(layout.checkpoint_path(cfg.variant), result.params, cfg, geom)
    result.save_log(layout.logs, f"train_{cfg.variant}.csv")
    final = result.log[-1].mean_loss if result.log else float("nan")
    print(f"{cfg.variant}: {len(result.log)} epochs, final mean loss {final!r}, operator cost {result.ledger.accumulated_cost}")


def _reconstruct(C: Type[RunConfiguration], layout: _RunLayout, method: str, limit: Optional[int]) -> None:
    geom = run_config.geometry(C)
    test = load_dataset(layout.data_path("test"), geom)
    items = test.items[:limit] if limit is not None else test.items
    folder = method if method != "network" else C.UNROLL_VARIANT
    layout.reconstructions.create_folder(folder, exists_ok=True)
    op = build_operator(geom, geom.full_grid_side)
    checkpoint = load_checkpoint(layout.checkpoint_path(C.UNROLL_VARIANT)) if method == "network" else None
    if checkpoint is not None and checkpoint.geometry != geom:
        raise GeometryMismatchException(layout.checkpoint_path(C.UNROLL_VARIANT), geom.as_dict(), checkpoint.geometry.as_dict())
    bank = OperatorBank(geom, checkpoint.config.effective_subsets, C.UNROLL_SUBSET_SCHEME) if checkpoint else None  # type: ignore[arg-type]
    cfg = run_config.pdhg_config(C)
    reg = run_config.regularizer(C)
    ledger = CostLedger()
    for i, item in enumerate(items):
        x0 = fbp_reconstruct(geom, item.sinogram, geom.full_grid_side, C.SOLVER_FBP_FILTER)  # type: ignore[arg-type]
        if method == "fbp":
            recon = x0
        elif method == "network":
            recon = reconstruct(checkpoint.params, checkpoint.config, bank, item.sinogram, x0, ledger)
        else:
            term = DataTerm(item.sinogram)
            if method == "pdhg":
                trace = pdhg_solve(op, term, reg, cfg, x0, ledger)
            else:
                subsets = partition_subsets(op, C.SOLVER_NUM_SUBSETS, C.UNROLL_SUBSET_SCHEME)  # type: ignore[arg-type]
                trace = spdhg_solve(subsets, term, reg, dataclasses.replace(cfg, num_subsets=len(subsets)), x0, ledger)
            trace.save_csv(layout.reconstructions, f"{folder}/{i:05d}.trace.csv")
            recon = trace.primal
        save_array(layout.reconstructions, f"{folder}/{i:05d}.uskd", recon.values)
        save_preview(layout.reconstructions, f"{folder}/{i:05d}.pgm", recon)
    print(f"{method}: reconstructed {len(items)} items into {layout.reconstructions.make_full_path(folder)}, operator cost {ledger.accumulated_cost}")


def _benchmark(C: Type[RunConfiguration], layout: _RunLayout) -> None:
    test = load_dataset(layout.data_path("test"), run_config.geometry(C))
    report = run_benchmark(C, test, layout.root.make_full_path("checkpoints"), layout.reconstructions)
    report.save(layout.root)
    print(report.format_table())


def _adjoint_test(C: Type[RunConfiguration]) -> None:
    geom = run_config.geometry(C)
    op = build_operator(geom, geom.full_grid_side)
    cases = [("full", op)]
    if C.UNROLL_NUM_SUBSETS > 1:
        cases.extend((f"subset {i}", s) for i, s in enumerate(partition_subsets(op, C.UNROLL_NUM_SUBSETS, C.UNROLL_SUBSET_SCHEME)))  # type: ignore[arg-type]
    if C.UNROLL_SKETCH_FACTOR > 1:
        cases.append((f"sketch x{C.UNROLL_SKETCH_FACTOR}", build_operator(geom, geom.full_grid_side // C.UNROLL_SKETCH_FACTOR)))
    worst = 0.0
    for name, case_op in cases:
        discrepancy = adjoint_discrepancy(case_op, C.RUN_ADJOINT_TRIALS, C.RUN_SEED)
        worst = max(worst, discrepancy)
        print(f"{name}: adjoint discrepancy {discrepancy!r}")
    if worst > C.RUN_ADJOINT_TOLERANCE:
        raise CheckFailedException("adjoint test", worst, C.RUN_ADJOINT_TOLERANCE)


def _grad_check_geometry(C: Type[RunConfiguration], num_angles: int) -> Geometry:
    if C.GEOMETRY_KIND == "fan":
        return fan_beam_geometry(GRAD_CHECK_GRID, num_angles, 2 * GRAD_CHECK_GRID)
    return Geometry("parallel", num_angles, 2 * GRAD_CHECK_GRID, 1.0, GRAD_CHECK_GRID)


def _grad_check(C: Type[RunConfiguration]) -> None:
    cfg = run_config.unroll_config(C)
    cfg = dataclasses.replace(cfg, num_layers=GRAD_CHECK_LAYERS, hidden_channels=GRAD_CHECK_HIDDEN, dtype="float64",
                              k_switch=None, sketch_schedule=None)
    geom = _grad_check_geometry(C, 4 * cfg.effective_subsets)
    truth = generate_phantom(PhantomSpec("shepp_logan", GRAD_CHECK_GRID))
    op = build_operator(geom, GRAD_CHECK_GRID)
    b = simulate_measurements(op, truth, NoiseSpec(enabled=False))
    x0 = fbp_reconstruct(geom, b, GRAD_CHECK_GRID)
    bank = OperatorBank(geom, cfg.effective_subsets)
    params = init_network_params(cfg)

    def _loss() -> Any:
        return mse(network_forward(params, cfg, bank, b, x0, None), truth.values[None])

    error = gradient_check(_loss, params.tensors(), C.RUN_GRAD_CHECK_PROBES, C.RUN_SEED)
    print(f"{cfg.variant}: max relative gradient error {error!r} over {C.RUN_GRAD_CHECK_PROBES} probes")
    if error > C.RUN_GRAD_CHECK_TOLERANCE:
        raise CheckFailedException("gradient check", error, C.RUN_GRAD_CHECK_TOLERANCE)


def _run(args: argparse.Namespace) -> None:
    C = _resolve_configuration(args)
    logger.init_logging_from_config(C)
    logger.init_telemetry(C)
    layout = _RunLayout(C.RUN_OUT)
    # every run leaves the configuration it resolved next to its logs
    layout.logs.save(f"{args.command}.config.yaml", dump_configuration_file(C, SECTIONS))
    if args.command == "gen-data":
        _gen_data(C, layout)
    elif args.command == "train":
        _train(C, layout)
    elif args.command == "reconstruct":
        _reconstruct(C, layout, args.method or C.SOLVER_KIND, args.limit)
    elif args.command == "benchmark":
        _benchmark(C, layout)
    elif args.command == "adjoint-test":
        _adjoint_test(C)
    else:
        _grad_check(C)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return EXIT_USAGE
    except SystemExit as ex:
        # --help
        return int(ex.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: a command is required, one of {', '.join(COMMANDS)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _run(args)
    except SkunrollException as ex:
        logger.process_internal_exception(f"{args.command} failed")
        print(f"{parser.prog} {args.command}: {ex}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
