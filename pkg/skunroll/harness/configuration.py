from typing import Optional, Tuple, Type

from skunroll.common.configuration import BasicConfiguration, ConfigIntegrityException
from skunroll.prox.terms import Regularizer
from skunroll.tomo.geometry import Geometry
from skunroll.solvers.configuration import PDHGConfig
from skunroll.networks.configuration import VARIANTS, UnrollConfig
from skunroll.harness.measurements import NoiseSpec

# prefixes of the config attributes, `geometry.num_angles` in a config file sets GEOMETRY_NUM_ANGLES
SECTIONS = ("geometry", "phantom", "noise", "data", "unroll", "solver", "train", "benchmark", "run")


class RunConfiguration(BasicConfiguration):
    GEOMETRY_KIND: str = "parallel"
    GEOMETRY_NUM_ANGLES: int = 60
    GEOMETRY_NUM_DETECTORS: int = 96
    GEOMETRY_DETECTOR_SPACING: float = 1.0
    GEOMETRY_GRID_SIDE: int = 64
    GEOMETRY_SOURCE_RADIUS: Optional[float] = None
    GEOMETRY_DETECTOR_RADIUS: Optional[float] = None
    GEOMETRY_ANGLE_RANGE: Optional[float] = None  # pi for parallel and 2 pi for fan when not set

    PHANTOM_KIND: str = "random_ellipses"
    PHANTOM_NUM_ELLIPSES: int = 8

    NOISE_ENABLED: bool = True
    NOISE_I0: float = 1e5

    DATA_TRAIN_COUNT: int = 400
    DATA_TEST_COUNT: int = 50
    DATA_POOL_TYPE: str = "thread"
    DATA_MAX_PARALLELISM: Optional[int] = None

    UNROLL_NUM_LAYERS: int = 12
    UNROLL_VARIANT: str = "lpd"
    UNROLL_NUM_SUBSETS: int = 4
    UNROLL_SUBSET_RULE: str = "cyclic"
    UNROLL_SUBSET_SCHEME: str = "interleaved"
    UNROLL_SKETCH_FACTOR: int = 2
    UNROLL_K_SWITCH: Optional[int] = None
    UNROLL_SKETCH_SCHEDULE: Optional[str] = None  # comma separated factor per layer ie. "4,4,2,2,1,1"
    UNROLL_MOMENTUM_MEMORY: int = 0
    UNROLL_HIDDEN_CHANNELS: int = 32
    UNROLL_DTYPE: str = "float32"

    SOLVER_KIND: str = "pdhg"
    SOLVER_ITERATIONS: int = 500
    SOLVER_SIGMA: Optional[float] = None
    SOLVER_TAU: Optional[float] = None
    SOLVER_MOMENTUM_BETA: float = 1.0
    SOLVER_EXTRAPOLATION: str = "primal"
    SOLVER_NUM_SUBSETS: int = 4
    SOLVER_REGULARIZER: str = "tv"
    SOLVER_STRENGTH: float = 0.01
    SOLVER_TV_INNER_ITERATIONS: int = 20
    SOLVER_FBP_FILTER: str = "ramlak"

    TRAIN_EPOCHS: int = 20
    TRAIN_LR: float = 1e-3
    TRAIN_RECORD_WALL_TIME: bool = False

    BENCHMARK_VARIANTS: str = "lpd,lspd,sklpd1,sklspd1"
    BENCHMARK_PREVIEWS: int = 4
    BENCHMARK_RECORD_WALL_TIME: bool = False

    RUN_SEED: int = 0
    RUN_OUT: str = "_storage/run"
    RUN_ADJOINT_TRIALS: int = 100
    RUN_ADJOINT_TOLERANCE: float = 1e-10
    RUN_GRAD_CHECK_PROBES: int = 100
    RUN_GRAD_CHECK_TOLERANCE: float = 1e-4

    @classmethod
    def check_integrity(cls) -> None:
        choices = {
            "GEOMETRY_KIND": ("parallel", "fan"),
            "PHANTOM_KIND": ("shepp_logan", "random_ellipses", "disk", "gaussian_blob"),
            "DATA_POOL_TYPE": ("thread", "none"),
            "UNROLL_VARIANT": VARIANTS,
            "UNROLL_SUBSET_RULE": ("cyclic", "uniform_random"),
            "UNROLL_SUBSET_SCHEME": ("interleaved", "contiguous"),
            "UNROLL_DTYPE": ("float32", "float64"),
            "SOLVER_KIND": ("fbp", "pdhg", "spdhg"),
            "SOLVER_EXTRAPOLATION": ("primal", "dual"),
            "SOLVER_REGULARIZER": ("l1", "tv", "box", "zero"),
            "SOLVER_FBP_FILTER": ("ramlak", "hann"),
        }
        for key, allowed in choices.items():
            if getattr(cls, key) not in allowed:
                raise ConfigIntegrityException(key, getattr(cls, key), f"expected one of {', '.join(allowed)}")
        for variant in benchmark_variants(cls):
            if variant not in VARIANTS:
                raise ConfigIntegrityException("BENCHMARK_VARIANTS", cls.BENCHMARK_VARIANTS, f"unknown variant {variant}")
        for key in ("DATA_TRAIN_COUNT", "DATA_TEST_COUNT", "TRAIN_EPOCHS", "BENCHMARK_PREVIEWS"):
            if getattr(cls, key) < 0:
                raise ConfigIntegrityException(key, getattr(cls, key), "must not be negative")
        if cls.NOISE_I0 <= 0:
            raise ConfigIntegrityException("NOISE_I0", cls.NOISE_I0, "must be positive")


class ProductionRunConfiguration(RunConfiguration):
    LOG_FORMAT: str = "JSON"
    LOG_LEVEL: str = "INFO"


def benchmark_variants(C: Type[RunConfiguration]) -> Tuple[str, ...]:
    return tuple(v.strip() for v in C.BENCHMARK_VARIANTS.split(",") if v.strip())


def geometry(C: Type[RunConfiguration]) -> Geometry:
    return Geometry(
        kind=C.GEOMETRY_KIND,  # type: ignore[arg-type]
        num_angles=C.GEOMETRY_NUM_ANGLES,
        num_detectors=C.GEOMETRY_NUM_DETECTORS,
        detector_spacing=C.GEOMETRY_DETECTOR_SPACING,
        full_grid_side=C.GEOMETRY_GRID_SIDE,
        source_radius=C.GEOMETRY_SOURCE_RADIUS,
        detector_radius=C.GEOMETRY_DETECTOR_RADIUS,
        angle_range=C.GEOMETRY_ANGLE_RANGE
    )


def noise_spec(C: Type[RunConfiguration], seed: int) -> NoiseSpec:
    return NoiseSpec(i0=C.NOISE_I0, seed=seed, enabled=C.NOISE_ENABLED)


def unroll_config(C: Type[RunConfiguration], variant: str = None) -> UnrollConfig:
    schedule = None
    if C.UNROLL_SKETCH_SCHEDULE:
        schedule = tuple(int(f) for f in str(C.UNROLL_SKETCH_SCHEDULE).split(","))
    return UnrollConfig(
        num_layers=C.UNROLL_NUM_LAYERS,
        variant=variant or C.UNROLL_VARIANT,  # type: ignore[arg-type]
        num_subsets=C.UNROLL_NUM_SUBSETS,
        subset_rule=C.UNROLL_SUBSET_RULE,  # type: ignore[arg-type]
        sketch_factor=C.UNROLL_SKETCH_FACTOR,
        k_switch=C.UNROLL_K_SWITCH,
        momentum_memory=C.UNROLL_MOMENTUM_MEMORY,
        seed=C.RUN_SEED,
        hidden_channels=C.UNROLL_HIDDEN_CHANNELS,
        dtype=C.UNROLL_DTYPE,  # type: ignore[arg-type]
        sketch_schedule=schedule
    )


def pdhg_config(C: Type[RunConfiguration]) -> PDHGConfig:
    return PDHGConfig(
        sigma=C.SOLVER_SIGMA,
        tau=C.SOLVER_TAU,
        momentum_beta=C.SOLVER_MOMENTUM_BETA,
        iterations=C.SOLVER_ITERATIONS,
        seed=C.RUN_SEED,
        num_subsets=C.SOLVER_NUM_SUBSETS if C.SOLVER_KIND == "spdhg" else 1,
        extrapolation=C.SOLVER_EXTRAPOLATION  # type: ignore[arg-type]
    )


def regularizer(C: Type[RunConfiguration]) -> Regularizer:
    return Regularizer(
        kind=C.SOLVER_REGULARIZER,  # type: ignore[arg-type]
        strength=C.SOLVER_STRENGTH,
        inner_iterations=C.SOLVER_TV_INNER_ITERATIONS
    )
