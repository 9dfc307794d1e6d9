from .configuration import RunConfiguration, ProductionRunConfiguration, SECTIONS  # noqa: F401
from .phantoms import PhantomSpec, generate_phantom  # noqa: F401
from .measurements import NoiseSpec, simulate_measurements  # noqa: F401
from .dataset import Dataset, DatasetItem, generate_dataset, save_dataset, load_dataset  # noqa: F401
from .benchmark import BenchmarkReport, run_benchmark  # noqa: F401
