from .configuration import PDHGConfig  # noqa: F401
from .power_method import power_method_norm, power_method_estimates  # noqa: F401
from .pdhg import pdhg_solve, objective_value  # noqa: F401
from .spdhg import spdhg_solve  # noqa: F401
from .trace import SolveTrace  # noqa: F401
