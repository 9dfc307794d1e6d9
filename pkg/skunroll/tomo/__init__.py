from .geometry import Geometry, fan_beam_geometry  # noqa: F401
from .ledger import CostLedger  # noqa: F401
from .operators import (  # noqa: F401
    LinearOperatorBase, ProjectionOperator, build_operator, forward_project, back_project, partition_subsets,
    check_partition, adjoint_discrepancy, sketch_error, sketch_adjoint_error
)
from .fbp import fbp_reconstruct  # noqa: F401
