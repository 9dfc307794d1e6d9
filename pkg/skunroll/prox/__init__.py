from .terms import DataTerm, Regularizer  # noqa: F401
from .operators import (  # noqa: F401
    prox_conjugate_data, soft_threshold, prox_box, prox_tv, prox_tv_dual_objectives, prox_regularizer,
    regularizer_value, data_value, tv_norm
)
