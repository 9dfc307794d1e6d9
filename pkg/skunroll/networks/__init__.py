from .configuration import UnrollConfig, VARIANTS  # noqa: F401
from .params import NetworkParams, init_network_params, zero_network_params  # noqa: F401
from .momentum import MomentumBuffer, apply_momentum  # noqa: F401
from .bank import OperatorBank  # noqa: F401
from .cost import operator_cost  # noqa: F401
from .unrolled import lpd_forward, lspd_forward, sklpd_forward, sklspd_forward, network_forward, reconstruct  # noqa: F401
from .trainer import TrainingPair, TrainingResult, train_network  # noqa: F401
from .checkpoint import Checkpoint, save_checkpoint, load_checkpoint  # noqa: F401
