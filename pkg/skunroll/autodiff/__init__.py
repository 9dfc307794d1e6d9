from .tensor import Tensor, Tape, backward  # noqa: F401
from .ops import conv2d, prelu, concat, add, sub, scale, channel, linear_op_node, total, half_sq_norm, mse  # noqa: F401
from .blocks import ProxBlockParams, init_prox_block, zero_prox_block, prox_block_apply  # noqa: F401
from .adam import AdamState, adam_step  # noqa: F401
from .gradcheck import gradient_check  # noqa: F401
