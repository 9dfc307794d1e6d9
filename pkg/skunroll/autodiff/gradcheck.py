from typing import Callable, Sequence

import numpy as np

from skunroll.autodiff.tensor import Tape, Tensor, backward

FD_STEP = 1e-5
# relative errors of gradients below this magnitude are measured absolutely
RELATIVE_ERROR_FLOOR = 1e-3


def gradient_check(loss_fn: Callable[[], Tensor], params: Sequence[Tensor], probes: int, seed: int, h: float = FD_STEP) -> float:
    """Max relative error between tape gradients and central differences over randomly probed entries.

    `loss_fn` must rebuild the loss from the current values of `params` on every call.
    """
    with Tape() as tape:
        loss = loss_fn()
    grads = backward(tape, loss, params)
    rng = np.random.default_rng(seed)
    sizes = np.array([p.values.size for p in params])
    worst = 0.0
    for flat in rng.choice(int(sizes.sum()), size=min(probes, int(sizes.sum())), replace=False):
        which = int(np.searchsorted(np.cumsum(sizes), flat, side="right"))
        index = np.unravel_index(int(flat - (sizes[:which].sum())), params[which].shape)
        p = params[which]
        p.values = p.values.copy()
        original = p.values[index]
        p.values[index] = original + h
        plus = float(loss_fn().values)
        p.values[index] = original - h
        minus = float(loss_fn().values)
        p.values[index] = original
        numeric = (plus - minus) / (2.0 * h)
        analytic = float(grads[which][index])
        worst = max(worst, abs(analytic - numeric) / max(abs(analytic), abs(numeric), RELATIVE_ERROR_FLOOR))
    return worst
