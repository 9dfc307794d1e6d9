import numpy as np
import pytest

from skunroll.autodiff import (AdamState, Tape, Tensor, adam_step, backward, gradient_check, init_prox_block, mse,
                               prox_block_apply, zero_prox_block)
from skunroll.autodiff.exceptions import OptimizerParameterException, TensorShapeException


def _image(seed: int, channels: int = 1, side: int = 8) -> Tensor:
    return Tensor(np.random.default_rng(seed).standard_normal((channels, side, side)))


def test_init_prox_block() -> None:
    params = init_prox_block(3, np.random.default_rng(0))
    assert params.in_channels == 3
    assert params.out_channels == 1
    assert params.w1.shape == (32, 3, 5, 5)
    assert params.w2.shape == (32, 32, 5, 5)
    assert params.w3.shape == (1, 32, 5, 5)
    assert float(params.a1.values) == pytest.approx(0.1)
    assert not np.any(params.b2.values)
    assert all(t.requires_grad for t in params.tensors())
    assert params.num_parameters() == 32 * 3 * 25 + 32 + 1 + 32 * 32 * 25 + 32 + 1 + 32 * 25 + 1
    # same generator state gives the same kernels
    again = init_prox_block(3, np.random.default_rng(0))
    assert np.array_equal(params.w2.values, again.w2.values)
    assert init_prox_block(2, np.random.default_rng(0), dtype="float32").w1.dtype == np.float32


def test_zero_block_is_skip() -> None:
    params = init_prox_block(2, np.random.default_rng(1), hidden_channels=4)
    zero_prox_block(params)
    primary = _image(2, channels=2)
    out = prox_block_apply(params, primary, [])
    assert out.shape == (1, 8, 8)
    assert np.array_equal(out.values, primary.values[:1])


def test_input_channels_checked() -> None:
    params = init_prox_block(3, np.random.default_rng(1), hidden_channels=4)
    with pytest.raises(TensorShapeException):
        prox_block_apply(params, _image(0), [])


def test_delta_kernels_give_gradient_step() -> None:
    # hidden channels copy (x, g), the last convolution forms -tau * g and the skip adds x
    tau = 0.25
    params = init_prox_block(2, np.random.default_rng(0), hidden_channels=2, kernel_size=3)
    zero_prox_block(params)
    for w in (params.w1, params.w2):
        w.values[0, 0, 1, 1] = 1.0
        w.values[1, 1, 1, 1] = 1.0
    params.w3.values[0, 1, 1, 1] = -tau
    params.a1.values = np.asarray(1.0)
    params.a2.values = np.asarray(1.0)
    x, g = _image(5), _image(6)
    out = prox_block_apply(params, x, [g])
    assert np.array_equal(out.values, x.values - tau * g.values)


def test_prox_block_gradient_check() -> None:
    params = init_prox_block(2, np.random.default_rng(7), hidden_channels=4)
    primary, extra = _image(8), _image(9)
    target = np.random.default_rng(10).standard_normal((1, 8, 8))

    def _loss() -> Tensor:
        return mse(prox_block_apply(params, primary, [extra]), target)

    assert gradient_check(_loss, params.tensors(), probes=100, seed=0) <= 1e-4


def test_adam_first_step_closed_form() -> None:
    p = Tensor(np.array([1.0, -2.0, 0.5]), requires_grad=True)
    g = np.array([0.3, -4.0, 1e-3])
    state = AdamState(lr=0.01)
    adam_step(state, [p], [g])
    assert state.step == 1
    # bias corrected moments reduce to g and g^2 on the first step
    assert np.allclose(p.values, np.array([1.0, -2.0, 0.5]) - 0.01 * g / (np.abs(g) + 1e-8), rtol=0.0, atol=1e-12)


def test_adam_zero_lr_keeps_params() -> None:
    p = Tensor(np.ones(4), requires_grad=True)
    state = AdamState(lr=0.0)
    for _ in range(3):
        adam_step(state, [p], [np.full(4, 2.0)])
    assert np.array_equal(p.values, np.ones(4))
    assert state.step == 3


def test_adam_minimizes_quadratic() -> None:
    p = Tensor(np.array([3.0, -1.5]), requires_grad=True)
    state = AdamState(lr=0.05)
    for _ in range(500):
        with Tape() as tape:
            loss = mse(p, np.zeros(2))
        (g,) = backward(tape, loss, [p])
        adam_step(state, [p], [g])
    assert np.max(np.abs(p.values)) < 0.1


def test_adam_validation() -> None:
    for kwargs in ({"lr": -1.0}, {"beta1": 1.0}, {"beta2": -0.1}, {"epsilon": 0.0}):
        with pytest.raises(OptimizerParameterException):
            AdamState(**kwargs)  # type: ignore[arg-type]
    with pytest.raises(TensorShapeException):
        adam_step(AdamState(), [Tensor(np.ones(2))], [])
    with pytest.raises(TensorShapeException):
        adam_step(AdamState(), [Tensor(np.ones(2))], [np.ones(3)])
