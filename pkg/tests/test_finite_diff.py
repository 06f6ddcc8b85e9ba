import numpy as np
import pytest

from frwkilling import StepTooLarge
from frwkilling.finite_diff import MAX_STEP, gradient, jacobian


@pytest.mark.parametrize("order", [2, 4, 6])
def test_gradient_of_polynomial(order):
    f = lambda X: X[..., 0] ** 3 + X[..., 1] * X[..., 2] - 2 * X[..., 3]
    x = np.array([0.3, -0.7, 1.2, 2.0])
    g = gradient(f, x, 1e-4, order)
    np.testing.assert_allclose(g, [3 * 0.09, 1.2, -0.7, -2.0], rtol=1e-7)


def test_gradient_batched_shapes():
    f = lambda X: np.stack([X[..., 0] * X[..., 1], np.sin(X[..., 3])], axis=-1)
    X = np.random.default_rng(0).normal(size=(5, 3, 4))
    g = gradient(f, X, 1e-5)
    assert g.shape == (5, 3, 4, 2)
    np.testing.assert_allclose(g[..., 3, 1], np.cos(X[..., 3]), rtol=1e-9)


def test_jacobian_layout():
    f = lambda X: np.stack([X[..., 0] + 2 * X[..., 1], X[..., 2] * X[..., 3], X[..., 0]], axis=-1)
    J = jacobian(f, [1.0, 2.0, 3.0, 4.0], 1e-5)
    np.testing.assert_allclose(J, [[1, 2, 0, 0], [0, 0, 4, 3], [1, 0, 0, 0]], atol=1e-9)


@pytest.mark.parametrize("h", [0.0, -1e-5, 2 * MAX_STEP])
def test_step_bounds(h):
    with pytest.raises(StepTooLarge):
        gradient(lambda X: X[..., 0], np.zeros(4), h)


def test_sixth_order_beats_second_order():
    f = lambda X: np.exp(X[..., 0])
    x = np.array([0.5, 0, 0, 0])
    err = {o: abs(gradient(f, x, 1e-2, o)[0] - np.exp(0.5)) for o in (2, 6)}
    assert err[6] < 1e-3 * err[2]
