"""Batched central finite differences with respect to chart coordinates."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import StepTooLarge

MAX_STEP = 1e-2

# node offsets and weights of central stencils (derivative = sum w f(x + m h) / h)
_STENCILS = {
    2: (np.array([-1.0, 1.0]), np.array([-0.5, 0.5])),
    4: (np.array([-2.0, -1.0, 1.0, 2.0]), np.array([1.0, -8.0, 8.0, -1.0]) / 12.0),
    6: (np.array([-3.0, -2.0, -1.0, 1.0, 2.0, 3.0]), np.array([-1.0, 9.0, -45.0, 45.0, -9.0, 1.0]) / 60.0),
}


def check_step(h: float) -> None:
    if not (0.0 < h <= MAX_STEP):
        raise StepTooLarge(f"finite-difference step must lie in (0, {MAX_STEP}], got {h}")


def scaled_steps(X: np.ndarray, h: float) -> np.ndarray:
    """Per-coordinate steps ``h * max(1, |x_i|)``."""
    return h * np.maximum(1.0, np.abs(X))


def gradient(f: Callable[[np.ndarray], np.ndarray], X, h: float, order: int = 4) -> np.ndarray:
    """Partial derivatives of ``f`` at a batch of points.

    ``f`` maps coordinates of shape (..., 4) to values of shape (..., *S).
    The result has shape (..., 4, *S); axis -len(S)-1 is the derivative
    direction.
    """
    check_step(h)
    offsets, weights = _STENCILS[order]
    X = np.asarray(X, dtype=float)
    steps = scaled_steps(X, h)  # (..., 4)
    eye = np.eye(4)
    # (..., dir, node, 4)
    shift = offsets[:, None] * eye[:, None, :]  # (dir, node, 4)
    pts = X[..., None, None, :] + shift * steps[..., :, None, None]
    vals = f(pts)
    extra = vals.ndim - pts.ndim + 1  # rank of the value shape S
    w = weights.reshape((len(weights),) + (1,) * extra)
    deriv = np.sum(w * vals, axis=X.ndim)  # contract node axis
    return deriv / steps.reshape(steps.shape + (1,) * extra)


def jacobian(f: Callable[[np.ndarray], np.ndarray], x, h: float, order: int = 4) -> np.ndarray:
    """Jacobian ``J[a, i] = d f_a / d x^i`` of a vector map at a single point."""
    d = gradient(f, np.asarray(x, dtype=float), h, order)  # (4, m)
    return np.moveaxis(d, 0, -1)
