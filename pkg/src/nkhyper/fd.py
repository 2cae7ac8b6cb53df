"""Central finite-difference stencils over batched, vectorised functions."""

import numpy as np

# first-derivative central stencils: order -> (offsets, weights)
STENCILS = {
    2: (np.array([-1.0, 1.0]), np.array([-0.5, 0.5])),
    4: (np.array([-2.0, -1.0, 1.0, 2.0]), np.array([1.0, -8.0, 8.0, -1.0]) / 12.0),
}
DEFAULT_ORDER = 4


def stencil(x, h, order=DEFAULT_ORDER):
    """Points x + o*h*e_d for every direction d and offset o.

    x has shape (n, dim); returns shape (n, dim, len(offsets), dim).
    """
    offsets, _ = STENCILS[order]
    x = np.asarray(x, dtype=float)
    dim = x.shape[-1]
    eye = np.eye(dim)
    return x[:, None, None, :] + h * offsets[None, None, :, None] * eye[None, :, None, :]


def gradient(fun, x, h, order=DEFAULT_ORDER):
    """Partial derivatives of a vectorised ``fun`` at each row of x.

    ``fun`` maps (m, dim) -> (m, ...). Returns (n, dim, ...) with the
    derivative direction on axis 1.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n, dim = x.shape
    pts = stencil(x, h, order)
    noff = pts.shape[2]
    vals = np.asarray(fun(pts.reshape(-1, dim)))
    vals = vals.reshape((n, dim, noff) + vals.shape[1:])
    _, weights = STENCILS[order]
    return np.einsum("ndo...,o->nd...", vals, weights) / h


def directional(fun, x, v, h, order=DEFAULT_ORDER):
    """Derivative of ``fun`` at x along v (both shape (n, dim))."""
    offsets, weights = STENCILS[order]
    x = np.atleast_2d(np.asarray(x, dtype=float))
    v = np.atleast_2d(np.asarray(v, dtype=float))
    n, dim = x.shape
    pts = x[:, None, :] + h * offsets[None, :, None] * v[:, None, :]
    vals = np.asarray(fun(pts.reshape(-1, dim)))
    vals = vals.reshape((n, len(offsets)) + vals.shape[1:])
    return np.einsum("no...,o->n...", vals, weights) / h
