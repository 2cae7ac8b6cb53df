"""Pure numpy implementations of the batched hot kernels.

Every function here has a twin in ``_kernels.pyx`` with the same signature
and the same arithmetic; ``nkhyper.kernels`` picks one at import time.
All inputs are C-contiguous float64 batches with the batch axis first.
"""

import numpy as np

# Cayley triples (a, b, c) with e_a x e_b = e_c, 1-based.
CAYLEY_TRIPLES = ((1, 2, 3), (1, 4, 5), (1, 7, 6), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 6, 5))


def _structure_constants():
    eps = np.zeros((7, 7, 7))
    for a, b, c in CAYLEY_TRIPLES:
        a, b, c = a - 1, b - 1, c - 1
        for i, j, k in ((a, b, c), (b, c, a), (c, a, b)):
            eps[i, j, k] = 1.0
            eps[j, i, k] = -1.0
    return eps


EPS7 = _structure_constants()

_SQRT3 = np.sqrt(3.0)


def qmul(a, b):
    """Hamilton product of two (n, 4) batches in (w, x, y, z) order."""
    aw, ax, ay, az = a[:, 0], a[:, 1], a[:, 2], a[:, 3]
    bw, bx, by, bz = b[:, 0], b[:, 1], b[:, 2], b[:, 3]
    out = np.empty_like(a)
    out[:, 0] = aw * bw - ax * bx - ay * by - az * bz
    out[:, 1] = aw * bx + ax * bw + ay * bz - az * by
    out[:, 2] = aw * by - ax * bz + ay * bw + az * bx
    out[:, 3] = aw * bz + ax * by - ay * bx + az * bw
    return out


def cross7(a, b):
    """Octonion cross product of two (n, 7) batches."""
    return np.einsum("ijk,ni,nj->nk", EPS7, a, b)


def _hat(v):
    n = v.shape[0]
    k = np.zeros((n, 3, 3))
    k[:, 0, 1] = -v[:, 2]
    k[:, 0, 2] = v[:, 1]
    k[:, 1, 0] = v[:, 2]
    k[:, 1, 2] = -v[:, 0]
    k[:, 2, 0] = -v[:, 1]
    k[:, 2, 1] = v[:, 0]
    return k


def _dexp_coefficients(theta):
    # (1 - cos t)/t^2 and (t - sin t)/t^3 with Taylor tails near zero
    small = theta < 1e-3
    t = np.where(small, 1.0, theta)
    t2 = theta * theta
    c1 = np.where(small, 0.5 - t2 / 24.0 + t2 * t2 / 720.0, (1.0 - np.cos(t)) / (t * t))
    c2 = np.where(small, 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0, (t - np.sin(t)) / (t * t * t))
    return c1, c2


def dexp_left(v):
    """Left-trivialised differential of the imaginary exponential.

    Returns M with exp(v)^-1 * D exp(v)[w] = M(v) w, batch shape (n, 3, 3).
    """
    k = 2.0 * _hat(v)
    theta = 2.0 * np.sqrt(np.einsum("ni,ni->n", v, v))
    c1, c2 = _dexp_coefficients(theta)
    eye = np.broadcast_to(np.eye(3), k.shape)
    return eye - c1[:, None, None] * k + c2[:, None, None] * (k @ k)


def s3s3_chart_tensors(coords):
    """Metric, J and P of the nearly Kaehler S3xS3 in the exponential chart.

    The chart (x, y) -> (p exp(x), q exp(y)) gives coordinate-independent
    expressions for every base point (p, q), so only ``coords`` enters.
    Returns three (n, 6, 6) arrays.
    """
    mx = dexp_left(np.ascontiguousarray(coords[:, :3]))
    my = dexp_left(np.ascontiguousarray(coords[:, 3:]))
    mxi = np.linalg.inv(mx)
    myi = np.linalg.inv(my)
    n = coords.shape[0]
    g = np.empty((n, 6, 6))
    mxt = np.swapaxes(mx, 1, 2)
    myt = np.swapaxes(my, 1, 2)
    g[:, :3, :3] = (4.0 / 3.0) * (mxt @ mx)
    g[:, 3:, 3:] = (4.0 / 3.0) * (myt @ my)
    g[:, :3, 3:] = (-2.0 / 3.0) * (mxt @ my)
    g[:, 3:, :3] = (-2.0 / 3.0) * (myt @ mx)

    xy = mxi @ my
    yx = myi @ mx
    eye = np.broadcast_to(np.eye(3), (n, 3, 3))
    jm = np.empty((n, 6, 6))
    jm[:, :3, :3] = -eye / _SQRT3
    jm[:, :3, 3:] = 2.0 * xy / _SQRT3
    jm[:, 3:, :3] = -2.0 * yx / _SQRT3
    jm[:, 3:, 3:] = eye / _SQRT3
    pm = np.zeros((n, 6, 6))
    pm[:, :3, 3:] = xy
    pm[:, 3:, :3] = yx
    return g, jm, pm


def koszul(ginv, dg):
    """Christoffel symbols gamma[n, k, i, j] from dg[n, l, i, j] = d_l g_ij."""
    # t[n, i, j, l] = d_i g_jl + d_j g_il - d_l g_ij
    t = dg + dg.transpose(0, 2, 1, 3) - dg.transpose(0, 2, 3, 1)
    gamma = 0.5 * np.einsum("nkl,nijl->nkij", ginv, t)
    upper = np.triu_indices(ginv.shape[1], 1)
    gamma[:, :, upper[1], upper[0]] = gamma[:, :, upper[0], upper[1]]
    return gamma
