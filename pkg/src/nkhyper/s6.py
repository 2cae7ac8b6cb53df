"""The nearly Kaehler six-sphere.

S6 is the unit sphere in Im(O) = R^7 with the round metric and
JX = x cross X. The Levi-Civita connection is the Euclidean derivative
projected to the tangent space, so G = nabla J can be computed directly by
finite differences along great circles. The closed form G(X, Y) =
tangential part of X cross Y serves as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fd, quat
from .checks import Check
from .quat import DomainError
from .riemann import FD_STEP, Chart

TANGENCY_TOL = 1e-10
FD_STEP_S6 = 1e-4


def _tangent_part(x, z):
    return z - np.sum(z * x, axis=-1, keepdims=True) * x


def check_tangent(x, z, tol=TANGENCY_TOL):
    scale = max(1.0, float(np.max(np.abs(z))))
    if np.max(np.abs(np.sum(np.asarray(x) * np.asarray(z), axis=-1))) > tol * scale:
        raise DomainError("vector is not tangent to S6 at the base point")


def j_apply(x, z):
    return quat.cross7(x, z)


def exp_map(x, v):
    """Great-circle exponential map at x, vectorised over leading axes."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    r = np.linalg.norm(v, axis=-1, keepdims=True)
    return np.cos(r) * x + quat._sinc(r) * v


def tangent_basis(x):
    """Orthonormal basis of the tangent space at x, as columns of a 7x6 array."""
    x = np.asarray(x, dtype=float)
    q, _ = np.linalg.qr(np.column_stack([x, np.eye(7)]))
    basis = q[:, 1:7]
    # fix orientation so that (x, basis) is positively oriented
    if np.linalg.det(np.column_stack([x, basis])) < 0:
        basis[:, -1] *= -1
    return basis


@dataclass(frozen=True, eq=False)
class PointS6:
    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        if self.x.shape != (7,) or abs(np.linalg.norm(self.x) - 1.0) > 1e-12:
            raise DomainError("a point of S6 is a unit 7-vector")

    @classmethod
    def random(cls, gen) -> PointS6:
        v = gen.standard_normal(7)
        return cls(v / np.linalg.norm(v))

    def same_as(self, other: PointS6) -> bool:
        return bool(np.array_equal(self.x, other.x))


@dataclass(frozen=True, eq=False)
class TangentS6:
    base: PointS6
    X: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "X", np.asarray(self.X, dtype=float))
        check_tangent(self.base.x, self.X)

    @classmethod
    def random(cls, base: PointS6, gen) -> TangentS6:
        return cls(base, _tangent_part(base.x, gen.standard_normal(7)))

    def __add__(self, other):
        _same_base(self, other)
        return TangentS6(self.base, self.X + other.X)

    def __sub__(self, other):
        _same_base(self, other)
        return TangentS6(self.base, self.X - other.X)

    def __mul__(self, s):
        return TangentS6(self.base, float(s) * self.X)

    __rmul__ = __mul__

    def __neg__(self):
        return TangentS6(self.base, -self.X)


def _same_base(*vectors):
    for z in vectors[1:]:
        if not vectors[0].base.same_as(z.base):
            raise DomainError("vectors live at different base points")


def J6(z: TangentS6) -> TangentS6:
    return TangentS6(z.base, j_apply(z.base.x, z.X))


def metric(z: TangentS6, w: TangentS6) -> float:
    _same_base(z, w)
    return float(z.X @ w.X)


def connection6(field, z: TangentS6, h=FD_STEP_S6) -> np.ndarray:
    """nabla_X Y at the base of z = X, for a vectorised field (m, 7) -> (m, 7).

    The field is sampled along the great circle t -> exp_x(t X).
    """
    x = z.base.x
    n = np.linalg.norm(z.X)
    if n == 0.0:
        return np.zeros(7)
    unit = z.X / n
    offsets, weights = fd.STENCILS[fd.DEFAULT_ORDER]
    pts = exp_map(x, (h * offsets)[:, None] * unit[None, :])
    vals = np.asarray(field(pts))
    deriv = n * np.einsum("o,oi->i", weights, vals) / h
    return _tangent_part(x, deriv)


def _projected(y):
    return lambda pts: _tangent_part(pts, np.broadcast_to(y, pts.shape))


def G6(x: TangentS6, y: TangentS6, h=FD_STEP_S6) -> TangentS6:
    """(nabla_X J) Y by finite differences, extending Y by tangential projection."""
    _same_base(x, y)
    ext = _projected(y.X)
    jext = lambda pts: j_apply(pts, ext(pts))  # noqa: E731
    val = connection6(jext, x, h) - j_apply(x.base.x, connection6(ext, x, h))
    return TangentS6(x.base, _tangent_part(x.base.x, val))


def G6_closed(x: TangentS6, y: TangentS6) -> TangentS6:
    """Tangential part of X cross Y."""
    _same_base(x, y)
    return TangentS6(x.base, _tangent_part(x.base.x, quat.cross7(x.X, y.X)))


def g_array(x, z, w):
    return np.sum(np.asarray(z) * np.asarray(w), axis=-1)


def g6_closed_apply(x, z, w):
    return _tangent_part(x, quat.cross7(z, w))


def curvature_apply(x, a, b, c):
    """Unit sphere: R(X, Y)Z = g(Y, Z)X - g(X, Z)Y."""
    return g_array(x, b, c)[..., None] * a - g_array(x, a, c)[..., None] * b


class ChartS6(Chart):
    """Exponential chart of S6 at a base point, with an orthonormal tangent basis."""

    def __init__(self, base: PointS6, basis=None):
        self.base = base
        self.E = tangent_basis(base.x) if basis is None else np.asarray(basis, dtype=float)

    def point(self, c):
        c = np.atleast_2d(c)
        return exp_map(self.base.x, c @ self.E.T)

    def coords(self, pts):
        pts = np.atleast_2d(pts)
        cosr = np.clip(pts @ self.base.x, -1.0, 1.0)
        w = pts - cosr[:, None] * self.base.x
        s = np.linalg.norm(w, axis=-1)
        r = np.arctan2(s, cosr)
        scale = np.where(s < 1e-300, 1.0, r / np.where(s < 1e-300, 1.0, s))
        return (scale[:, None] * w) @ self.E

    def frame(self, c):
        c = np.atleast_2d(np.asarray(c, dtype=float))
        v = c @ self.E.T
        r = np.linalg.norm(v, axis=-1)
        small = r < 1e-4
        rs = np.where(small, 1.0, r)
        sinc = quat._sinc(r)
        # (r cos r - sin r) / r^3, with its series near 0
        dsinc = np.where(small, -1.0 / 3.0 + r * r / 30.0, (rs * np.cos(rs) - np.sin(rs)) / rs**3)
        jac = (
            -sinc[:, None, None] * self.base.x[None, :, None] * v[:, None, :]
            + sinc[:, None, None] * np.eye(7)[None]
            + dsinc[:, None, None] * v[:, :, None] * v[:, None, :]
        )
        return jac @ self.E

    def tensors(self, c):
        c = np.atleast_2d(np.asarray(c, dtype=float))
        f = self.frame(c)
        g = np.einsum("nai,naj->nij", f, f)
        pts = self.point(c)
        jf = quat.cross7(pts[:, None, :], f.transpose(0, 2, 1)).transpose(0, 2, 1)
        jm = np.linalg.solve(g, np.einsum("nai,naj->nij", f, jf))
        return g, jm, None

    def components(self, z):
        return np.asarray(z, dtype=float) @ self.E

    def embed(self, comps):
        return np.asarray(comps, dtype=float) @ self.E.T


def identity_suite(samples=1000, seed=0, h=FD_STEP_S6, h_chart=FD_STEP):
    """Seeded residuals of the S6 structure identities, one record per identity."""
    res = {k: [] for k in ("J2", "J_isometry", "J_skew", "G_skew", "G_XX", "G_g_skew", "G_J", "G_closed")}
    gconst = []
    for i in range(samples):
        gen = quat.rng(seed, i)
        b = PointS6.random(gen)
        X, Y, Z = (TangentS6.random(b, gen) for _ in range(3))
        nx, ny, nz = (np.linalg.norm(v.X) for v in (X, Y, Z))
        jx, jy = J6(X), J6(Y)
        res["J2"].append(np.linalg.norm(J6(jx).X + X.X) / nx)
        res["J_isometry"].append(abs(metric(jx, jy) - metric(X, Y)) / (nx * ny))
        res["J_skew"].append(abs(metric(jx, Y) + metric(X, jy)) / (nx * ny))
        gxy, gyx = G6(X, Y, h), G6(Y, X, h)
        res["G_skew"].append(np.linalg.norm(gxy.X + gyx.X) / (nx * ny))
        res["G_XX"].append(np.linalg.norm(G6(X, X, h).X) / nx**2)
        res["G_g_skew"].append(abs(metric(gxy, Z) + metric(G6(X, Z, h), Y)) / (nx * ny * nz))
        res["G_J"].append(np.linalg.norm(G6(X, jy, h).X + J6(gxy).X) / (nx * ny))
        res["G_closed"].append(np.linalg.norm(gxy.X - G6_closed(X, Y).X) / (nx * ny))
        # measured, not asserted: |G(X,Y)|^2 for orthonormal X, Y with Y orthogonal to JX
        e1 = X.X / nx
        y = Y.X - (Y.X @ e1) * e1 - (Y.X @ jx.X / nx) * jx.X / nx
        e2 = TangentS6(b, y / np.linalg.norm(y))
        g12 = G6(TangentS6(b, e1), e2, h).X
        gconst.append(g12 @ g12)
    thresholds = {"J2": 1e-12, "J_isometry": 1e-12, "J_skew": 1e-12, "G_skew": 1e-5, "G_XX": 1e-5,
                  "G_g_skew": 1e-5, "G_J": 1e-5, "G_closed": 1e-5}
    checks = [Check.from_values(k, v, thresholds[k]) for k, v in res.items()]
    checks.append(Check.from_values("G_norm_constant_measured", gconst))
    return checks
