"""The homogeneous nearly Kaehler structure on S3 x S3.

J, g and the almost product structure P are closed-form quaternion
expressions. The Levi-Civita connection, G = nabla J and the curvature are
computed numerically in the left-translated exponential chart
(x, y) -> (p exp(x), q exp(y)); the closed curvature formula is provided
separately so that the two can be compared.

Tangent vectors at (p, q) are 8-vectors ``(U, V)`` with U tangent to S3 at p
and V tangent at q.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fd, kernels, quat
from .quat import DomainError
from .checks import Check
from .riemann import FD_STEP, FD_STEP_CURVATURE, Chart, ChristoffelData, LocalGeometry

SQRT3 = np.sqrt(3.0)
TANGENCY_TOL = 1e-10

_IM = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])


def _split(a):
    a = np.asarray(a, dtype=float)
    return a[..., :4], a[..., 4:]


def _join(u, v):
    return np.concatenate([u, v], axis=-1)


def check_tangent(pt, z, tol=TANGENCY_TOL):
    p, q = _split(pt)
    u, v = _split(z)
    scale = max(1.0, float(np.max(np.abs(z))))
    if np.max(np.abs(quat.dot(u, p))) > tol * scale or np.max(np.abs(quat.dot(v, q))) > tol * scale:
        raise DomainError("vector is not tangent to S3 x S3 at the base point")


def j_apply(pt, z):
    """JZ = (2 p q^-1 V - U, -2 q p^-1 U + V) / sqrt(3), vectorised."""
    p, q = _split(pt)
    u, v = _split(z)
    pq = quat.mul(p, quat.conj(q))
    qp = quat.conj(pq)
    return _join(2.0 * quat.mul(pq, v) - u, -2.0 * quat.mul(qp, u) + v) / SQRT3


def p_apply(pt, z):
    """PZ = (p q^-1 V, q p^-1 U), vectorised."""
    p, q = _split(pt)
    u, v = _split(z)
    pq = quat.mul(p, quat.conj(q))
    return _join(quat.mul(pq, v), quat.mul(quat.conj(pq), u))


def g_apply(pt, z, w):
    """The Hermitian metric, vectorised over leading axes."""
    p, q = _split(pt)
    u, v = _split(z)
    u2, v2 = _split(w)
    pu = quat.mul(quat.conj(p), u)
    qv = quat.mul(quat.conj(q), v)
    pu2 = quat.mul(quat.conj(p), u2)
    qv2 = quat.mul(quat.conj(q), v2)
    return (4.0 / 3.0) * (quat.dot(u, u2) + quat.dot(v, v2)) - (2.0 / 3.0) * (
        quat.dot(pu, qv2) + quat.dot(pu2, qv)
    )


def curvature_apply(pt, x, y, z):
    """Closed-form curvature tensor R(X, Y)Z of the nearly Kaehler S3 x S3."""
    g = lambda a, b: g_apply(pt, a, b)[..., None]  # noqa: E731
    jx, jy, jz = j_apply(pt, x), j_apply(pt, y), j_apply(pt, z)
    px, py = p_apply(pt, x), p_apply(pt, y)
    jpx, jpy = j_apply(pt, px), j_apply(pt, py)
    return (
        (5.0 / 12.0) * (g(y, z) * x - g(x, z) * y)
        + (1.0 / 12.0) * (g(jy, z) * jx - g(jx, z) * jy - 2.0 * g(jx, y) * jz)
        + (1.0 / 3.0) * (g(py, z) * px - g(px, z) * py + g(jpy, z) * jpx - g(jpx, z) * jpy)
    )


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True, eq=False)
class PointS3S3:
    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float))
        if abs(quat.norm(self.p) - 1.0) > quat.UNIT_TOL or abs(quat.norm(self.q) - 1.0) > quat.UNIT_TOL:
            raise DomainError("point components must be unit quaternions")

    @classmethod
    def from_array(cls, a) -> PointS3S3:
        p, q = _split(a)
        return cls(p, q)

    @classmethod
    def random(cls, gen) -> PointS3S3:
        return cls(quat.random_unit(gen), quat.random_unit(gen))

    def as_array(self) -> np.ndarray:
        return _join(self.p, self.q)

    def same_as(self, other: PointS3S3) -> bool:
        return bool(np.array_equal(self.as_array(), other.as_array()))


@dataclass(frozen=True, eq=False)
class AmbientVector:
    base: PointS3S3
    U: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "U", np.asarray(self.U, dtype=float))
        object.__setattr__(self, "V", np.asarray(self.V, dtype=float))
        check_tangent(self.base.as_array(), self.as_array(), tol=1e-10)

    @classmethod
    def from_array(cls, base: PointS3S3, z) -> AmbientVector:
        u, v = _split(z)
        return cls(base, u, v)

    @classmethod
    def random(cls, base: PointS3S3, gen) -> AmbientVector:
        return cls(base, quat.random_tangent(base.p, gen), quat.random_tangent(base.q, gen))

    def as_array(self) -> np.ndarray:
        return _join(self.U, self.V)

    def __add__(self, other):
        _same_base(self, other)
        return AmbientVector.from_array(self.base, self.as_array() + other.as_array())

    def __sub__(self, other):
        _same_base(self, other)
        return AmbientVector.from_array(self.base, self.as_array() - other.as_array())

    def __mul__(self, s):
        return AmbientVector.from_array(self.base, float(s) * self.as_array())

    __rmul__ = __mul__

    def __neg__(self):
        return AmbientVector.from_array(self.base, -self.as_array())


def _same_base(*vectors):
    b0 = vectors[0].base
    for z in vectors[1:]:
        if not b0.same_as(z.base):
            raise DomainError("vectors live at different base points")


# ---------------------------------------------------------------------------
# pointwise structure


def almost_complex(z: AmbientVector) -> AmbientVector:
    return AmbientVector.from_array(z.base, j_apply(z.base.as_array(), z.as_array()))


def metric(z: AmbientVector, w: AmbientVector) -> float:
    _same_base(z, w)
    return float(g_apply(z.base.as_array(), z.as_array(), w.as_array()))


def product_structure(z: AmbientVector) -> AmbientVector:
    return AmbientVector.from_array(z.base, p_apply(z.base.as_array(), z.as_array()))


def curvature_formula(x: AmbientVector, y: AmbientVector, z: AmbientVector) -> AmbientVector:
    _same_base(x, y, z)
    r = curvature_apply(x.base.as_array(), x.as_array(), y.as_array(), z.as_array())
    return AmbientVector.from_array(x.base, r)


# ---------------------------------------------------------------------------
# chart and numerical connection


class ChartS3S3(Chart):
    """Left-translated exponential chart on each factor."""

    has_product_structure = True

    def __init__(self, base: PointS3S3):
        self.base = base

    def point(self, c):
        c = np.atleast_2d(c)
        return _join(quat.mul(self.base.p, quat.exp_im(c[:, :3])), quat.mul(self.base.q, quat.exp_im(c[:, 3:])))

    def coords(self, x):
        p, q = _split(np.atleast_2d(x))
        return np.concatenate(
            [quat.log_unit(quat.mul(quat.conj(self.base.p), p)), quat.log_unit(quat.mul(quat.conj(self.base.q), q))],
            axis=-1,
        )

    def frame(self, c):
        c = np.ascontiguousarray(np.atleast_2d(c), dtype=float)
        n = c.shape[0]
        pts = self.point(c)
        mx = kernels.dexp_left(np.ascontiguousarray(c[:, :3]))
        my = kernels.dexp_left(np.ascontiguousarray(c[:, 3:]))
        out = np.zeros((n, 8, 6))
        for i in range(3):
            out[:, :4, i] = quat.mul(pts[:, :4], mx[:, :, i] @ _IM.T)
            out[:, 4:, 3 + i] = quat.mul(pts[:, 4:], my[:, :, i] @ _IM.T)
        return out

    def tensors(self, c):
        return kernels.s3s3_chart_tensors(np.ascontiguousarray(np.atleast_2d(c), dtype=float))

    def components(self, z):
        # exact at the origin: U = p (0, a), V = q (0, b)
        u, v = _split(z)
        a = quat.mul(quat.conj(self.base.p), u)[..., 1:]
        b = quat.mul(quat.conj(self.base.q), v)[..., 1:]
        return np.concatenate([a, b], axis=-1)

    def embed(self, comps):
        comps = np.asarray(comps, dtype=float)
        return _join(quat.mul(self.base.p, comps[..., :3] @ _IM.T), quat.mul(self.base.q, comps[..., 3:] @ _IM.T))


def christoffel(chart: ChartS3S3, coords=None, h=FD_STEP):
    return chart.christoffel(coords, h)


def covariant_derivative(chart: ChartS3S3, field, direction, coords=None, h=FD_STEP):
    from .riemann import covariant_derivative as _cd

    return _cd(chart, field, direction, coords, h)


def local_geometry(base: PointS3S3, h=FD_STEP) -> LocalGeometry:
    return ChartS3S3(base).local(h=h)


def G_tensor(x: AmbientVector, y: AmbientVector, h=FD_STEP) -> AmbientVector:
    """G(X, Y) = (nabla_X J) Y from the finite-difference connection."""
    _same_base(x, y)
    chart = ChartS3S3(x.base)
    loc = chart.local(h=h)
    gxy = loc.G(chart.components(x.as_array()), chart.components(y.as_array()))
    return AmbientVector.from_array(x.base, chart.embed(gxy))


def curvature_numeric(chart: ChartS3S3, x: AmbientVector, y: AmbientVector, z: AmbientVector,
                      h=FD_STEP, h2=FD_STEP_CURVATURE) -> AmbientVector:
    """R(X, Y)Z from the finite-difference Riemann tensor at the chart origin."""
    _same_base(x, y, z)
    if not chart.base.same_as(x.base):
        raise DomainError("chart must be centred at the vectors' base point")
    riem = chart.local(h=h).riemann(h2)
    cx, cy, cz = (chart.components(v.as_array()) for v in (x, y, z))
    return AmbientVector.from_array(x.base, chart.embed(np.einsum("lijk,i,j,k->l", riem, cx, cy, cz)))


def nablaP_residual(chart: ChartS3S3, x: AmbientVector, y: AmbientVector, h=FD_STEP) -> float:
    """|| 2 (nabla_X P) Y - J G(X, PY) - J P G(X, Y) ||_g at the chart origin."""
    _same_base(x, y)
    loc = chart.local(h=h)
    cx, cy = chart.components(x.as_array()), chart.components(y.as_array())
    lhs = 2.0 * loc.nablaP(cx, cy)
    rhs = loc.J @ loc.G(cx, loc.P @ cy) + loc.J @ loc.P @ loc.G(cx, cy)
    return float(loc.norm(lhs - rhs))


# ---------------------------------------------------------------------------
# identity suite

THRESHOLDS = {
    "J2": 1e-10,
    "J_isometry": 1e-10,
    "P2": 1e-10,
    "PJ_anticommute": 1e-10,
    "P_isometry": 1e-10,
    "metric_compatibility": 5e-6,
    "G_skew": 5e-5,
    "G_J": 5e-5,
    "G_g_skew": 5e-5,
    "G_four_slot": 1e-3,
    "G_norm_constant": 1e-3,
    "nablaP": 1e-4,
    "curvature_relative": 1e-3,
    "bianchi": 1e-3,
}


def _g_unit(loc, v):
    return v / loc.norm(v)


def four_slot_rhs(loc, x, y, z, w):
    g = loc.inner
    jm = loc.J
    return (g(x, z) * g(y, w) - g(x, w) * g(y, z) + g(jm @ x, z) * g(jm @ w, y) - g(jm @ x, w) * g(jm @ z, y)) / 3.0


def identity_suite(samples=1000, seed=0, h=FD_STEP, h2=FD_STEP_CURVATURE, curvature_samples=50):
    """Seeded residuals of the S3 x S3 structure identities, one record per identity.

    Closed-form checks use the quaternion formulas directly; checks involving
    G, nabla P and the curvature use the finite-difference connection at a
    fresh random point per sample.
    """
    res = {k: [] for k in THRESHOLDS}
    for i in range(samples):
        gen = quat.rng(seed, i)
        base = PointS3S3.random(gen)
        pt = base.as_array()
        zs = [AmbientVector.random(base, gen).as_array() for _ in range(4)]
        z0, z1 = zs[0], zs[1]
        n0 = np.sqrt(g_apply(pt, z0, z0))
        n1 = np.sqrt(g_apply(pt, z1, z1))
        jz0 = j_apply(pt, z0)
        res["J2"].append(np.max(np.abs(j_apply(pt, jz0) + z0)) / np.max(np.abs(z0)))
        res["J_isometry"].append(abs(g_apply(pt, jz0, j_apply(pt, z1)) - g_apply(pt, z0, z1)) / (n0 * n1))
        res["P2"].append(np.max(np.abs(p_apply(pt, p_apply(pt, z0)) - z0)) / np.max(np.abs(z0)))
        res["PJ_anticommute"].append(
            np.max(np.abs(p_apply(pt, jz0) + j_apply(pt, p_apply(pt, z0)))) / np.max(np.abs(z0))
        )
        res["P_isometry"].append(abs(g_apply(pt, p_apply(pt, z0), p_apply(pt, z1)) - g_apply(pt, z0, z1)) / (n0 * n1))

        chart = ChartS3S3(base)
        loc = chart.local(h=h)
        res["metric_compatibility"].append(metric_compatibility_residual(chart, loc, h))
        x, y, z, w = (_g_unit(loc, chart.components(v)) for v in zs)
        gxy = loc.G(x, y)
        res["G_skew"].append(loc.norm(gxy + loc.G(y, x)))
        res["G_J"].append(loc.norm(loc.G(x, loc.J @ y) + loc.J @ gxy))
        res["G_g_skew"].append(abs(loc.inner(gxy, z) + loc.inner(loc.G(x, z), y)))
        res["G_four_slot"].append(abs(loc.inner(gxy, loc.G(z, w)) - four_slot_rhs(loc, x, y, z, w)))
        # orthonormal pair with Y orthogonal to JX
        e1 = x
        e2 = y - loc.inner(y, e1) * e1 - loc.inner(y, loc.J @ e1) * (loc.J @ e1)
        e2 = _g_unit(loc, e2)
        g12 = loc.G(e1, e2)
        res["G_norm_constant"].append(abs(loc.inner(g12, g12) - 1.0 / 3.0))
        res["nablaP"].append(
            loc.norm(2.0 * loc.nablaP(x, y) - loc.J @ loc.G(x, loc.P @ y) - loc.J @ loc.P @ loc.G(x, y))
        )
        if i < curvature_samples:
            riem = loc.riemann(h2)
            num = np.einsum("lijk,i,j,k->l", riem, x, y, z)
            exact = chart.components(curvature_apply(pt, chart.embed(x), chart.embed(y), chart.embed(z)))
            res["curvature_relative"].append(loc.norm(num - exact) / max(loc.norm(exact), 1e-12))
            cyc = riem + riem.transpose(0, 2, 3, 1) + riem.transpose(0, 3, 1, 2)
            res["bianchi"].append(float(np.max(np.abs(cyc))))
    return [Check.from_values(k, v, THRESHOLDS[k]) for k, v in res.items() if v]


def metric_compatibility_residual(chart, loc, h=FD_STEP):
    """Metric-compatibility residual of the Koszul Christoffel symbols at the chart origin."""
    dg = fd.gradient(chart.metric, loc.coords[None], h)[0]
    data = ChristoffelData(loc.gamma, loc.g, loc.ginv)
    return data.compatibility_residual(dg)
