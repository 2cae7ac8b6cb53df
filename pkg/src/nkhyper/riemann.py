"""Chart-level Riemannian machinery shared by both ambient manifolds.

A ``Chart`` supplies the metric and the (1,1) structure tensors J (and P,
when the ambient has one) as coordinate matrices. Everything else here is
derived by central finite differences: Christoffel symbols through the
Koszul formula, covariant derivatives of J and P, and the Riemann tensor
from first differences of the Christoffel symbols.

Index conventions: ``gamma[k, i, j]`` is the Christoffel symbol with upper
index k; ``nabla_t[i, k, j]`` is the (k, j) entry of the matrix of
(nabla_{d_i} T); ``riemann[l, i, j, k]`` gives R(d_i, d_j) d_k = R^l_ijk d_l
with R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fd, kernels
from .quat import DomainError

FD_STEP = 1e-4
FD_STEP_CURVATURE = 1e-3
GRAM_MIN = 1e-8


@dataclass(frozen=True)
class ChristoffelData:
    gamma: np.ndarray
    metric: np.ndarray
    metric_inv: np.ndarray

    def compatibility_residual(self, dg: np.ndarray) -> float:
        """max |d_i g_jk - gamma^l_ij g_lk - gamma^l_ik g_jl| for given dg[i, j, k]."""
        lowered = np.einsum("lij,lk->ijk", self.gamma, self.metric)
        pred = lowered + lowered.transpose(0, 2, 1)
        return float(np.max(np.abs(dg - pred)))


class Chart:
    """Six-dimensional coordinate chart; subclasses provide the geometry hooks."""

    dim = 6
    working_radius = 0.5
    has_product_structure = False

    # -- subclass hooks -------------------------------------------------
    def point(self, c):
        """Embedded point(s) for chart coordinates c of shape (n, 6)."""
        raise NotImplementedError

    def coords(self, x):
        """Chart coordinates of embedded points x of shape (n, E)."""
        raise NotImplementedError

    def frame(self, c):
        """Coordinate vectors as embedded vectors, shape (n, E, 6)."""
        raise NotImplementedError

    def tensors(self, c):
        """(g, J, P) coordinate matrices at c, each (n, 6, 6); P may be None."""
        raise NotImplementedError

    # -- conversions at the chart origin --------------------------------
    def components(self, z):
        """Coordinate components at the origin of embedded tangent vector(s)."""
        f = self.frame(np.zeros((1, self.dim)))[0]
        sol, *_ = np.linalg.lstsq(f, np.asarray(z, dtype=float).reshape(-1, f.shape[0]).T, rcond=None)
        return sol.T.reshape(np.shape(z)[:-1] + (self.dim,))

    def embed(self, v):
        """Embedded vector(s) at the origin from coordinate components."""
        f = self.frame(np.zeros((1, self.dim)))[0]
        return np.asarray(v, dtype=float) @ f.T

    # -- derived geometry -----------------------------------------------
    def check_domain(self, c, reach=0.0):
        c = np.atleast_2d(c)
        if np.any(np.linalg.norm(c, axis=-1) + reach > self.working_radius):
            raise DomainError("stencil leaves the chart working domain")

    def metric(self, c):
        return self.tensors(np.atleast_2d(c))[0]

    def christoffel_batch(self, c, h=FD_STEP):
        """Christoffel symbols (n, 6, 6, 6) at each row of c."""
        c = np.atleast_2d(np.asarray(c, dtype=float))
        g = self.metric(c)
        if np.any(np.linalg.det(g) < GRAM_MIN):
            raise DomainError("singular metric matrix")
        dg = fd.gradient(self.metric, c, h)
        return kernels.koszul(np.ascontiguousarray(np.linalg.inv(g)), np.ascontiguousarray(dg))

    def christoffel(self, coords=None, h=FD_STEP) -> ChristoffelData:
        c = np.zeros((1, self.dim)) if coords is None else np.atleast_2d(coords)
        self.check_domain(c, 2 * h)
        g = self.metric(c)[0]
        return ChristoffelData(self.christoffel_batch(c, h)[0], g, np.linalg.inv(g))

    def local(self, coords=None, h=FD_STEP) -> LocalGeometry:
        """All first-order structure data at one chart point."""
        c = np.zeros((1, self.dim)) if coords is None else np.atleast_2d(np.asarray(coords, dtype=float))
        self.check_domain(c, 2 * h)
        offsets, weights = fd.STENCILS[fd.DEFAULT_ORDER]
        pts = fd.stencil(c, h).reshape(-1, self.dim)
        allc = np.vstack([c, pts])
        g_all, j_all, p_all = self.tensors(allc)
        noff = len(offsets)

        def d(arr):
            return np.einsum("do...,o->d...", arr[1:].reshape((self.dim, noff) + arr.shape[1:]), weights) / h

        g = g_all[0]
        if np.linalg.det(g) < GRAM_MIN:
            raise DomainError("singular metric matrix")
        ginv = np.linalg.inv(g)
        dg = d(g_all)
        gamma = kernels.koszul(ginv[None].copy(), dg[None].copy())[0]
        jm = j_all[0]
        nabla_j = _nabla_11(d(j_all), gamma, jm)
        pm = nabla_p = None
        if p_all is not None:
            pm = p_all[0]
            nabla_p = _nabla_11(d(p_all), gamma, pm)
        return LocalGeometry(self, c[0], g, ginv, gamma, jm, nabla_j, pm, nabla_p, h)


def _nabla_11(dt, gamma, t):
    # (nabla_i T)^k_j = d_i T^k_j + gamma^k_il T^l_j - T^k_l gamma^l_ij
    return dt + np.einsum("kil,lj->ikj", gamma, t) - np.einsum("kl,lij->ikj", t, gamma)


@dataclass(frozen=True)
class LocalGeometry:
    chart: Chart
    coords: np.ndarray
    g: np.ndarray
    ginv: np.ndarray
    gamma: np.ndarray
    J: np.ndarray
    nabla_J: np.ndarray
    P: np.ndarray | None
    nabla_P: np.ndarray | None
    h: float

    def inner(self, x, y):
        return np.einsum("...i,ij,...j->...", x, self.g, y)

    def norm(self, x):
        return np.sqrt(self.inner(x, x))

    def G(self, x, y):
        """G(X, Y) = (nabla_X J) Y in coordinate components."""
        return np.einsum("...i,ikj,...j->...k", x, self.nabla_J, y)

    def nablaP(self, x, y):
        return np.einsum("...i,ikj,...j->...k", x, self.nabla_P, y)

    def connection(self, x, y):
        """gamma(X, Y)^k = gamma^k_ij X^i Y^j."""
        return np.einsum("kij,...i,...j->...k", self.gamma, x, y)

    def riemann(self, h2=FD_STEP_CURVATURE):
        """Riemann tensor R[l, i, j, k] from differences of the Christoffel symbols."""
        c = self.coords[None]
        self.chart.check_domain(c, 2 * h2 + 2 * self.h)
        dgam = fd.gradient(lambda pts: self.chart.christoffel_batch(pts, self.h), c, h2)[0]
        gam = self.gamma
        return (
            dgam.transpose(1, 0, 2, 3)
            - dgam.transpose(1, 2, 0, 3)
            + np.einsum("lim,mjk->lijk", gam, gam)
            - np.einsum("ljm,mik->lijk", gam, gam)
        )

    def orthonormal_completion(self, vecs, tol=1e-10):
        """g-orthonormal basis of the g-orthogonal complement of ``vecs``."""
        basis = []
        for v in vecs:
            basis.append(self._reduce(v, basis, tol, strict=True))
        n_given = len(basis)
        for e in np.eye(self.chart.dim):
            v = self._reduce(e, basis, tol)
            if v is not None:
                basis.append(v)
        return np.array(basis[n_given:])

    def _reduce(self, v, basis, tol, strict=False):
        v = np.array(v, dtype=float)
        for _ in range(2):
            for b in basis:
                v = v - self.inner(v, b) * b
        n = self.norm(v)
        if n <= tol:
            if strict:
                raise DomainError("vectors are linearly dependent")
            return None
        return v / n


def covariant_derivative(chart: Chart, field, direction, coords=None, h=FD_STEP):
    """nabla_X Y for a coordinate vector field Y(c) -> (6,) components at ``coords``."""
    c = np.zeros(chart.dim) if coords is None else np.asarray(coords, dtype=float)
    chart.check_domain(c[None], 2 * h * max(1.0, float(np.linalg.norm(direction))))
    x = np.asarray(direction, dtype=float)
    y0 = np.asarray(field(c[None]))[0]
    dy = fd.directional(field, c[None], x[None], h)[0]
    gamma = chart.christoffel_batch(c[None], h)[0]
    return dy + np.einsum("kij,i,j->k", gamma, x, y0)
