"""Hypersurfaces of either nearly Kaehler ambient.

An immersion is a vectorised map from a 5-dimensional parameter box into
the ambient. Everything is evaluated in one ambient chart centred at the
image of the sample point: the tangent frame by finite differences of the
chart coordinates, the unit normal as the g-orthogonal null direction, and
the shape operator from the Weingarten formula A X = -(nabla_X xi)^T.

Tangent vectors in the public API are 5-vectors of components in the
g-orthonormal frame ``E`` of the sample (Gram-Schmidt of the coordinate
frame d/ds_1, ..., d/ds_5 under g).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import fd, kernels, quat, s3s3, s6
from .quat import DomainError
from .riemann import FD_STEP, FD_STEP_CURVATURE, GRAM_MIN

AMBIENTS = ("s3s3", "s6")
RANK_TOL = 1e-6
DISTINCT_TOL = 1e-4
PAIRING_TOL = 1e-3
HOPF_TOL = 1e-4
U_COMPONENT_TOL = 1e-8


class AmbiguityError(DomainError):
    """Numerical rank or multiplicity is not decidable at the given tolerance."""


def make_chart(ambient, point):
    if ambient == "s3s3":
        return s3s3.ChartS3S3(s3s3.PointS3S3.from_array(point))
    if ambient == "s6":
        return s6.ChartS6(s6.PointS6(point))
    raise DomainError(f"unknown ambient {ambient!r}")


@dataclass(frozen=True)
class Immersion:
    """Vectorised map (m, 5) -> (m, ambient dimension) on a parameter box."""

    ambient: str
    map: object = field(repr=False)
    lower: tuple
    upper: tuple
    name: str = ""

    def __post_init__(self):
        if self.ambient not in AMBIENTS:
            raise DomainError(f"unknown ambient {self.ambient!r}")
        if len(self.lower) != 5 or len(self.upper) != 5:
            raise DomainError("the parameter box must be 5-dimensional")

    def __call__(self, s):
        return np.asarray(self.map(np.atleast_2d(np.asarray(s, dtype=float))))

    def contains(self, s, margin=0.0):
        s = np.asarray(s, dtype=float)
        return bool(np.all(s - margin >= np.asarray(self.lower)) and np.all(s + margin <= np.asarray(self.upper)))

    def random_params(self, gen, margin=0.05):
        lo = np.asarray(self.lower) + margin
        hi = np.asarray(self.upper) - margin
        return lo + (hi - lo) * gen.random(5)


def seeded_params(immersion, samples, seed, margin=0.05):
    """Deterministic parameter points, point i drawn from sub-stream (seed, i)."""
    return np.array([immersion.random_params(quat.rng(seed, i), margin) for i in range(samples)])


@dataclass(frozen=True)
class _Geometry:
    coords: np.ndarray  # (n, 6)
    frame: np.ndarray  # (n, 6, 5) coordinate tangent vectors d/ds_a
    g: np.ndarray
    J: np.ndarray
    P: np.ndarray | None
    gamma: np.ndarray  # ambient Christoffel symbols
    hmet: np.ndarray  # induced metric in parameter coordinates
    normal: np.ndarray  # (n, 6)


class _Pipeline:
    """Batched evaluation of the immersion in a fixed ambient chart."""

    def __init__(self, immersion, chart, h, flip):
        self.f = immersion
        self.chart = chart
        self.h = h
        self.sign = -1.0 if flip else 1.0

    def coords(self, s):
        return self.chart.coords(self.f(s))

    def geometry(self, s) -> _Geometry:
        s = np.atleast_2d(s)
        c = self.coords(s)
        self.chart.check_domain(c, 2 * self.h)
        frame = fd.gradient(self.coords, s, self.h).transpose(0, 2, 1)
        g, jm, pm = self.chart.tensors(c)
        gamma = self.chart.christoffel_batch(c, self.h)
        hmet = np.einsum("nia,nij,njb->nab", frame, g, frame)
        if np.any(np.linalg.det(hmet) < GRAM_MIN):
            raise DomainError("immersion differential is rank deficient")
        rows = np.einsum("nia,nij->naj", frame, g)
        xi = np.linalg.svd(rows)[2][:, -1, :]
        xi /= np.sqrt(np.einsum("ni,nij,nj->n", xi, g, xi))[:, None]
        orient = np.sign(np.linalg.det(np.concatenate([frame, xi[:, :, None]], axis=2)))
        xi *= (self.sign * orient)[:, None]
        return _Geometry(c, frame, g, jm, pm, gamma, hmet, xi)

    def shape(self, s):
        """Shape operator and intrinsic Christoffel symbols in parameter coordinates."""
        s = np.atleast_2d(s)
        n = s.shape[0]
        base = self.geometry(s)
        offsets, weights = fd.STENCILS[fd.DEFAULT_ORDER]
        st = self.geometry(fd.stencil(s, self.h).reshape(-1, 5))
        noff = len(offsets)

        def d(arr):
            return np.einsum("ndo...,o->nd...", arr.reshape((n, 5, noff) + arr.shape[1:]), weights) / self.h

        dxi = d(st.normal)  # (n, 5, 6)
        nabla_xi = dxi + np.einsum("nkij,nia,nj->nak", base.gamma, base.frame, base.normal)
        low = np.einsum("nic,nij,naj->nca", base.frame, base.g, nabla_xi)
        hinv = np.linalg.inv(base.hmet)
        a_param = -hinv @ low
        dh = d(st.hmet)
        gam = kernels.koszul(np.ascontiguousarray(hinv), np.ascontiguousarray(dh))
        u_amb = -np.einsum("nij,nj->ni", base.J, base.normal)
        u_param = np.einsum("nab,nia,nij,nj->nb", hinv, base.frame, base.g, u_amb)
        # second fundamental form from second derivatives: an independent route to A
        dframe = d(st.frame.transpose(0, 2, 1))  # (n, 5, 5, 6): d_b F_a
        ii = np.einsum(
            "nbai,nij,nj->nab",
            dframe + np.einsum("nkij,nia,njb->nbak", base.gamma, base.frame, base.frame),
            base.g,
            base.normal,
        )
        return base, a_param, gam, u_param, 0.5 * (ii + ii.transpose(0, 2, 1))


@dataclass(frozen=True)
class PrincipalProfile:
    eigenvalues: np.ndarray
    mu: float
    lam: float | None
    beta: float | None
    nu: int
    paired: bool


@dataclass(frozen=True)
class CanonicalFrame:
    dim: int
    a: float
    b: float
    c: float | None
    frame: np.ndarray  # (5, 5) columns e_1..e_5 in sample-frame components
    residual: float


@dataclass(frozen=True, eq=False)
class HypersurfaceSample:
    """Pointwise hypersurface data at one parameter point."""

    immersion: Immersion
    params: np.ndarray
    point: np.ndarray
    chart: object = field(repr=False)
    E: np.ndarray = field(repr=False)  # (6, 5) orthonormal frame in chart coordinates
    C: np.ndarray = field(repr=False)  # E = d/ds C
    normal: np.ndarray = field(repr=False)
    A: np.ndarray = field(repr=False)  # shape operator in the E frame
    A_second_form: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    U: np.ndarray = field(repr=False)
    f: np.ndarray = field(repr=False)
    h: float = FD_STEP
    h2: float = FD_STEP_CURVATURE
    flipped: bool = False
    _param_A: np.ndarray = field(repr=False, default=None)
    _param_gamma: np.ndarray = field(repr=False, default=None)
    _param_u: np.ndarray = field(repr=False, default=None)

    @property
    def ambient(self):
        return self.immersion.ambient

    @property
    def A_sym(self):
        return 0.5 * (self.A + self.A.T)

    @cached_property
    def local(self):
        return self.chart.local(h=self.h)

    @cached_property
    def tangent_g(self):
        """Columns E_a as ambient chart vectors, pre-multiplied by g."""
        return self.local.g @ self.E

    def tangential(self, v):
        """Sample-frame components of the tangential part of a chart vector."""
        return self.tangent_g.T @ v

    def to_chart(self, x):
        return self.E @ np.asarray(x, dtype=float)

    @cached_property
    def G_xi(self):
        """Matrix of X -> G(X, xi), tangential part, in the E frame."""
        cols = [self.local.G(self.E[:, a], self.normal) for a in range(5)]
        return self.tangential(np.array(cols).T)

    @cached_property
    def p_data(self):
        """(P^T, (JP)^T, g(P., xi), g(P., U)) restricted to the tangent space."""
        loc = self.local
        if loc.P is None:
            raise DomainError("the ambient has no almost product structure")
        pe = loc.P @ self.E
        u_chart = -loc.J @ self.normal
        return (
            self.tangential(pe),
            self.tangential(loc.J @ pe),
            self.normal @ loc.g @ pe,
            u_chart @ loc.g @ pe,
        )

    @cached_property
    def _nabla(self):
        """Parameter-coordinate A, intrinsic gamma and their derivatives, step h2."""
        pipe = _Pipeline(self.immersion, self.chart, self.h, self.flipped)
        s = self.params[None]
        _, a_st, gam_st, u_st, _ = pipe.shape(fd.stencil(s, self.h2).reshape(-1, 5))
        _, weights = fd.STENCILS[fd.DEFAULT_ORDER]

        def d(arr):
            return np.einsum("do...,o->d...", arr.reshape((5, len(weights)) + arr.shape[1:]), weights) / self.h2

        return d(a_st), d(gam_st), d(u_st)

    @cached_property
    def nabla_A(self):
        """T[c] = matrix of (nabla_{d/ds_c} A) in parameter coordinates."""
        da, _, _ = self._nabla
        gam, a = self._param_gamma, self._param_A
        return da + np.einsum("bcd,da->cba", gam, a) - np.einsum("bd,dca->cba", a, gam)

    @cached_property
    def intrinsic_riemann(self):
        """R[l, i, j, k] of the induced metric in parameter coordinates."""
        _, dgam, _ = self._nabla
        gam = self._param_gamma
        return (
            dgam.transpose(1, 0, 2, 3)
            - dgam.transpose(1, 2, 0, 3)
            + np.einsum("lim,mjk->lijk", gam, gam)
            - np.einsum("ljm,mik->lijk", gam, gam)
        )

    def param_vector(self, x):
        return self.C @ np.asarray(x, dtype=float)

    def frame_vector(self, v):
        return np.linalg.solve(self.C, v)

    def flipped_sample(self):
        return sample(self.immersion, self.params, h=self.h, h2=self.h2, flip_normal=not self.flipped)


def sample(immersion: Immersion, params, h=FD_STEP, h2=FD_STEP_CURVATURE, flip_normal=False) -> HypersurfaceSample:
    params = np.asarray(params, dtype=float)
    reach = 2 * h2 + 2 * h + 2 * h
    if not immersion.contains(params, reach):
        raise DomainError("finite-difference stencil leaves the parameter box")
    point = immersion(params[None])[0]
    chart = make_chart(immersion.ambient, point)
    pipe = _Pipeline(immersion, chart, h, flip_normal)
    base, a_param, gam, u_param, ii = pipe.shape(params[None])
    hmet = base.hmet[0]
    chol = np.linalg.cholesky(hmet)
    cmat = np.linalg.inv(chol).T  # upper triangular, E = frame @ cmat
    e = base.frame[0] @ cmat
    a_frame = np.linalg.solve(cmat, a_param[0] @ cmat)
    ii_frame = cmat.T @ ii[0] @ cmat
    g0, j0 = base.g[0], base.J[0]
    xi = base.normal[0]
    phi = e.T @ g0 @ j0 @ e
    u_chart = -j0 @ xi
    u = e.T @ g0 @ u_chart
    fvec = xi @ g0 @ j0 @ e
    return HypersurfaceSample(
        immersion, params, point, chart, e, cmat, xi, a_frame, ii_frame, phi, u, fvec, h, h2, flip_normal,
        a_param[0], gam[0], u_param[0],
    )


# ---------------------------------------------------------------------------
# pointwise quantities


def contact_residuals(smp: HypersurfaceSample) -> dict:
    """The almost contact identities, max-abs residuals over the frame."""
    phi, u, fv = smp.phi, smp.U, smp.f
    eye = np.eye(5)
    return {
        "f_is_g_U": float(np.max(np.abs(fv - u))),
        "f_phi": float(np.max(np.abs(fv @ phi))),
        "phi_squared": float(np.max(np.abs(phi @ phi + eye - np.outer(u, fv)))),
        "phi_skew": float(np.max(np.abs(phi + phi.T))),
        "phi_metric": float(np.max(np.abs(phi.T @ phi - eye + np.outer(fv, fv)))),
        "normal_orthogonality": float(np.max(np.abs(smp.tangent_g.T @ smp.normal))),
        "normal_unit": float(abs(smp.normal @ smp.local.g @ smp.normal - 1.0)),
        "A_symmetry": float(np.max(np.abs(smp.A - smp.A.T))),
    }


def hopf_defect(smp: HypersurfaceSample) -> float:
    u = smp.U
    if np.linalg.norm(u) < 1e-8:
        raise DomainError("structure vector field vanishes")
    au = smp.A_sym @ u
    mu = au @ u / (u @ u)
    return float(np.linalg.norm(au - mu * u))


def structure_mu(smp: HypersurfaceSample) -> float:
    u = smp.U
    return float(u @ smp.A_sym @ u / (u @ u))


def commutator_norms(smp: HypersurfaceSample):
    a, phi = smp.A_sym, smp.phi
    return float(np.linalg.norm(a @ phi - phi @ a)), float(np.linalg.norm(a @ phi + phi @ a))


def _distinct_count(vals, tol=DISTINCT_TOL):
    vals = np.sort(vals)
    return 1 + int(np.sum(np.diff(vals) > tol))


def pair_spectrum(vals, tol=PAIRING_TOL):
    """Greedy +/- matching of a spectrum; returns nonnegative representatives or None."""
    rest = list(np.sort(np.asarray(vals, dtype=float))[::-1])
    reps = []
    while rest:
        k = rest.pop(0)
        if not rest:
            return None
        j = int(np.argmin([abs(k + other) for other in rest]))
        if abs(k + rest[j]) > tol:
            return None
        reps.append(abs(0.5 * (k - rest.pop(j))))
    return sorted(reps, reverse=True)


def principal_profile(smp: HypersurfaceSample, tol=DISTINCT_TOL, pair_tol=PAIRING_TOL) -> PrincipalProfile:
    a = smp.A_sym
    vals = np.linalg.eigvalsh(a)[::-1]
    u = smp.U / np.linalg.norm(smp.U)
    mu = float(u @ a @ u)
    w = np.linalg.svd(np.eye(5) - np.outer(u, u))[0][:, :4]
    reps = pair_spectrum(np.linalg.eigvalsh(w.T @ a @ w), pair_tol)
    lam = beta = None
    if reps is not None:
        lam, beta = reps
    return PrincipalProfile(vals, mu, lam, beta, _distinct_count(vals, tol), reps is not None)


def second_form_defect(smp: HypersurfaceSample) -> float:
    """|A (Weingarten) - A (second fundamental form)|_F, an internal consistency check."""
    return float(np.linalg.norm(smp.A - smp.A_second_form))


# ---------------------------------------------------------------------------
# structure equations


def codazzi_rhs(smp: HypersurfaceSample, x, y):
    if smp.ambient == "s6":
        return np.zeros(5)
    u, phi = smp.U, smp.phi
    pt, jpt, pxi, pu = smp.p_data
    yphix = 0.5 * (y @ phi @ x - x @ phi @ y)  # exactly antisymmetric in (x, y)
    return (x @ u * (phi @ y) - y @ u * (phi @ x) - 2.0 * yphix * u) / 12.0 + (
        (pxi @ x) * (pt @ y) - (pxi @ y) * (pt @ x) + (pu @ x) * (jpt @ y) - (pu @ y) * (jpt @ x)
    ) / 3.0


def codazzi_lhs(smp: HypersurfaceSample, x, y):
    """(nabla_X A)Y - (nabla_Y A)X in frame components."""
    px, py = smp.param_vector(x), smp.param_vector(y)
    t = smp.nabla_A
    val = np.einsum("c,cba,a->b", px, t, py) - np.einsum("c,cba,a->b", py, t, px)
    return smp.frame_vector(val)


def codazzi_residual(smp: HypersurfaceSample, x, y) -> float:
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return float(np.linalg.norm(codazzi_lhs(smp, x, y) - codazzi_rhs(smp, x, y)))


def gauss_rhs(smp: HypersurfaceSample, x, y, z):
    a = smp.A_sym
    shape_part = (z @ a @ y) * (a @ x) - (z @ a @ x) * (a @ y)
    if smp.ambient == "s6":
        return (y @ z) * x - (x @ z) * y + shape_part
    phi = smp.phi
    pt, jpt, _, _ = smp.p_data
    return (
        5.0 / 12.0 * ((y @ z) * x - (x @ z) * y)
        + ((z @ phi @ y) * (phi @ x) - (z @ phi @ x) * (phi @ y) - 2.0 * (y @ phi @ x) * (phi @ z)) / 12.0
        + ((z @ pt @ y) * (pt @ x) - (z @ pt @ x) * (pt @ y) + (z @ jpt @ y) * (jpt @ x) - (z @ jpt @ x) * (jpt @ y))
        / 3.0
        + shape_part
    )


def gauss_lhs(smp: HypersurfaceSample, x, y, z):
    px, py, pz = (smp.param_vector(v) for v in (x, y, z))
    return smp.frame_vector(np.einsum("lijk,i,j,k->l", smp.intrinsic_riemann, px, py, pz))


def gauss_residual(smp: HypersurfaceSample, x, y, z) -> float:
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    return float(np.linalg.norm(gauss_lhs(smp, x, y, z) - gauss_rhs(smp, x, y, z)))


def nabla_U(smp: HypersurfaceSample, x):
    """Induced covariant derivative of the structure field, frame components."""
    _, _, du = smp._nabla
    px = smp.param_vector(x)
    val = px @ du + np.einsum("kij,i,j->k", smp._param_gamma, px, smp._param_u)
    return smp.frame_vector(val)


def structure_field_residual(smp: HypersurfaceSample, x) -> float:
    """|nabla_X U - phi A X + G(X, xi)|."""
    x = np.asarray(x, dtype=float)
    return float(np.linalg.norm(nabla_U(smp, x) - smp.phi @ smp.A_sym @ x + smp.G_xi @ x))


def hopf_identity_sides(a, phi, g_xi, mu, x, y, p_terms=None):
    """The two sides of the Hopf identity for frame matrices.

    ``p_terms = (pxi, pu)`` gives g(P., xi), g(P., U) on S3 x S3; ``None``
    selects the six-sphere form, whose left side vanishes.
    """
    m = mu * np.eye(len(x)) - a
    rhs = y @ m @ g_xi @ x + y @ g_xi @ m @ x - mu * (y @ (a @ phi + phi @ a) @ x) + 2.0 * (y @ a @ phi @ a @ x)
    if p_terms is None:
        return 0.0, float(rhs)
    pxi, pu = p_terms
    lhs = (y @ phi @ x) / 6.0 - 2.0 / 3.0 * ((pxi @ x) * (pu @ y) - (pu @ x) * (pxi @ y))
    return float(lhs), float(rhs)


def hopf_identity_residual(smp: HypersurfaceSample, x, y, hopf_tol=HOPF_TOL) -> float:
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if hopf_defect(smp) > hopf_tol:
        raise DomainError("sample is not Hopf at the requested tolerance")
    u = smp.U / np.linalg.norm(smp.U)
    if abs(x @ u) > U_COMPONENT_TOL * max(1.0, np.linalg.norm(x)) or abs(y @ u) > U_COMPONENT_TOL * max(
        1.0, np.linalg.norm(y)
    ):
        raise DomainError("X and Y must be orthogonal to the structure vector field")
    p_terms = None if smp.ambient == "s6" else smp.p_data[2:]
    lhs, rhs = hopf_identity_sides(smp.A_sym, smp.phi, smp.G_xi, structure_mu(smp), x, y, p_terms)
    return abs(lhs - rhs)


def hopf_identity_chain(smp: HypersurfaceSample, x, y) -> dict:
    """The U-component of the Codazzi difference three ways.

    ``numeric`` differentiates A; ``via_codazzi`` is minus the curvature side
    of the identity; ``via_hopf`` is minus the shape-operator side.
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    u = smp.U
    p_terms = None if smp.ambient == "s6" else smp.p_data[2:]
    lhs, rhs = hopf_identity_sides(smp.A_sym, smp.phi, smp.G_xi, structure_mu(smp), x, y, p_terms)
    return {"numeric": float(u @ codazzi_lhs(smp, x, y)), "via_codazzi": -lhs, "via_hopf": -rhs}


def orthogonal_to_U(smp: HypersurfaceSample, v):
    u = smp.U / np.linalg.norm(smp.U)
    v = np.asarray(v, dtype=float)
    return v - (v @ u) * u


# ---------------------------------------------------------------------------
# the distribution D and canonical frames


def _g_orthonormal_basis(g, vecs, tol):
    """g-orthonormal basis of span(vecs) and the singular values used for the rank."""
    chol = np.linalg.cholesky(g)
    m = chol.T @ np.column_stack(vecs)
    uu, sv, _ = np.linalg.svd(m, full_matrices=False)
    rank = int(np.sum(sv > tol))
    basis = np.linalg.solve(chol.T, uu[:, :rank])
    return basis, sv


def _complement(g, basis):
    chol = np.linalg.cholesky(g)
    m = chol.T @ basis
    q = np.linalg.svd(m, full_matrices=True)[0][:, m.shape[1]:]
    return np.linalg.solve(chol.T, q)


def _eigvec_plus(g, pm, w, prefer=None):
    """Unit vectors of the +1 eigenspace of P inside span(w) (w g-orthonormal)."""
    mat = w.T @ g @ pm @ w
    vals, vecs = np.linalg.eigh(0.5 * (mat + mat.T))
    plus = vecs[:, vals > 0]
    return w @ plus


def _sign_normalise(v):
    nz = np.flatnonzero(np.abs(v) > 1e-12)
    return v if nz.size == 0 or v[nz[0]] > 0 else -v


def distribution_D(smp: HypersurfaceSample, tol=RANK_TOL) -> CanonicalFrame:
    if smp.ambient != "s3s3":
        raise DomainError("the distribution D is defined on S3 x S3 only")
    loc = smp.local
    g, jm, pm = loc.g, loc.J, loc.P
    xi = smp.normal
    u = -jm @ xi
    pxi, pu = pm @ xi, pm @ u
    basis, sv = _g_orthonormal_basis(g, [xi, u, pxi, pu], tol)
    rank = basis.shape[1]
    if rank not in (2, 4):
        raise AmbiguityError(f"numerical rank of D is {rank}, singular values {sv}")
    a = float(pxi @ g @ xi)
    b = float(pxi @ g @ u)
    norm = lambda v: np.sqrt(v @ g @ v)  # noqa: E731
    if rank == 4:
        rest = pxi - a * xi - b * u
        c = float(norm(rest))
        e1 = rest / c
        e2 = jm @ e1
        perp = _complement(g, basis)
        e3 = _sign_normalise(_eigvec_plus(g, pm, perp)[:, 0])
        e3 = e3 / norm(e3)
        e4 = jm @ e3
        e5 = u
        res = max(
            norm(pxi - (a * xi + c * e1 + b * e5)),
            norm(pm @ e1 - (c * xi - a * e1 - b * e2)),
            norm(pm @ e2 - (c * e5 - b * e1 + a * e2)),
            norm(pm @ e3 - e3),
            norm(pm @ e4 + e4),
            norm(pm @ e5 - (b * xi + c * e2 - a * e5)),
        )
    else:
        c = None
        perp = _complement(g, basis)
        plus = _eigvec_plus(g, pm, perp)
        e1 = _sign_normalise(plus[:, 0])
        e1 = e1 / norm(e1)
        e2 = jm @ e1
        e3 = plus[:, 1] - (plus[:, 1] @ g @ e1) * e1 - (plus[:, 1] @ g @ e2) * e2
        e3 = _sign_normalise(e3 / norm(e3))
        e4 = jm @ e3
        e5 = u
        res = max(norm(pxi - a * xi - b * u), norm(pm @ e1 - e1), norm(pm @ e3 - e3))
    frame = smp.tangential(np.column_stack([e1, e2, e3, e4, e5]))
    return CanonicalFrame(rank, a, b, c, frame, float(res))


# ---------------------------------------------------------------------------
# sweeps


def sweep(immersion, samples, seed, fn, h=FD_STEP, h2=FD_STEP_CURVATURE, workers=None, margin=0.05):
    """Apply ``fn(sample, gen)`` at seeded parameter points; results in index order."""
    params = seeded_params(immersion, samples, seed, margin)

    def run(i):
        gen = quat.rng(seed, i, 1)
        return fn(sample(immersion, params[i], h, h2), gen)

    if workers and workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(run, range(samples)))
    return [run(i) for i in range(samples)]
