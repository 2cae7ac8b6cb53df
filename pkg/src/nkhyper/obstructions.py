"""Pointwise infeasibility margins for hypersurfaces with A phi + phi A = 0.

Each case of the classification reduces, after a finite elimination, to a
scalar relation that the case's own data cannot satisfy. The functions here
carry out those eliminations numerically and return the unavoidable
violation (the margin). ``feasibility_scan`` corroborates each margin by a
deterministic grid search with coordinate-descent refinement over the
case's admissible parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hypersurface import hopf_identity_sides
from .quat import DomainError

SQRT2, SQRT3, SQRT6 = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(6.0)
G_NORM_SQ = 1.0 / 3.0
POLE_TOL = 1e-6
COINCIDE_TOL = 1e-8
DISTINCT = 1e-3  # distinctness gap used by the scan domains
BOUND = 10.0  # scan range for unbounded principal curvatures
CASE_IDS = ("s6-nu3", "s6-nu2", "case1", "case2", "case3i", "case3ii", "case3iii", "case4", "dim2")

# J on coefficient rows, fixed by J e1 = e2, J e3 = e4
_J4 = np.array([[0.0, -1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, -1.0], [0.0, 0.0, 1.0, 0.0]])


@dataclass(frozen=True)
class Forced:
    name: str
    value: float
    reason: str


@dataclass(frozen=True)
class ObstructionReport:
    case: str
    chain: tuple
    margin: float
    margins: tuple = ()
    scan_min: float | None = None
    scan_argmin: tuple | None = None
    scan_bound: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        ok = self.margin > 0.0
        if self.scan_min is not None:
            ok = ok and self.scan_min >= 0.99 * self.scan_bound
        return bool(ok)

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "chain": [{"name": f.name, "value": f.value, "reason": f.reason} for f in self.chain],
            "margin": self.margin,
            "margins": list(self.margins),
            "scan_min": self.scan_min,
            "scan_argmin": None if self.scan_argmin is None else list(self.scan_argmin),
            "scan_bound": self.scan_bound,
            "pass": self.passed,
            "details": self.details,
        }


# ---------------------------------------------------------------------------
# six-sphere


def s6_hopf_residual(a, phi, g_xi, mu, x, y) -> float:
    """|left side| of the six-sphere Hopf identity for frame matrices."""
    a, phi, g_xi = (np.asarray(m, dtype=float) for m in (a, phi, g_xi))
    if not a.shape == phi.shape == g_xi.shape == (len(x), len(x)):
        raise DomainError("matrices and vectors must share one frame")
    return abs(hopf_identity_sides(a, phi, g_xi, mu, np.asarray(x, float), np.asarray(y, float))[1])


@dataclass(frozen=True)
class S6TubeProfile:
    theta: float
    r: float

    def __post_init__(self):
        if not (0.0 <= self.theta < np.pi / 2 and 0.0 < self.r < np.pi):
            raise DomainError("need theta in [0, pi/2) and r in (0, pi)")
        for s in (self.theta + self.r, self.theta - self.r):
            if abs(np.cos(s)) < np.sin(POLE_TOL):
                raise DomainError("principal curvature at a tangent pole")

    def curvatures(self):
        return np.tan(self.theta + self.r), np.tan(self.theta - self.r), -1.0 / np.tan(self.r)


def s6_case1_margin(theta, r, tol=DISTINCT, check_distinct=True) -> float:
    """Three distinct curvatures: both tan values are forced to vanish.

    ``check_distinct=False`` evaluates the forced violation without the
    distinctness precondition.
    """
    k1, k2, k3 = S6TubeProfile(theta, r).curvatures()
    if check_distinct and min(abs(k1 - k2), abs(k1 - k3), abs(k2 - k3)) < tol:
        raise DomainError("principal curvatures are not distinct")
    return float(max(abs(k1), abs(k2)))


def s6_case2_margin(theta, r, tol=DISTINCT) -> float:
    """Exactly two distinct curvatures: each distinct value is forced to vanish."""
    ks = S6TubeProfile(theta, r).curvatures()
    pairs = [(i, j) for i in range(3) for j in range(i + 1, 3) if abs(ks[i] - ks[j]) <= COINCIDE_TOL]
    if not pairs:
        raise DomainError("no pair of principal curvatures coincides")
    values = np.sort(ks)
    distinct = [values[0]] + [v for v, w in zip(values[1:], values[:-1]) if v - w > COINCIDE_TOL]
    if len(distinct) != 2 or abs(distinct[0] - distinct[1]) < tol:
        raise DomainError("need exactly two distinct principal curvatures")
    return float(max(abs(v) for v in distinct))


def s6_case2_theta(r):
    """theta on the branch tan(theta - r) = -cot r, or None if inadmissible."""
    th = float(np.mod(2.0 * r + np.pi / 2, np.pi))
    if th >= np.pi / 2:
        return None
    try:
        S6TubeProfile(th, r)
    except DomainError:
        return None
    return th


# ---------------------------------------------------------------------------
# S3 x S3, dim D = 4


def constructive_coefficients(gen=None, row1=None, row2=None):
    """Orthogonal (a_ij) whose last two rows are J applied to the first two.

    This realises the frame symmetry exactly: a_{i+2,j} = (-1)^j a_{i,3-j}
    and a_{i+2,j+2} = (-1)^j a_{i,5-j}.
    """
    if row1 is None:
        row1 = gen.standard_normal(4)
    if row2 is None:
        row2 = gen.standard_normal(4)
    r1 = np.asarray(row1, dtype=float)
    r1 = r1 / np.linalg.norm(r1)
    r2 = np.asarray(row2, dtype=float)
    for v in (r1, _J4 @ r1, r1, _J4 @ r1):
        r2 = r2 - (r2 @ v) * v
    n = np.linalg.norm(r2)
    if n < 1e-8:
        raise DomainError("second row lies in the span of the first and its J-image")
    r2 = r2 / n
    return np.array([r1, r2, _J4 @ r1, _J4 @ r2])


def symmetry_residual(a) -> float:
    """max violation of the two frame-symmetry relations (1-based indices)."""
    a = np.asarray(a)
    A = lambda i, j: a[i - 1, j - 1]  # noqa: E731
    res = [abs(A(i + 2, j) - (-1) ** j * A(i, 3 - j)) for i in (1, 2) for j in (1, 2)]
    res += [abs(A(i + 2, j + 2) - (-1) ** j * A(i, 5 - j)) for i in (1, 2) for j in (1, 2)]
    return float(max(res))


def c_matrix(a):
    """Codazzi-side matrix C of the U-derivative comparison, from (a_ij)."""
    A = lambda i, j: a[i - 1, j - 1]  # noqa: E731
    return np.array(
        [
            [-A(1, 2) / 4, -A(2, 2) / 4, -A(1, 1) / 4, -A(2, 1) / 4],
            [A(1, 1) / 4, A(2, 1) / 4, -A(1, 2) / 4, -A(2, 2) / 4],
            [A(1, 4) / 12, A(2, 4) / 12, A(1, 3) / 12, A(2, 3) / 12],
            [-A(1, 3) / 12, -A(2, 3) / 12, A(1, 4) / 12, A(2, 4) / 12],
        ]
    )


@dataclass(frozen=True)
class CaseICoefficients:
    a_mat: np.ndarray
    lam: float
    beta: float
    mu: float
    k: float
    l: float  # noqa: E741
    a: float = 0.0
    b: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        a = np.asarray(self.a_mat, dtype=float)
        object.__setattr__(self, "a_mat", a)
        if a.shape != (4, 4) or np.max(np.abs(a.T @ a - np.eye(4))) > 1e-10:
            raise DomainError("(a_ij) must be orthogonal")
        if symmetry_residual(a) > 1e-12:
            raise DomainError("(a_ij) violates the frame symmetry")
        if abs(self.k**2 + self.l**2 - G_NORM_SQ) > 1e-10:
            raise DomainError("k^2 + l^2 must equal 1/3")
        if abs(self.a**2 + self.b**2 + self.c**2 - 1.0) > 1e-10 or self.c <= 0:
            raise DomainError("need a^2 + b^2 + c^2 = 1 with c > 0")

    @classmethod
    def random(cls, gen, lam, beta, mu, t=None):
        t = gen.uniform(0, 2 * np.pi) if t is None else t
        return cls(constructive_coefficients(gen), lam, beta, mu, np.cos(t) / SQRT3, np.sin(t) / SQRT3)

    def relations(self):
        """Left minus right of the six scalar relations from the Hopf identity on X_i, X_j."""
        a, c2 = self.a_mat, self.c**2
        lam, beta, mu, k, l = self.lam, self.beta, self.mu, self.k, self.l  # noqa: E741
        s1 = a[0, 0] ** 2 + a[0, 1] ** 2
        s2 = a[1, 0] ** 2 + a[1, 1] ** 2
        p = a[0, 0] * a[1, 0] + a[0, 1] * a[1, 1]
        q = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        return np.array(
            [
                -1 / 6 + 2 / 3 * c2 * s1 - 2 * lam**2,
                -1 / 6 + 2 / 3 * c2 * s2 - 2 * beta**2,
                2 / 3 * c2 * p - (2 * mu + lam - beta) * l,
                2 / 3 * c2 * p + (2 * mu - lam + beta) * l,
                2 / 3 * c2 * q - (2 * mu - lam - beta) * k,
                2 / 3 * c2 * q + (2 * mu + lam + beta) * k,
            ]
        )


def _check_case1(lam, beta, mu):
    if not (lam > 0 and beta > 0 and lam != beta and mu not in (lam, -lam, beta, -beta)):
        raise DomainError("case I needs lambda, beta > 0, lambda != beta and mu outside {+-lambda, +-beta}")


def _kl_systems(lam, beta):
    """Homogeneous linear systems in (Gamma, Gamma', k) and (Gamma, Gamma', l).

    Rows: the two skew-symmetry consequences of B = (a_ij) C, then the
    relation between the U-derivative connection coefficients and G(U, X_1).
    """
    d, s = lam - beta, lam + beta
    mk = np.array([[2 * d, 0.0, -d], [0.0, -2 * d, -d], [-1.0, 1.0, -1.0]])
    ml = np.array([[-2 * s, 0.0, -s], [0.0, 2 * s, s], [1.0, 1.0, -1.0]])
    return mk, ml


def _forced_kl(lam, beta, tol=1e-12):
    """(k, l) forced by the skew relations, or None where they are not forced."""
    out = []
    for m in _kl_systems(lam, beta):
        sv = np.linalg.svd(m, compute_uv=False)
        if sv[-1] <= tol * max(1.0, sv[0]):
            return None, sv
        out.append(0.0)
    return tuple(out), sv


def case1_chain(co: CaseICoefficients) -> ObstructionReport:
    _check_case1(co.lam, co.beta, co.mu)
    rel = co.relations()
    chain = [
        Forced("mu*l", 0.0, "difference of the two U-component relations gives 4 mu l = 0"),
        Forced("mu*k", 0.0, "difference of the two xi-component relations gives 4 mu k = 0"),
        Forced("mu", 0.0, "k^2 + l^2 = 1/3 rules out k = l = 0"),
        Forced("a*c", 0.0, "U-component of the Codazzi comparison along e_1"),
        Forced("b*c", 0.0, "U-component of the Codazzi comparison along e_2"),
        Forced("a", 0.0, "c > 0"),
        Forced("b", 0.0, "c > 0"),
        Forced("c", 1.0, "a^2 + b^2 + c^2 = 1"),
    ]
    a_mat = co.a_mat
    b_mat = a_mat @ c_matrix(a_mat)
    kl, sv = _forced_kl(co.lam, co.beta)
    if kl is None:
        raise DomainError("skew relations are singular at these principal curvatures")
    k_f, l_f = kl
    chain += [
        Forced("Gamma_51^2", co.k / 2, "B_12 + B_21 = 0 with lambda != beta"),
        Forced("Gamma_53^4", -co.k / 2, "B_34 + B_43 = 0 with lambda != beta"),
        Forced("k", k_f, "U-connection relation Gamma_53^4 - Gamma_51^2 = k"),
        Forced("Gamma_53^2", -co.l / 2, "B_23 + B_32 = 0 with lambda + beta != 0"),
        Forced("Gamma_51^4", -co.l / 2, "B_14 + B_41 = 0 with lambda + beta != 0"),
        Forced("l", l_f, "U-connection relation Gamma_53^2 + Gamma_51^4 = l"),
    ]
    margin = abs(k_f**2 + l_f**2 - G_NORM_SQ)
    details = {
        "relations_at_input": rel.tolist(),
        "mu_forced_from_k_l": float(4 * co.mu * np.hypot(co.k, co.l)),
        "b_skew_residual": float(np.max(np.abs(b_mat + b_mat.T))),
        "symmetry_residual": symmetry_residual(a_mat),
        "orthogonality_residual": float(np.max(np.abs(a_mat.T @ a_mat - np.eye(4)))),
        "determinant": float(np.linalg.det(a_mat)),
        "smallest_singular_value": float(sv[-1]),
    }
    return ObstructionReport("case1", tuple(chain), float(margin), details=details)


SUBCASES = {
    "II-(i)": "case2",
    "II-(ii)": "case2",
    "III-(i)": "case3i",
    "IV-(i)": "case4",
    "IV-(ii)": "case4",
}


@dataclass(frozen=True)
class CaseProfile:
    subcase: str
    lam: float
    beta: float
    mu: float


def _subcase_ok(p: CaseProfile, tol=0.0) -> bool:
    lam, beta, mu = p.lam, p.beta, p.mu
    near = lambda x, y: abs(x - y) <= tol  # noqa: E731
    far = lambda x, y: abs(x - y) > tol  # noqa: E731
    if p.subcase == "II-(i)":
        return lam > tol and beta > tol and far(lam, beta) and any(near(mu, v) for v in (lam, beta, -lam, -beta))
    if p.subcase == "II-(ii)":
        return near(lam, 0) and beta > tol and all(far(mu, v) for v in (0.0, beta, -beta))
    if p.subcase == "III-(i)":
        return near(lam, 0) and beta > tol and any(near(mu, v) for v in (beta, -beta))
    if p.subcase == "IV-(i)":
        return lam > tol and near(lam, beta) and any(near(mu, v) for v in (lam, -lam))
    if p.subcase == "IV-(ii)":
        return near(lam, 0) and near(beta, 0) and far(mu, 0)
    raise DomainError(f"unknown subcase {p.subcase!r}")


def case2_case4_chain(p: CaseProfile) -> ObstructionReport:
    """Subcases whose only contradiction is the forced mu = 0."""
    if p.subcase not in SUBCASES:
        raise DomainError(f"unknown subcase {p.subcase!r}")
    if p.mu == 0.0 or not _subcase_ok(p):
        raise DomainError(f"profile does not belong to subcase {p.subcase}")
    chain = (
        Forced("mu*k", 0.0, "difference of the two xi-component relations"),
        Forced("mu*l", 0.0, "difference of the two U-component relations"),
        Forced("mu", 0.0, "k^2 + l^2 = 1/3 rules out k = l = 0"),
    )
    return ObstructionReport(SUBCASES[p.subcase], chain, float(abs(p.mu)), details={"subcase": p.subcase})


def case3ii_residual(beta, c=1.0):
    """Mismatch of the product (a11^2 + a12^2)(a21^2 + a22^2) between its two derivations."""
    s1 = (1 / 6) / (2 / 3 * c**2)
    s2 = (2 * beta**2 + 1 / 6) / (2 / 3 * c**2)
    # sum of squares of the two mixed relations with mu = lambda = 0
    required = beta**2 * G_NORM_SQ / (2 / 3 * c**2) ** 2
    return np.abs(s1 * s2 - required)


def case3ii_margin() -> ObstructionReport:
    lam2_beta2 = (-1 / 3 + 2 / 3) / 2  # (a11^2+a12^2) + (a21^2+a22^2) = 1, c = 1
    beta = np.sqrt(lam2_beta2)
    s1 = (1 / 6) / (2 / 3)
    s2 = (2 * beta**2 + 1 / 6) / (2 / 3)
    required = beta**2 * G_NORM_SQ / (2 / 3) ** 2
    chain = (
        Forced("mu", 0.0, "case assumption, consistent with the forced mu = 0"),
        Forced("c", 1.0, "U-components of the Codazzi comparison"),
        Forced("lambda^2 + beta^2", lam2_beta2, "sum of the two diagonal relations with orthogonal (a_ij)"),
        Forced("beta", float(beta), "lambda = 0"),
        Forced("a11^2 + a12^2", s1, "first diagonal relation"),
        Forced("a21^2 + a22^2", s2, "second diagonal relation"),
        Forced("product required", float(required), "sum of squares of the mixed relations"),
    )
    return ObstructionReport("case3ii", chain, float(abs(s1 * s2 - required)))


@dataclass(frozen=True)
class CaseIIIData:
    a11: float
    a12: float
    m: float
    n: float
    gamma: float = 0.0

    def __post_init__(self):
        if abs(self.a11**2 + self.a12**2 - 0.5) > 1e-10 or abs(self.m**2 + self.n**2 - 1 / 6) > 1e-10:
            raise DomainError("need a11^2 + a12^2 = 1/2 and m^2 + n^2 = 1/6")

    @classmethod
    def from_coefficients(cls, a13, a14, a11, a12, gamma=0.0):
        return cls(a11, a12, -2 * SQRT6 / 3 * a13 * a14, SQRT6 / 3 * (a14**2 - a13**2), gamma)


def case3iii_equations(d: CaseIIIData, x1=(0.0, 0.0, 0.0, 0.0)):
    """Left sides of the four nabla-P relations; x1 holds X_1 of (a12, a11, m, n)."""
    da12, da11, dm, dn = x1
    g = d.gamma
    return np.array(
        [
            2 * da12 + 2 * SQRT2 * d.m - 2 * d.a11 * g,
            -2 * da11 - 2 * SQRT2 * d.n - 2 * d.a12 * g,
            SQRT6 * dm + 2 * SQRT6 * d.n * g,
            -4 * SQRT3 / 3 * d.a11 + SQRT6 * dn - 2 * SQRT6 * d.m * g,
        ]
    )


def _branch_system(branch, sign_a, sign_mn):
    """(coefficient of Gamma, constant) for the relations left after a branch is fixed."""
    if branch == 1:
        a12, n = sign_a / SQRT2, sign_mn / SQRT6
        return np.array([2 * SQRT6 * n, -2 * a12]), np.array([0.0, -2 * SQRT2 * n])
    a11, m = sign_a / SQRT2, sign_mn / SQRT6
    return np.array([-2 * a11, -2 * SQRT6 * m]), np.array([2 * SQRT2 * m, -4 * SQRT3 / 3 * a11])


def case3iii_branch_residual(branch, gamma, sign_a=1.0, sign_mn=1.0):
    coef, const = _branch_system(branch, sign_a, sign_mn)
    gamma = np.asarray(gamma, dtype=float)
    return np.sqrt(np.sum((np.multiply.outer(gamma, coef) + const) ** 2, axis=-1))


def case3iii_branch_margins(d: CaseIIIData | None = None) -> ObstructionReport:
    lam = beta = np.sqrt((-1 / 3 + 2 / 3) / 4)
    combo1 = SQRT2 * (d.a12 * d.m + d.a11 * d.n) if d else None
    combo2 = -4 * SQRT3 / 3 * d.a11 * d.n if d else None
    # branch a11 = 0: m = 0 identically, so X_1(m) = 0 and Gamma vanishes; then n is forced to 0
    n_forced = 0.0
    margin1 = abs(np.sqrt(1 / 6) - abs(n_forced))
    # branch a11 != 0: n = a12 = 0 identically; Gamma = sqrt2 m / a11 = -sqrt2 a11 / (3 m)
    a11, m = 1 / SQRT2, 1 / SQRT6
    g_first, g_second = SQRT2 * m / a11, -SQRT2 * a11 / (3 * m)
    margin2 = abs(g_first - g_second)
    chain = (
        Forced("mu", 0.0, "difference relations with k^2 + l^2 = 1/3"),
        Forced("c", 1.0, "U-components of the Codazzi comparison"),
        Forced("lambda = beta", float(lam), "sum of the diagonal relations"),
        Forced("a11 n", 0.0, "a11-weighted and m,n-weighted combinations of the nabla-P relations"),
        Forced("a12 m", 0.0, "same combinations"),
        Forced("n (branch a11 = 0)", n_forced, "Gamma_12^1 = 0, then the second nabla-P relation"),
        Forced("Gamma_12^1 (branch a11 != 0)", float(g_first), "first nabla-P relation"),
        Forced("Gamma_12^1 (branch a11 != 0)", float(g_second), "fourth nabla-P relation"),
    )
    details = {}
    if d is not None:
        details = {"combination_1": float(combo1), "combination_2": float(combo2),
                   "equations_at_input": case3iii_equations(d).tolist()}
    return ObstructionReport("case3iii", chain, float(min(margin1, margin2)), (float(margin1), float(margin2)),
                             details=details)


def dim2_margin(lam):
    out = np.abs(2 * np.asarray(lam, dtype=float) ** 2 + 1 / 6)
    return float(out) if out.ndim == 0 else out


def anticommuting_model(lam, beta, mu):
    """Shape operator and phi in a frame X_1, X_2, phi X_1, phi X_2, U with A phi + phi A = 0."""
    a = np.diag([lam, beta, -lam, -beta, mu]).astype(float)
    phi = np.zeros((5, 5))
    phi[2, 0] = phi[3, 1] = 1.0
    phi[0, 2] = phi[1, 3] = -1.0
    return a, phi


# ---------------------------------------------------------------------------
# feasibility scans


@dataclass(frozen=True)
class ScanCase:
    lower: tuple
    upper: tuple
    residual: object  # vectorised (m, d) -> (m,), inf where inadmissible
    bound: float  # analytic lower bound on the residual over this domain


def _s6_nu3_residual(pts):
    th, r = pts[:, 0], pts[:, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        k1, k2, k3 = np.tan(th + r), np.tan(th - r), -1.0 / np.tan(r)
    ok = (th >= 0) & (th < np.pi / 2) & (r > 0) & (r < np.pi)
    ok &= (np.abs(np.cos(th + r)) >= np.sin(POLE_TOL)) & (np.abs(np.cos(th - r)) >= np.sin(POLE_TOL))
    ok &= (np.abs(k1 - k2) >= DISTINCT) & (np.abs(k1 - k3) >= DISTINCT) & (np.abs(k2 - k3) >= DISTINCT)
    return np.where(ok, np.maximum(np.abs(k1), np.abs(k2)), np.inf)


def _s6_nu2_residual(pts):
    """Grid point (theta, r) is projected onto the two coincidence branches."""
    th, r = pts[:, 0], pts[:, 1]
    # branch tan(theta - r) = -cot r: theta is determined by r
    tha = np.mod(2 * r + np.pi / 2, np.pi)
    with np.errstate(divide="ignore", invalid="ignore"):
        va, vb = np.tan(tha + r), -1.0 / np.tan(r)
    ok_a = (tha < np.pi / 2) & (r > 0) & (r < np.pi) & (np.abs(np.cos(tha + r)) >= np.sin(POLE_TOL))
    ok_a &= (np.abs(np.cos(tha - r)) >= np.sin(POLE_TOL)) & (np.abs(va - vb) >= DISTINCT)
    res_a = np.where(ok_a, np.maximum(np.abs(va), np.abs(vb)), np.inf)
    # branch r = pi/2: tan(theta +- r) = -cot theta, and -cot r = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        vc = -1.0 / np.tan(th)
    ok_b = (th > 0) & (th < np.pi / 2) & (np.abs(vc) >= DISTINCT)
    res_b = np.where(ok_b, np.abs(vc), np.inf)
    return np.minimum(res_a, res_b)


def _case1_residual(pts):
    lam, beta = pts[:, 0], pts[:, 1]
    ok = (lam > 0) & (beta > 0) & (np.abs(lam - beta) >= DISTINCT)
    d, s = lam - beta, lam + beta
    n = len(lam)
    mk = np.zeros((n, 3, 3))
    ml = np.zeros((n, 3, 3))
    mk[:, 0, 0], mk[:, 0, 2], mk[:, 1, 1], mk[:, 1, 2] = 2 * d, -d, -2 * d, -d
    mk[:, 2] = [-1.0, 1.0, -1.0]
    ml[:, 0, 0], ml[:, 0, 2], ml[:, 1, 1], ml[:, 1, 2] = -2 * s, -s, 2 * s, s
    ml[:, 2] = [1.0, 1.0, -1.0]
    smin = np.minimum(np.linalg.svd(mk, compute_uv=False)[:, -1], np.linalg.svd(ml, compute_uv=False)[:, -1])
    # where the skew relations force k = l = 0 the violation is 1/3; otherwise k, l are free
    forced = smin > 1e-12
    return np.where(ok, np.where(forced, G_NORM_SQ, 0.0), np.inf)


def _mu_residual(subcases):
    def res(pts):
        out = np.full(len(pts), np.inf)
        x = pts[:, 0]
        y = pts[:, 1] if pts.shape[1] > 1 else None
        for sc in subcases:
            if sc == "II-(i)":
                ok = (np.abs(x - y) >= DISTINCT)
                val = np.minimum(x, y)  # |mu| with mu in {+-lambda, +-beta}
            elif sc == "II-(ii)":
                ok = (np.abs(y) >= DISTINCT) & (np.abs(np.abs(y) - x) >= DISTINCT)
                val = np.abs(y)  # (beta, mu) = (x, y)
            elif sc in ("III-(i)", "IV-(i)"):
                ok = x >= DISTINCT
                val = x  # mu = +-beta or +-lambda
            elif sc == "IV-(ii)":
                ok = np.abs(y) >= DISTINCT
                val = np.abs(y)
            out = np.minimum(out, np.where(ok, val, np.inf))
        return out

    return res


def _case3ii_scan(pts):
    beta, c = pts[:, 0], pts[:, 1]
    ok = (c > 0) & (c <= 1)
    return np.where(ok, case3ii_residual(beta, np.where(ok, c, 1.0)), np.inf)


def _case3iii_scan(pts):
    g = pts[:, 0]
    vals = [case3iii_branch_residual(b, g, sa, sm) for b in (1, 2) for sa in (1, -1) for sm in (1, -1)]
    return np.min(vals, axis=0)


def _dim2_scan(pts):
    return np.abs(2 * pts[:, 0] ** 2 + 1 / 6)


SCANS = {
    "s6-nu3": ScanCase((0.0, 0.0), (np.pi / 2, np.pi), _s6_nu3_residual, DISTINCT / 2),
    "s6-nu2": ScanCase((0.0, 0.0), (np.pi / 2, np.pi), _s6_nu2_residual, DISTINCT / 2),
    "case1": ScanCase((DISTINCT, DISTINCT), (BOUND, BOUND), _case1_residual, G_NORM_SQ),
    "case2": ScanCase((DISTINCT, -BOUND), (BOUND, BOUND), _mu_residual(("II-(ii)",)), DISTINCT),
    "case3i": ScanCase((DISTINCT,), (BOUND,), _mu_residual(("III-(i)",)), DISTINCT),
    "case3ii": ScanCase((DISTINCT, DISTINCT), (BOUND, 1.0), _case3ii_scan, 1 / 16),
    "case3iii": ScanCase((-BOUND,), (BOUND,), _case3iii_scan, np.sqrt(1 / 6)),
    "case4": ScanCase((0.0, -BOUND), (BOUND, BOUND), _mu_residual(("IV-(i)", "IV-(ii)")), DISTINCT),
    "dim2": ScanCase((-BOUND,), (BOUND,), _dim2_scan, 1 / 6),
}
# the II-(i) pattern lives on the (lambda, beta) square; scanned separately and merged
_CASE2_I = ScanCase((DISTINCT, DISTINCT), (BOUND, BOUND), _mu_residual(("II-(i)",)), DISTINCT)


def _grid(lower, upper, resolution):
    axes = [np.linspace(lo, hi, resolution) for lo, hi in zip(lower, upper)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def _evaluate(fun, pts, workers):
    if not workers or workers <= 1:
        return fun(pts)
    from concurrent.futures import ThreadPoolExecutor

    chunks = np.array_split(pts, workers)
    with ThreadPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(fun, chunks))
    return np.concatenate(parts)


def _refine(fun, x, fx, lower, upper, step, steps, shrink=0.5):
    x = x.copy()
    step = np.asarray(step, dtype=float).copy()
    for _ in range(steps):
        trials = []
        for d in range(len(x)):
            for sgn in (1.0, -1.0):
                y = x.copy()
                y[d] += sgn * step[d]
                if lower[d] <= y[d] <= upper[d]:
                    trials.append(y)
        if trials:
            vals = fun(np.array(trials))
            j = int(np.argmin(vals))
            if vals[j] < fx:
                x, fx = trials[j], float(vals[j])
                continue
        step *= shrink
    return x, fx


def _scan_one(sc: ScanCase, resolution, refine, workers):
    grid_res = resolution
    if len(sc.lower) == 1:
        grid_res = resolution * resolution  # keep the point count comparable to 2-d cases
    pts = _grid(sc.lower, sc.upper, grid_res)
    vals = _evaluate(sc.residual, pts, workers)
    i = int(np.argmin(vals))  # first minimum in index order: independent of worker count
    step = (np.asarray(sc.upper) - np.asarray(sc.lower)) / (grid_res - 1)
    x, fx = _refine(sc.residual, pts[i], float(vals[i]), sc.lower, sc.upper, step, refine)
    return fx, x, float(np.min(vals))


def feasibility_scan(case_id, resolution=100, refine=50, workers=None) -> ObstructionReport:
    if case_id not in SCANS:
        raise DomainError(f"unknown case id {case_id!r}")
    sc = SCANS[case_id]
    fx, x, grid_min = _scan_one(sc, resolution, refine, workers)
    bound = sc.bound
    if case_id == "case2":
        fx2, x2, gm2 = _scan_one(_CASE2_I, resolution, refine, workers)
        if fx2 < fx:
            fx, x = fx2, x2
        grid_min = min(grid_min, gm2)
    details = {"grid_min": grid_min, "resolution": resolution, "refine": refine}
    return ObstructionReport(case_id, (), float(sc.bound), scan_min=float(fx),
                             scan_argmin=tuple(float(v) for v in x), scan_bound=float(bound), details=details)


def analyse(case_id, resolution=100, refine=50, workers=None, seed=0) -> ObstructionReport:
    """Closed-form margin of a case together with its scan corroboration."""
    scan = feasibility_scan(case_id, resolution, refine, workers)
    if case_id == "s6-nu3":
        closed = ObstructionReport(case_id, (Forced("tan(theta+r)", 0.0, "Hopf identity on (X_1, phi X_1)"),
                                             Forced("tan(theta-r)", 0.0, "Hopf identity on (X_2, phi X_2)")),
                                   s6_case1_margin(np.pi / 8, np.pi / 4), details={"example": [np.pi / 8, np.pi / 4]})
    elif case_id == "s6-nu2":
        r = 2 * np.pi / 5
        closed = ObstructionReport(case_id, (Forced("distinct curvatures", 0.0, "Hopf identity on (X_i, phi X_i)"),),
                                   s6_case2_margin(s6_case2_theta(r), r),
                                   details={"example": [s6_case2_theta(r), r]})
    elif case_id == "case1":
        from .quat import rng

        gen = rng(seed, 0)
        closed = case1_chain(CaseICoefficients.random(gen, 0.3, 0.7, 0.1))
    elif case_id in ("case2", "case3i", "case4"):
        sub = {"case2": "II-(i)", "case3i": "III-(i)", "case4": "IV-(ii)"}[case_id]
        prof = {"II-(i)": CaseProfile(sub, 0.3, 0.7, 0.3), "III-(i)": CaseProfile(sub, 0.0, 0.5, -0.5),
                "IV-(ii)": CaseProfile(sub, 0.0, 0.0, 0.25)}[sub]
        closed = case2_case4_chain(prof)
    elif case_id == "case3ii":
        closed = case3ii_margin()
    elif case_id == "case3iii":
        closed = case3iii_branch_margins()
    else:
        closed = ObstructionReport("dim2", (Forced("2 lambda^2", -1 / 6, "Hopf identity on (X_1, phi X_1)"),),
                                   dim2_margin(0.0))
    return ObstructionReport(case_id, closed.chain, closed.margin, closed.margins, scan.scan_min, scan.scan_argmin,
                             scan.scan_bound, {**closed.details, **scan.details})
