import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nkhyper import fd, quat, s3s3
from nkhyper.checks import all_passed
from nkhyper.quat import DomainError
from nkhyper.s3s3 import AmbientVector, ChartS3S3, PointS3S3

ONE = np.array([1.0, 0, 0, 0])
I4 = np.array([0.0, 1, 0, 0])
Z4 = np.zeros(4)
SQ3 = np.sqrt(3.0)
seeds = st.integers(0, 2**32 - 1)


def at_identity(u, v):
    return AmbientVector(PointS3S3(ONE, ONE), u, v)


def random_setup(seed, k=3):
    gen = quat.rng(seed)
    base = PointS3S3.random(gen)
    return base, [AmbientVector.random(base, gen) for _ in range(k)]


def test_examples_at_identity():
    z = at_identity(I4, Z4)
    jz = s3s3.almost_complex(z)
    assert np.allclose(jz.U, -I4 / SQ3) and np.allclose(jz.V, -2 * I4 / SQ3)
    assert np.isclose(s3s3.metric(z, z), 4 / 3)
    assert np.isclose(s3s3.metric(z, at_identity(Z4, I4)), -2 / 3)
    pz = s3s3.product_structure(z)
    assert np.allclose(pz.U, Z4) and np.allclose(pz.V, I4)


@given(seeds)
def test_pointwise_structure(seed):
    _, (x, y, _) = random_setup(seed)
    jx = s3s3.almost_complex(x)
    px = s3s3.product_structure(x)
    scale = s3s3.metric(x, x)
    assert np.abs(s3s3.almost_complex(jx).as_array() + x.as_array()).max() <= 1e-12 * (1 + scale)
    assert abs(s3s3.metric(jx, s3s3.almost_complex(y)) - s3s3.metric(x, y)) <= 1e-12 * (1 + scale)
    assert np.abs(s3s3.product_structure(px).as_array() - x.as_array()).max() <= 1e-12 * (1 + scale)
    pjx = s3s3.product_structure(jx).as_array()
    assert np.abs(pjx + s3s3.almost_complex(px).as_array()).max() <= 1e-12 * (1 + scale)
    assert s3s3.metric(x, x) > 0
    assert s3s3.metric(x, y) == pytest.approx(s3s3.metric(y, x), abs=1e-14)


def test_tangency_and_base_errors():
    base = PointS3S3(ONE, ONE)
    with pytest.raises(DomainError):
        AmbientVector(base, ONE, Z4)
    with pytest.raises(DomainError):
        PointS3S3(2 * ONE, ONE)
    other = PointS3S3(I4, ONE)
    with pytest.raises(DomainError):
        s3s3.metric(at_identity(I4, Z4), AmbientVector(other, Z4, I4))


def test_chart_basics(gen):
    base = PointS3S3.random(gen)
    chart = ChartS3S3(base)
    assert np.allclose(chart.point(np.zeros(6))[0], base.as_array())
    c = gen.uniform(-0.2, 0.2, (20, 6))
    assert np.allclose(chart.coords(chart.point(c)), c, atol=1e-13)
    g = chart.metric(c)
    assert np.all(np.linalg.det(g) > 1e-8)
    # frame is the derivative of the chart map
    fd_frame = fd.gradient(chart.point, c[:3], 1e-5)
    assert np.allclose(np.swapaxes(fd_frame, 1, 2), chart.frame(c[:3]), atol=1e-9)
    # chart metric agrees with the pointwise metric on frame vectors
    f = chart.frame(c[:1])[0]
    pt = chart.point(c[:1])[0]
    g_pt = s3s3.g_apply(pt, f.T[:, None, :], f.T[None, :, :])
    assert np.allclose(g_pt, g[0], atol=1e-13)
    with pytest.raises(DomainError):
        chart.check_domain(np.full((1, 6), 0.3))


def test_christoffel_compatibility_and_symmetry(gen):
    chart = ChartS3S3(PointS3S3.random(gen))
    data = s3s3.christoffel(chart)
    assert np.array_equal(data.gamma, data.gamma.transpose(0, 2, 1))
    loc = chart.local()
    assert s3s3.metric_compatibility_residual(chart, loc) <= 5e-6


def test_christoffel_matches_euler_lagrange(gen):
    """g Gamma(v, v) from the variation of the energy, an independent path to the Koszul formula."""
    chart = ChartS3S3(PointS3S3.random(gen))
    c0 = gen.uniform(-0.1, 0.1, 6)
    gamma = chart.christoffel(c0).gamma
    g = chart.metric(c0)[0]
    for v in gen.standard_normal((5, 6)):
        energy = lambda c: 0.5 * np.einsum("i,nij,j->n", v, chart.metric(c), v)  # noqa: E731
        grad_e = fd.gradient(energy, c0[None], 1e-4)[0]
        dg_v = fd.directional(chart.metric, c0[None], v[None], 1e-4)[0]
        el = dg_v @ v - grad_e
        assert np.allclose(g @ np.einsum("kij,i,j->k", gamma, v, v), el, atol=1e-8)


@pytest.mark.parametrize("direction", ["d1", "d4", "diagonal", "parallel"])
def test_radial_geodesics(gen, direction):
    """t -> (p exp(t a), q exp(t s a)) is a geodesic: zero acceleration along the radial line."""
    chart = ChartS3S3(PointS3S3.random(gen))
    a = gen.standard_normal(3)
    w = {"d1": np.eye(6)[0], "d4": np.eye(6)[3], "diagonal": np.concatenate([a, a]),
         "parallel": np.concatenate([a, -2.5 * a])}[direction]
    w = 0.3 * w / np.linalg.norm(w)
    for t in (0.0, 0.5, 1.0):
        gam = chart.christoffel(t * w).gamma
        assert np.abs(np.einsum("kij,i,j->k", gam, w, w)).max() <= 1e-4


def test_non_geodesic_lines(gen):
    chart = ChartS3S3(PointS3S3.random(gen))
    a, b = gen.standard_normal((2, 3))
    # radial with non-parallel factors
    w = np.concatenate([a, b])
    assert np.abs(np.einsum("kij,i,j->k", chart.christoffel().gamma, w, w)).max() > 1e-3
    # a coordinate line missing the origin
    v = np.concatenate([a, np.zeros(3)])
    gam = chart.christoffel(np.concatenate([0.1 * b / np.linalg.norm(b), np.zeros(3)])).gamma
    assert np.abs(np.einsum("kij,i,j->k", gam, v, v)).max() > 1e-3


def test_covariant_derivative(gen):
    chart = ChartS3S3(PointS3S3.random(gen))
    x, y, z = gen.standard_normal((3, 6))
    const = lambda c: np.broadcast_to(y, (len(c), 6))  # noqa: E731
    gamma = chart.christoffel().gamma
    assert np.allclose(s3s3.covariant_derivative(chart, const, x), np.einsum("kij,i,j->k", gamma, x, y), atol=1e-14)
    # product rule: X g(Y, Z) = g(nabla_X Y, Z) + g(Y, nabla_X Z) for varying fields
    fy = lambda c: y + np.sin(c) @ np.diag(np.arange(1.0, 7.0))  # noqa: E731
    fz = lambda c: z + c**2  # noqa: E731
    gyz = lambda c: np.einsum("ni,nij,nj->n", fy(c), chart.metric(c), fz(c))  # noqa: E731
    lhs = fd.directional(gyz, np.zeros((1, 6)), x[None], 1e-4)[0]
    g0 = chart.metric(np.zeros(6))[0]
    rhs = s3s3.covariant_derivative(chart, fy, x) @ g0 @ fz(np.zeros((1, 6)))[0]
    rhs += fy(np.zeros((1, 6)))[0] @ g0 @ s3s3.covariant_derivative(chart, fz, x)
    assert abs(lhs - rhs) <= 1e-5
    # torsion-free on coordinate fields
    e = np.eye(6)
    for i, j in ((0, 3), (1, 4), (2, 5)):
        fi = lambda c, i=i: np.broadcast_to(e[i], (len(c), 6))  # noqa: E731
        fj = lambda c, j=j: np.broadcast_to(e[j], (len(c), 6))  # noqa: E731
        d = s3s3.covariant_derivative(chart, fj, e[i]) - s3s3.covariant_derivative(chart, fi, e[j])
        assert np.abs(d).max() <= 1e-4


@pytest.mark.parametrize("seed", range(5))
def test_G_examples(seed):
    base, (x, y, _) = random_setup(seed)
    loc = s3s3.local_geometry(base)
    assert np.abs(s3s3.G_tensor(x, x).as_array()).max() <= 1e-4
    lhs = s3s3.G_tensor(x, s3s3.almost_complex(y)) + s3s3.almost_complex(s3s3.G_tensor(x, y))
    assert np.sqrt(s3s3.metric(lhs, lhs)) <= 1e-4
    chart = loc.chart
    cx = chart.components(x.as_array())
    cx = cx / loc.norm(cx)
    cy = chart.components(y.as_array())
    cy = cy - loc.inner(cy, cx) * cx - loc.inner(cy, loc.J @ cx) * (loc.J @ cx)
    cy = cy / loc.norm(cy)
    g12 = loc.G(cx, cy)
    assert abs(loc.inner(g12, g12) - 1 / 3) <= 1e-3


@pytest.mark.parametrize("seed", range(3))
def test_curvature(seed):
    base, (x, y, z) = random_setup(seed)
    w = AmbientVector.random(base, quat.rng(seed, 9))
    assert np.abs(s3s3.curvature_formula(x, x, z).as_array()).max() <= 1e-14
    rxyz = s3s3.curvature_formula(x, y, z)
    rxyw = s3s3.curvature_formula(x, y, w)
    assert abs(s3s3.metric(rxyz, w) + s3s3.metric(rxyw, z)) <= 1e-10
    chart = ChartS3S3(base)
    num = s3s3.curvature_numeric(chart, x, y, z)
    diff = num - rxyz
    assert np.sqrt(s3s3.metric(diff, diff)) <= 1e-3 * np.sqrt(s3s3.metric(rxyz, rxyz))
    # trilinear scaling, no blowup as the first slot shrinks
    for t in (1e-1, 1e-3):
        small = s3s3.curvature_numeric(chart, t * x, y, z).as_array()
        assert np.allclose(small, t * num.as_array(), atol=1e-12)


def test_bianchi(gen):
    chart = ChartS3S3(PointS3S3.random(gen))
    riem = chart.local().riemann()
    cyc = riem + riem.transpose(0, 2, 3, 1) + riem.transpose(0, 3, 1, 2)
    assert np.abs(cyc).max() <= 1e-3


@pytest.mark.parametrize("seed", range(3))
def test_nablaP(seed):
    base, (x, y, _) = random_setup(seed)
    chart = ChartS3S3(base)
    r = s3s3.nablaP_residual(chart, x, y)
    assert r <= 1e-4
    assert s3s3.nablaP_residual(chart, 0 * x, y) == 0.0
    assert s3s3.nablaP_residual(chart, 2 * x, y) <= 2e-4


def test_identity_suite_small():
    checks = s3s3.identity_suite(samples=30, seed=3, curvature_samples=3)
    assert all_passed(checks)
    names = {c.name for c in checks}
    assert {"G_four_slot", "G_norm_constant", "curvature_relative", "nablaP"} <= names


def test_identity_suite_deterministic():
    a = s3s3.identity_suite(samples=5, seed=11, curvature_samples=1)
    b = s3s3.identity_suite(samples=5, seed=11, curvature_samples=1)
    assert [c.as_dict() for c in a] == [c.as_dict() for c in b]
