import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nkhyper import fd, quat, s6
from nkhyper.checks import all_passed
from nkhyper.quat import DomainError
from nkhyper.s6 import ChartS6, PointS6, TangentS6

seeds = st.integers(0, 2**32 - 1)


def setup(seed, k=3):
    gen = quat.rng(seed)
    b = PointS6.random(gen)
    return b, [TangentS6.random(b, gen) for _ in range(k)]


@given(seeds)
def test_J6(seed):
    _, (x, y, _) = setup(seed)
    jx = s6.J6(x)
    n = np.linalg.norm(x.X)
    assert np.abs(s6.J6(jx).X + x.X).max() <= 1e-12 * (1 + n)
    assert abs(s6.metric(jx, x)) <= 1e-12 * (1 + n * n)
    assert abs(np.linalg.norm(jx.X) - n) <= 1e-12 * (1 + n)
    assert abs(s6.metric(jx, s6.J6(y)) - s6.metric(x, y)) <= 1e-12 * (1 + n * np.linalg.norm(y.X))


def test_types_reject_bad_input(gen):
    with pytest.raises(DomainError):
        PointS6(np.ones(7))
    b = PointS6.random(gen)
    with pytest.raises(DomainError):
        TangentS6(b, b.x)
    other = PointS6.random(gen)
    with pytest.raises(DomainError):
        s6.metric(TangentS6.random(b, gen), TangentS6.random(other, gen))


def test_connection_constant_orthogonal_field(gen):
    b, (x, y) = setup(1, 2)
    field = lambda pts: np.broadcast_to(y.X, pts.shape)  # noqa: E731
    # Euclidean derivative of a constant is zero, so the projected derivative is too
    assert np.abs(s6.connection6(field, x)).max() <= 1e-12
    proj = lambda pts: pts * 0 + y.X - (pts @ y.X)[:, None] * pts  # noqa: E731
    # d/dt of the projection is -(X.Y) x - (x.Y) X; tangential part vanishes as x.Y = 0
    assert np.abs(s6.connection6(proj, x)).max() <= 1e-9


def test_connection_metric_compatibility(gen):
    b, (x,) = setup(2, 1)
    m1, m2 = gen.standard_normal((2, 7, 7))
    fy = lambda p: s6._tangent_part(p, p @ m1.T)  # noqa: E731
    fz = lambda p: s6._tangent_part(p, np.sin(p) @ m2.T)  # noqa: E731
    gyz = lambda p: np.sum(fy(p) * fz(p), axis=-1)  # noqa: E731
    unit = x.X / np.linalg.norm(x.X)
    pts = lambda t: s6.exp_map(b.x, np.multiply.outer(t, unit))  # noqa: E731
    h = 1e-4
    offsets, weights = fd.STENCILS[fd.DEFAULT_ORDER]
    lhs = np.linalg.norm(x.X) * weights @ gyz(pts(h * offsets)) / h
    rhs = s6.connection6(fy, x) @ fz(b.x[None])[0] + fy(b.x[None])[0] @ s6.connection6(fz, x)
    assert abs(lhs - rhs) <= 1e-6


def test_great_circle_is_geodesic():
    b, (v,) = setup(3, 1)
    v = TangentS6(b, v.X / np.linalg.norm(v.X))
    vel = lambda p: (p @ b.x)[:, None] * v.X - (p @ v.X)[:, None] * b.x  # noqa: E731
    assert np.linalg.norm(s6.connection6(vel, v)) <= 1e-6


@pytest.mark.parametrize("seed", range(10))
def test_G6_examples(seed):
    _, (x, y, _) = setup(seed)
    assert np.linalg.norm(s6.G6(x, x).X) <= 1e-5
    assert abs(s6.metric(s6.G6(x, y), x)) <= 1e-5
    assert np.linalg.norm(s6.G6(x, s6.J6(y)).X + s6.J6(s6.G6(x, y)).X) <= 1e-5
    assert np.allclose(s6.G6(x, y).X, s6.G6_closed(x, y).X, atol=1e-5)


def test_identity_suite_1000():
    checks = s6.identity_suite(1000, seed=0)
    assert all_passed(checks)
    measured = [c for c in checks if c.name == "G_norm_constant_measured"]
    assert len(measured) == 1 and measured[0].threshold is None


def test_chart(gen):
    b = PointS6.random(gen)
    chart = ChartS6(b)
    c = gen.uniform(-0.2, 0.2, (10, 6))
    assert np.allclose(chart.point(np.zeros(6))[0], b.x)
    assert np.allclose(chart.coords(chart.point(c)), c, atol=1e-12)
    f = chart.frame(c)
    fd_frame = np.swapaxes(fd.gradient(chart.point, c, 1e-5), 1, 2)
    assert np.allclose(f, fd_frame, atol=1e-9)
    g, jm, pm = chart.tensors(c)
    assert pm is None
    assert np.allclose(jm @ jm, -np.eye(6), atol=1e-12)
    # tiny radii use the series branch
    tiny = np.full((1, 6), 1e-5)
    assert np.allclose(chart.frame(tiny), np.swapaxes(fd.gradient(chart.point, tiny, 1e-6), 1, 2), atol=1e-9)


def test_curvature_closed_form_matches_chart(gen):
    b, (x, y, z) = setup(4)
    chart = ChartS6(b)
    riem = chart.local().riemann()
    cx, cy, cz = (chart.components(v.X) for v in (x, y, z))
    num = chart.embed(np.einsum("lijk,i,j,k->l", riem, cx, cy, cz))
    exact = s6.curvature_apply(b.x, x.X, y.X, z.X)
    assert np.linalg.norm(num - exact) <= 1e-3 * np.linalg.norm(exact)
