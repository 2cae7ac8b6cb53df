from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nkhyper import catalog, quat
from nkhyper import hypersurface as H
from nkhyper.obstructions import anticommuting_model
from nkhyper.quat import DomainError

from strategies import finite


def _generic_map(s):
    p = quat.exp_im(s[:, :3])
    v = np.column_stack([s[:, 3], s[:, 4], 0.3 * np.sin(s[:, 0]) + 0.2 * s[:, 1] * s[:, 3]])
    return np.concatenate([p, quat.exp_im(v)], axis=1)


GENERIC = H.Immersion("s3s3", _generic_map, (-0.5,) * 5, (0.5,) * 5, "generic")


def samples_of(imm, n, seed=0):
    return [H.sample(imm, p) for p in H.seeded_params(imm, n, seed)]


@pytest.fixture(scope="module")
def f1_samples():
    return samples_of(catalog.f1(), 3)


@pytest.fixture(scope="module")
def generic_samples():
    return samples_of(GENERIC, 3, seed=3)


@pytest.fixture(scope="module")
def sphere_sample():
    return samples_of(catalog.geodesic_sphere_s6(np.pi / 3), 1)[0]


ALL = ["f1", "f2", "f3", "equator", "sphere:1.0471975512", "generic"]


def _imm(name):
    return GENERIC if name == "generic" else catalog.entry(name).immersion


@pytest.mark.parametrize("name", ALL)
def test_sample_invariants(name):
    for smp in samples_of(_imm(name), 2, seed=5):
        res = H.contact_residuals(smp)
        assert res["normal_orthogonality"] <= 1e-8 and res["normal_unit"] <= 1e-8
        assert res["A_symmetry"] <= 1e-6
        for key in ("f_is_g_U", "f_phi", "phi_squared", "phi_skew", "phi_metric"):
            assert res[key] <= 1e-6, key
        assert H.second_form_defect(smp) <= 1e-5
        assert np.allclose(smp.E.T @ smp.local.g @ smp.E, np.eye(5), atol=1e-10)


@pytest.mark.parametrize("name", ["f1", "f3", "sphere:1.0471975512", "generic"])
def test_normal_flip_invariance(name):
    smp = samples_of(_imm(name), 1, seed=8)[0]
    flip = smp.flipped_sample()
    assert np.allclose(flip.normal, -smp.normal, atol=1e-14)
    assert np.allclose(flip.A, -smp.A, atol=1e-10)
    assert np.allclose(flip.U, -smp.U, atol=1e-14)
    for a, b in zip(H.commutator_norms(smp), H.commutator_norms(flip)):
        assert abs(a - b) <= 1e-10
    assert abs(H.hopf_defect(smp) - H.hopf_defect(flip)) <= 1e-10


def test_equator_and_sphere(sphere_sample):
    eq = samples_of(catalog.equator_s5(), 1)[0]
    assert np.linalg.norm(eq.A) <= 1e-6
    vals = np.linalg.eigvalsh(sphere_sample.A_sym)
    assert vals.max() - vals.min() <= 1e-4
    assert np.allclose(vals, 1 / np.tan(np.pi / 3), atol=1e-4)
    assert H.hopf_defect(sphere_sample) <= 1e-5
    prof = H.principal_profile(sphere_sample)
    assert prof.nu == 1


def test_structure_field_derivative_on_f1(f1_samples, gen):
    for smp in f1_samples:
        for x in gen.standard_normal((3, 5)):
            assert H.structure_field_residual(smp, x / np.linalg.norm(x)) <= 1e-3


def test_codazzi_antisymmetry_and_values(f1_samples, generic_samples, gen):
    for smp in f1_samples + generic_samples:
        x, y = gen.standard_normal((2, 5))
        assert H.codazzi_residual(smp, x, x) == 0.0
        assert H.codazzi_residual(smp, x / np.linalg.norm(x), y / np.linalg.norm(y)) <= 1e-3


def test_gauss(gen):
    for smp in samples_of(catalog.f1(), 25, seed=2):
        x, y, z = gen.standard_normal((3, 5))
        x, y, z = (v / np.linalg.norm(v) for v in (x, y, z))
        assert H.gauss_residual(smp, x, y, z) <= 5e-3
    assert H.gauss_residual(smp, x, x, z) <= 1e-14
    r1 = H.gauss_residual(smp, x, y, z)
    assert H.gauss_residual(smp, 2 * x, 3 * y, z) == pytest.approx(6 * r1, rel=1e-9)


def test_gauss_generic_and_sphere(generic_samples, sphere_sample, gen):
    for smp in generic_samples + [sphere_sample]:
        x, y, z = gen.standard_normal((3, 5))
        assert H.gauss_residual(smp, x, y, z) <= 5e-3 * np.linalg.norm(x) * np.linalg.norm(y) * np.linalg.norm(z)


def test_hopf_controls():
    a = 0.7 * np.eye(5)
    u = np.array([0.0, 0, 0, 0, 1])
    assert H.hopf_defect(SimpleNamespace(U=u, A_sym=a)) == 0.0
    with pytest.raises(DomainError):
        H.hopf_defect(SimpleNamespace(U=np.zeros(5), A_sym=a))


def test_commutators_of_identity():
    _, phi = anticommuting_model(0.1, 0.2, 0.3)
    c, a = H.commutator_norms(SimpleNamespace(A_sym=np.eye(5), phi=phi))
    assert c == 0.0 and a == pytest.approx(2 * np.linalg.norm(phi))


def _phi_commuting_rotation(gen):
    """Orthogonal Q on span(X1..X4) commuting with phi, fixing U."""
    z = gen.standard_normal(2) + 1j * gen.standard_normal(2)
    w = gen.standard_normal(2) + 1j * gen.standard_normal(2)
    m = np.linalg.qr(np.column_stack([z, w]))[0]  # unitary 2x2
    # complex coordinates z_k = X_k + i phi X_k, k = 1, 2
    q = np.zeros((5, 5))
    re, im = m.real, m.imag
    q[np.ix_([0, 1], [0, 1])] = re
    q[np.ix_([2, 3], [2, 3])] = re
    q[np.ix_([2, 3], [0, 1])] = im
    q[np.ix_([0, 1], [2, 3])] = -im
    q[4, 4] = 1.0
    return q


@given(finite(0, 5), finite(0, 5), finite(-5, 5), st.integers(0, 2**32 - 1))
def test_anticommuting_spectrum_is_paired(lam, beta, mu, seed):
    a, phi = anticommuting_model(lam, beta, mu)
    q = _phi_commuting_rotation(quat.rng(seed))
    assert np.allclose(q @ phi, phi @ q, atol=1e-12)
    a = q @ a @ q.T
    assert np.abs(a @ phi + phi @ a).max() <= 1e-12 * (1 + lam + beta)
    u = np.eye(5)[4]
    assert abs(u @ a @ u - mu) <= 1e-12 * (1 + abs(mu))
    w = np.eye(5)[:, :4]
    vals = np.linalg.eigvalsh(w.T @ a @ w)
    assert np.allclose(np.sort(vals), np.sort(-vals), atol=1e-9 * (1 + lam + beta))
    reps = H.pair_spectrum(vals)
    assert reps is not None
    assert np.allclose(reps, sorted([lam, beta], reverse=True), atol=1e-8)


def test_pair_spectrum_rejects_unpaired():
    assert H.pair_spectrum([1.0, 0.5, -0.5, -0.9]) is None
    assert H.pair_spectrum([1.0, -1.0, 0.0]) is None
    assert H.pair_spectrum([0.3, -0.3004, 0.2, -0.2]) == pytest.approx([0.3002, 0.2])


def test_profile_of_f1(f1_samples):
    prof = H.principal_profile(f1_samples[0])
    assert prof.paired and 1 <= prof.nu <= 5
    assert np.all(np.diff(prof.eigenvalues) <= 0)


@pytest.mark.parametrize("name", ["f1", "f2", "f3", "sphere:1.0471975512"])
def test_hopf_identity_three_ways(name):
    for smp in samples_of(_imm(name), 3, seed=4):
        assert H.hopf_defect(smp) <= H.HOPF_TOL
        gen = quat.rng(4, 1)
        x, y = (H.orthogonal_to_U(smp, v) for v in gen.standard_normal((2, 5)))
        assert H.hopf_identity_residual(smp, x, y) <= 1e-3
        ch = H.hopf_identity_chain(smp, x, y)
        assert abs(ch["numeric"] - ch["via_codazzi"]) <= 1e-3
        assert abs(ch["numeric"] - ch["via_hopf"]) <= 1e-3
        assert H.hopf_identity_residual(smp, x, x) <= 1e-3


def test_hopf_identity_preconditions(f1_samples, generic_samples):
    gen = quat.rng(1)
    with pytest.raises(DomainError):
        H.hopf_identity_residual(f1_samples[0], f1_samples[0].U, gen.standard_normal(5))
    g = generic_samples[0]
    assert H.hopf_defect(g) > H.HOPF_TOL
    with pytest.raises(DomainError):
        H.hopf_identity_residual(g, *(H.orthogonal_to_U(g, v) for v in gen.standard_normal((2, 5))))


def test_distribution_dim4(generic_samples):
    for smp in generic_samples:
        d = H.distribution_D(smp)
        assert d.dim == 4 and d.c > 0
        assert abs(d.a**2 + d.b**2 + d.c**2 - 1) <= 1e-8
        assert d.residual <= 1e-6
        # the frame is orthonormal and e5 = U
        assert np.allclose(d.frame.T @ d.frame, np.eye(5), atol=1e-8)
        assert np.allclose(d.frame[:, 4], smp.U, atol=1e-10)
        loc = smp.local
        e4 = smp.to_chart(d.frame[:, 3])
        assert np.sqrt((loc.P @ e4 + e4) @ loc.g @ (loc.P @ e4 + e4)) <= 1e-6


def test_distribution_dim2(f1_samples):
    for smp in f1_samples:
        d = H.distribution_D(smp)
        assert d.dim == 2 and d.c is None
        assert abs(d.a**2 + d.b**2 - 1) <= 1e-8 and d.residual <= 1e-6


def test_distribution_requires_s3s3(sphere_sample):
    with pytest.raises(DomainError):
        H.distribution_D(sphere_sample)


def test_domain_errors():
    with pytest.raises(DomainError):
        H.Immersion("r7", _generic_map, (0,) * 5, (1,) * 5)
    with pytest.raises(DomainError):
        H.sample(GENERIC, np.full(5, 0.4999))


def test_sweep_is_deterministic_across_workers():
    fn = lambda smp, g: (H.commutator_norms(smp), g.standard_normal())  # noqa: E731
    a = H.sweep(catalog.f3(), 4, 9, fn)
    b = H.sweep(catalog.f3(), 4, 9, fn, workers=3)
    assert a == b
