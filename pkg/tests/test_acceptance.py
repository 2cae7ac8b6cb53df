"""Acceptance suite: one test group per criterion, summarised after the run."""

import time

import numpy as np
import pytest

from nkhyper import catalog, cli, s3s3
from nkhyper import hypersurface as H
from nkhyper import obstructions as O

C1 = "S3xS3 structure identities over 1000 seeded samples"
C2 = "curvature formula and nabla P against finite differences"
C3 = "G-norm constant 1/3"
C4 = "f1, f2, f3 commute with phi and satisfy Codazzi"
C5 = "S6 equator and geodesic hypersphere r = pi/3 controls"
C6 = "obstruction margins"
C7 = "feasibility scans against analytic margins, deterministic"
C8 = "Hopf identity on every Hopf catalog sample"

SURFACES = ("f1", "f2", "f3", "equator", "sphere:1.0471975511965976")


@pytest.fixture(scope="module")
def suite():
    start = time.perf_counter()
    checks = s3s3.identity_suite(samples=1000, seed=0)
    return {c.name: c for c in checks}, time.perf_counter() - start


@pytest.fixture(scope="module")
def surfaces():
    out = {}
    for name in SURFACES:
        code, rep = cli.run(["surface", "--name", name, "--samples", "100", "--seed", "0", "--workers", "4"])
        assert rep is not None
        out[name] = rep
    return out


def _worst(rep, key):
    return max(s[key] for s in rep["samples"])


# -- 1 ----------------------------------------------------------------------


@pytest.mark.criterion(1, C1)
def test_c1_identities(suite, record_property):
    checks, wall = suite
    limits = {"G_skew": 5e-5, "G_J": 5e-5, "G_g_skew": 5e-5, "G_four_slot": 1e-3,
              "J2": 1e-10, "P2": 1e-10, "PJ_anticommute": 1e-10, "J_isometry": 1e-10}
    for name, tol in limits.items():
        c = checks[name]
        record_property("measured", f"{name}: max {c.max:.3e} (limit {tol:g}, n = {c.count})")
        assert c.count >= 1000
        assert c.max <= tol
    record_property("measured", f"runtime {wall:.2f} s (limit 60 s)")
    assert wall <= 60


# -- 2 ----------------------------------------------------------------------


@pytest.mark.criterion(2, C2)
def test_c2_curvature(suite, record_property):
    c = suite[0]["curvature_relative"]
    record_property("measured", f"curvature relative error: max {c.max:.3e} at {c.count} points")
    assert c.count >= 50 and c.max <= 1e-3


@pytest.mark.criterion(2, C2)
def test_c2_nabla_p(suite, record_property):
    c = suite[0]["nablaP"]
    record_property("measured", f"nabla P residual: max {c.max:.3e} at {c.count} samples")
    assert c.count >= 200 and c.max <= 1e-4


# -- 3 ----------------------------------------------------------------------


@pytest.mark.criterion(3, C3)
def test_c3_g_norm(suite, record_property):
    c = suite[0]["G_norm_constant"]
    record_property("measured", f"|g(G(X,Y),G(X,Y)) - 1/3|: max {c.max:.3e} over {c.count} pairs")
    assert c.max <= 1e-3


# -- 4 ----------------------------------------------------------------------


@pytest.mark.criterion(4, C4)
@pytest.mark.parametrize("name", ["f1", "f2", "f3"])
def test_c4_product_immersions(surfaces, name, record_property):
    rep = surfaces[name]
    assert len(rep["samples"]) == 100
    comm, cod = _worst(rep, "commutator"), _worst(rep, "codazzi")
    record_property("measured", f"{name}: commutator {comm:.3e}, Codazzi {cod:.3e}")
    assert comm <= 1e-5
    assert cod <= 1e-3


# -- 5 ----------------------------------------------------------------------


@pytest.mark.criterion(5, C5)
def test_c5_equator(surfaces, record_property):
    rep = surfaces["equator"]
    a, anti = _worst(rep, "shape_norm"), _worst(rep, "anticommutator")
    record_property("measured", f"equator: |A| {a:.3e}, |A phi + phi A| {anti:.3e}")
    assert a <= 1e-6 and anti <= 1e-6


@pytest.mark.criterion(5, C5)
def test_c5_sphere(surfaces, record_property):
    rep = surfaces["sphere:1.0471975511965976"]
    spread, comm = _worst(rep, "eigenvalue_spread"), _worst(rep, "commutator")
    record_property("measured", f"sphere r = pi/3: spread {spread:.3e}, commutator {comm:.3e}")
    assert spread <= 1e-4 and comm <= 1e-5


# -- 6 ----------------------------------------------------------------------


@pytest.mark.criterion(6, C6)
def test_c6_closed_form_margins(record_property):
    gen = np.random.default_rng(0)
    worst = 0.0
    for _ in range(20):
        lam, beta = gen.uniform(0.1, 2.0, 2)
        mu = gen.uniform(-2.0, 2.0)
        co = O.CaseICoefficients.random(gen, lam, beta + 0.05 if abs(lam - beta) < 0.05 else beta, mu)
        worst = max(worst, abs(O.case1_chain(co).margin - 1 / 3))
    m3ii = O.case3ii_margin().margin
    b1, b2 = O.case3iii_branch_margins().margins
    d2 = O.dim2_margin(0.0)
    record_property("measured", f"case I |margin - 1/3| {worst:.1e} over 20 random inputs")
    record_property("measured", f"III-(ii) {m3ii!r}, III-(iii) {b1!r}, {b2!r}, dim 2 {d2!r}")
    assert worst <= 1e-12
    assert abs(m3ii - 1 / 16) <= 1e-12
    assert abs(b1 - np.sqrt(1 / 6)) <= 1e-12
    assert abs(b2 - 2 * np.sqrt(2) / np.sqrt(3)) <= 1e-12
    assert abs(d2 - 1 / 6) <= 1e-12


@pytest.mark.criterion(6, C6)
def test_c6_mu_margins(record_property):
    profiles = [O.CaseProfile("II-(i)", 0.3, 0.7, 0.3), O.CaseProfile("II-(ii)", 0.0, 0.7, -1.25),
                O.CaseProfile("III-(i)", 0.0, 0.5, -0.5), O.CaseProfile("IV-(i)", 0.4, 0.4, 0.4),
                O.CaseProfile("IV-(ii)", 0.0, 0.0, 0.25)]
    for p in profiles:
        assert abs(O.case2_case4_chain(p).margin - abs(p.mu)) <= 1e-12
    record_property("measured", f"II/III-(i)/IV margin equals |mu| on {len(profiles)} profiles")


@pytest.mark.criterion(6, C6)
@pytest.mark.parametrize("case", ["s6-nu3", "s6-nu2"])
def test_c6_s6_grid_minima(case, record_property):
    rep = O.feasibility_scan(case, resolution=100, refine=50)
    record_property("measured", f"{case}: grid min {rep.details['grid_min']:.3e}, refined min {rep.scan_min:.3e}")
    assert rep.details["grid_min"] > 0 and rep.scan_min > 0


# -- 7 ----------------------------------------------------------------------


@pytest.mark.criterion(7, C7)
@pytest.mark.parametrize("case", O.CASE_IDS)
def test_c7_scans(case, record_property):
    a = O.feasibility_scan(case, workers=1)
    b = O.feasibility_scan(case, workers=4)
    c = O.feasibility_scan(case, workers=1)
    record_property("measured", f"{case}: scan min {a.scan_min:.6g} vs bound {a.scan_bound:.6g}")
    assert a.scan_min >= 0.99 * a.scan_bound
    assert (a.scan_min, a.scan_argmin) == (b.scan_min, b.scan_argmin) == (c.scan_min, c.scan_argmin)


# -- 8 ----------------------------------------------------------------------


@pytest.mark.criterion(8, C8)
def test_c8_hopf_lemma(surfaces, record_property):
    count, worst = 0, 0.0
    for rep in surfaces.values():
        for s in rep["samples"]:
            if s["hopf_defect"] <= H.HOPF_TOL:
                assert s["hopf_lemma"] is not None
                count += 1
                worst = max(worst, s["hopf_lemma"])
    record_property("measured", f"{count} Hopf samples, worst residual {worst:.3e}")
    assert count == 100 * len(SURFACES)
    assert worst <= 1e-3


@pytest.mark.criterion(8, C8)
def test_c8_other_radii(record_property):
    worst = 0.0
    for r in (0.4, 1.2, 2.5):
        imm = catalog.geodesic_sphere_s6(r)
        recs = H.sweep(imm, 20, 1, cli._surface_record)
        worst = max(worst, max(s["hopf_lemma"] for s in recs))
    record_property("measured", f"spheres r = 0.4, 1.2, 2.5: worst residual {worst:.3e}")
    assert worst <= 1e-3
