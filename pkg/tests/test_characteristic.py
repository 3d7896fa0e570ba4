import numpy as np
import pytest
from hypothesis import given, strategies as st

from heischar.characteristic import (CASES, ScanConfig, boundary_sample, certify_convex, char_measure,
                                     disc_certificate, horizontal_normal, intersection_sine, scan, tangent_frame,
                                     tangent_membership)
from heischar.core import HPoint, TangentVector, distance
from heischar.domains import (ImplicitDomain, TorusDomain, crescent, disc, ellipse, euclidean_ball, half_space,
                              koranyi_ball, make_torus)
from heischar.errors import CharacteristicPointError, HeisError, NonConvexError, ProfileError
from heischar.fields import ScalarField, negate_field, scale_field

SQRT3 = np.sqrt(3.0)
XI = np.array([SQRT3, 0.0, 1.0])


def example_torus():
    return make_torus(disc(1, 2, 1))


def bump(psi):
    return ScalarField(lambda P: 1 + 0.3 * np.sin(P[..., 0] + 2 * P[..., 1] - P[..., 2]), 3, psi.lower, psi.upper,
                       grad=lambda P: 0.3 * np.cos(P[..., 0] + 2 * P[..., 1] - P[..., 2])[..., None]
                       * np.array([1.0, 2.0, -1.0]))


def torus_min_m_oracle(n=2_000_001):
    """Minimum of m over the example torus from the profile angle alone.

    With t - 1 = cos(phi), |z|^2 - 2 = sin(phi): |grad_H Psi| = 4|z| and
    |grad Psi|^2 = 16|z|^2 sin^2(phi) + 4 cos^2(phi).
    """
    phi = np.linspace(0, 2 * np.pi, n)
    rz = np.sqrt(2 + np.sin(phi))
    m = 4 * rz / (np.sqrt(16 * rz**2 * np.sin(phi) ** 2 + 4 * np.cos(phi) ** 2) * (1 + 2 * rz))
    return m.min()


# -- pointwise ------------------------------------------------------------------------


def test_char_measure_examples():
    K = koranyi_ball()
    assert char_measure(K, HPoint(0, 0, 1)) == 0
    assert char_measure(K, [1, 0, 0]) == pytest.approx(1 / 3, abs=1e-12)
    assert char_measure(example_torus(), XI) == pytest.approx(1 / (1 + 2 * SQRT3), abs=1e-12)


def test_torus_oracle_matches_closed_form():
    assert torus_min_m_oracle() == pytest.approx(1 / (1 + 2 * SQRT3), abs=1e-10)


def test_boundary_sample():
    s = boundary_sample(example_torus(), XI, (0.25, 0.0))
    assert s.m == pytest.approx(1 / (1 + 2 * SQRT3), abs=1e-12)
    assert np.allclose(s.grad.horizontal, [4 * SQRT3, 0], atol=1e-9)
    with pytest.raises(HeisError):
        boundary_sample(example_torus(), [0, 0, 0])


@given(st.floats(0, 1), st.floats(0, 2 * np.pi))
def test_m_bounded(s, th):
    for dom in (example_torus(), make_torus(ellipse(0, 3, 2, 1))):
        P = dom.boundary_points(s, th)
        assert 0 <= char_measure(dom, P) <= np.sqrt(2)


def test_m_bounded_on_implicit_domains(rng):
    for dom in (koranyi_ball(), euclidean_ball((0, 0, 5)), half_space(), koranyi_ball(HPoint(0.5, -1, 2), 2)):
        P = dom.sample_boundary(2000, rng)
        m = char_measure(dom, P)
        assert np.all((m >= 0) & (m <= np.sqrt(2)))


def test_tangent_frame_examples():
    f = tangent_frame(example_torus(), XI)
    assert f.intersection_dim == 1
    expected = np.array([0, 1, -2 * SQRT3]) / np.sqrt(13)
    assert abs(abs(f.generator @ expected) - 1) < 1e-12
    assert tangent_frame(koranyi_ball(), [0, 0, 1]).intersection_dim == 2
    assert tangent_frame(half_space(), [0, 0, 0]).intersection_dim == 2


def test_tangent_basis_orthogonal_to_gradient(rng):
    for dom in (example_torus(), koranyi_ball()):
        for P in dom.sample_boundary(50, rng):
            f = tangent_frame(dom, P)
            g = dom.psi.gradient(P)
            assert np.max(np.abs(f.tangent_basis @ g)) <= 1e-10 * np.linalg.norm(g)
            assert np.allclose(f.tangent_basis @ f.tangent_basis.T, np.eye(2), atol=1e-12)
            if f.generator is not None:
                # the generator is tangent and horizontal
                assert abs(f.generator @ g) <= 1e-10 * np.linalg.norm(g)
                x, y = P[0], P[1]
                assert abs(f.generator @ [-2 * y, 2 * x, 1]) <= 1e-10 * (1 + 2 * np.hypot(x, y))


def test_tangent_membership_examples():
    T = example_torus()
    p = HPoint.from_array(XI)
    assert tangent_membership(T, XI, TangentVector.from_array(p, [0, 1, 0]))
    assert not tangent_membership(T, XI, TangentVector.from_array(p, [1, 0, 0]))
    assert tangent_membership(T, XI, [0, 0, 0])
    with pytest.raises(HeisError):
        tangent_membership(koranyi_ball(), [1, 0, 0], [0, 1, 0])


@given(st.floats(0, 1), st.floats(0, 2 * np.pi), st.floats(-1, 1), st.floats(-1, 1))
def test_tangent_membership_agrees_with_gradient(s, th, a, b):
    T = make_torus(ellipse(0, 3, 2, 1))
    P = T.boundary_points(s, th)
    f = tangent_frame(T, P)
    v = a * f.tangent_basis[0] + b * f.tangent_basis[1]
    assert tangent_membership(T, P, v)
    g = T.psi.gradient(P)
    assert not tangent_membership(T, P, g / np.linalg.norm(g))


def test_horizontal_normal_examples():
    n = horizontal_normal(example_torus(), XI)
    assert np.allclose(n.as_array(), [1, 0], atol=1e-12)
    n = horizontal_normal(koranyi_ball(), [1, 0, 0])
    assert np.allclose(n.as_array(), [1, 0], atol=1e-12)
    with pytest.raises(CharacteristicPointError):
        horizontal_normal(koranyi_ball(), [0, 0, 1])


def test_horizontal_normal_flips_with_sign():
    K = koranyi_ball()
    flipped = ImplicitDomain(negate_field(K.psi), "neg")
    for P in ([1, 0, 0], [0.6, 0.3, np.sqrt(1 - 0.45**2)]):
        a, b = horizontal_normal(K, P), horizontal_normal(flipped, P)
        assert np.allclose(a.as_array(), -b.as_array(), atol=1e-12)


# -- criteria and invariance -------------------------------------------------------------


def test_criteria_equivalence(rng):
    doms = [example_torus(), make_torus(ellipse(0, 3, 2, 1)), koranyi_ball(), euclidean_ball((0, 0, 5)), half_space()]
    known = {2: [[0, 0, 1], [0, 0, -1]], 3: [[0, 0, 4], [0, 0, 6]], 4: [[0, 0, 0]]}
    for i, dom in enumerate(doms):
        P = np.vstack([dom.sample_boundary(500, rng)] + ([np.array(known[i], float)] if i in known else []))
        G = dom.psi.gradient(P)
        m = char_measure(dom, P)
        dims = np.array([tangent_frame(dom, p).intersection_dim for p in P])
        sine = intersection_sine(P, G)
        assert np.array_equal(m < 1e-5, dims == 2)
        assert np.array_equal(m < 1e-5, sine < 1e-5)
        if i in known:
            assert np.all(dims[-len(known[i]):] == 2)


def test_measure_independent_of_defining_function(rng):
    for dom in (koranyi_ball(), example_torus(), euclidean_ball((0, 0, 5))):
        scaled = scale_field(dom.psi, bump(dom.psi))
        P = dom.sample_boundary(3000, rng)
        m1 = char_measure(dom, P)
        m2 = char_measure(type(dom)(**{**dom.__dict__, "psi": scaled}), P)
        assert np.max(np.abs(m1 - m2)) <= 1e-9


def test_theta_invariance_on_tori():
    for prof in (disc(1, 2, 1), ellipse(0, 3, 2, 1)):
        T = make_torus(prof)
        s = np.linspace(0, 1, 64, endpoint=False)
        M = np.array([char_measure(T, T.boundary_points(s, np.full_like(s, th))) for th in np.linspace(0, 6, 9)])
        assert np.max(np.ptp(M, axis=0)) <= 1e-10


# -- scanning ------------------------------------------------------------------------------


def test_scan_example_torus_against_oracle():
    rep = scan(example_torus())
    assert rep.characteristic == []
    assert rep.verdict == "no characteristic point found at resolution 256x64"
    assert rep.global_min_m["value"] == pytest.approx(torus_min_m_oracle(), abs=1e-4)
    assert rep.global_min_m["value"] == pytest.approx(1 / (1 + 2 * SQRT3), abs=1e-8)
    # the minimum sits at |z|^2 = 3, t = 1
    x, y, t = rep.global_min_m["location"]
    assert x * x + y * y == pytest.approx(3, abs=1e-4) and t == pytest.approx(1, abs=1e-3)
    assert rep.global_min_hgrad["value"] == pytest.approx(4, rel=1e-6)
    assert rep.mesh["theta_spread"] <= 1e-10


def test_scan_full_refinement_agrees():
    T = make_torus(ellipse(0, 3, 2, 1))
    a = scan(T, ScanConfig(mesh=(64, 16)))
    b = scan(T, ScanConfig(mesh=(64, 16), full_refine=True))
    assert a.characteristic == b.characteristic == []
    assert a.global_min_m["value"] == pytest.approx(b.global_min_m["value"], abs=1e-8)


def test_scan_koranyi_ball():
    rep = scan(koranyi_ball())
    locs = sorted(rep.characteristic_points().tolist(), key=lambda p: p[2])
    assert len(locs) == 2
    for p, q in zip(locs, ([0, 0, -1], [0, 0, 1])):
        assert distance(HPoint.from_array(p), HPoint.from_array(q)) <= 1e-6
    assert all(c["converged"] for c in rep.characteristic)
    assert rep.violations == 0


def test_scan_sphere_and_half_space():
    rep = scan(euclidean_ball((0, 0, 5)), ScanConfig(grid=32))
    assert len(rep.characteristic) >= 1
    for c in rep.characteristic:
        x, y, t = c["location"]
        g = np.array([x, y, t - 5])
        assert np.linalg.norm(np.cross(g, [-2 * y, 2 * x, 1])) <= 1e-6
    rep = scan(half_space(), ScanConfig(grid=16))
    assert len(rep.characteristic) == 1
    assert np.allclose(rep.characteristic[0]["location"], 0, atol=1e-8)


def test_scan_identical_under_defining_rescaling():
    K = koranyi_ball()
    a = scan(K, ScanConfig(grid=32))
    b = scan(ImplicitDomain(scale_field(K.psi, bump(K.psi)), K.name, K.params, K.parametrization), ScanConfig(grid=32))
    pa, pb = a.characteristic_points(), b.characteristic_points()
    assert pa.shape == pb.shape == (2, 3)
    assert np.max(np.abs(pa - pb)) <= 1e-8


def test_scan_config_validation():
    with pytest.raises(HeisError):
        ScanConfig(mesh=(4, 64))
    with pytest.raises(HeisError):
        ScanConfig(tol_char=1e-2, tol_suspect=1e-3)
    with pytest.raises(HeisError):
        ScanConfig(dedupe_radius=0)
    with pytest.raises(HeisError):
        scan(object())


def test_scan_reports_tolerances():
    rep = scan(example_torus(), ScanConfig(mesh=(32, 8)))
    for key in ("tol_char", "tol_suspect", "dedupe_radius", "refine_iters"):
        assert key in rep.tolerances
    assert any("factor 2" in n for n in rep.notes)


# -- certificates ----------------------------------------------------------------------


def test_certify_example_torus():
    cert = certify_convex(example_torus(), 10_000)
    assert cert.passed and np.all(cert.dims == 1)
    assert sum(cert.case_counts.values()) == 10_000
    assert set(cert.case_counts) == set(CASES)
    assert cert.disc_bound["min_hgrad"] == pytest.approx(4)


def test_certify_ellipse_and_crescent():
    assert certify_convex(make_torus(ellipse(0, 3, 2, 1)), 10_000).passed
    with pytest.raises(NonConvexError):
        certify_convex(make_torus(crescent(0, 3, 1)))
    with pytest.raises(HeisError):
        certify_convex(koranyi_ball())


def test_certificate_implies_clean_scan():
    for prof in (disc(1, 2, 1), ellipse(0, 3, 2, 1)):
        T = make_torus(prof)
        assert certify_convex(T, 2000).passed
        assert scan(T, ScanConfig(mesh=(128, 16))).characteristic == []


def test_disc_certificate_examples():
    assert disc_certificate((1, 2), 1)["min_hgrad_sq"] == pytest.approx(16)
    assert disc_certificate((1, 2), 1)["min_hgrad"] == pytest.approx(4)
    assert disc_certificate((0, 2), 1)["min_hgrad_sq"] == pytest.approx(16)
    with pytest.raises(ProfileError):
        disc_certificate((1, 1), 1)


@given(st.floats(-3, 3), st.floats(1.0, 4.0), st.floats(0.2, 0.9))
def test_disc_certificate_matches_sampled_minimum(a1, a2, frac):
    r = frac * a2
    T = make_torus(disc(a1, a2, r))
    P = T.boundary_points(np.linspace(0, 1, 4001), np.zeros(4001))
    G = T.psi.gradient(P)
    hx = G[:, 0] + 2 * P[:, 1] * G[:, 2]
    hy = G[:, 1] - 2 * P[:, 0] * G[:, 2]
    assert np.min(hx * hx + hy * hy) == pytest.approx(disc_certificate((a1, a2), r)["min_hgrad_sq"], rel=1e-5)


def test_torus_domain_rescaled_keeps_dataclass():
    T = example_torus()
    S = TorusDomain(T.profile, scale_field(T.psi, bump(T.psi)))
    assert char_measure(S, XI) == pytest.approx(char_measure(T, XI), abs=1e-12)
