import numpy as np
import pytest
from hypothesis import given, strategies as st

from heischar.core import HPoint, dilate, gauge_array
from heischar.domains import (ImplicitDomain, boundary_mesh, crescent, disc, ellipse, euclidean_ball,
                              expression_profile, half_space, koranyi_ball, make_torus, ray_exit, rounded_polygon)
from heischar.errors import HeisError, MeshError, NonConvexError, ProfileError
from heischar.fields import ScalarField

SQRT3 = np.sqrt(3.0)


# -- profiles ----------------------------------------------------------------------


def test_disc_profile_and_example_torus():
    p = disc(1, 2, 1)
    assert p.y_min == pytest.approx(1.0)
    T = make_torus(p)
    assert np.allclose(T.boundary_points(0.25, 0.0), [SQRT3, 0, 1], atol=1e-15)
    assert T.psi(np.array([SQRT3, 0, 1])) == pytest.approx(0, abs=1e-14)


def test_profiles_touching_axis_rejected():
    with pytest.raises(ProfileError):
        disc(0, 0.5, 1)
    with pytest.raises(ProfileError):
        disc(0, 1, 1)
    with pytest.raises(ProfileError):
        ellipse(0, 1, 2, 1)
    # the open unit half-disc, read from its expression, reaches y = 0
    with pytest.raises(ProfileError):
        expression_profile("x^2 + y^2 - 1", {}, (0, 0.5), ((-2, 2), (-1, 2)))


def test_expression_profile_matches_builtin_disc():
    p = expression_profile("(x - a1)^2 + (y - a2)^2 - r^2", {"a1": 1, "a2": 2, "r": 1}, (1, 2), ((-1, 3), (0, 4)))
    s = np.linspace(0, 1, 33, endpoint=False)
    pts = p.points(s)
    assert np.allclose(np.hypot(pts[:, 0] - 1, pts[:, 1] - 2), 1, atol=1e-10)
    assert p.y_min == pytest.approx(1.0, abs=1e-9)
    assert p.params["expression"] == "(x - 1.0)^2 + (y - 2.0)^2 - 1.0^2"


def test_profile_curve_on_zero_set():
    for p in (disc(0, 3, 1.5), ellipse(0, 3, 2, 1), rounded_polygon([[0, 2], [2, 2], [1, 3.5]], 0.2),
              crescent(0, 3, 1)):
        pts = p.points(np.linspace(0, 1, 501))
        assert np.max(np.abs(p.implicit(pts))) <= 1e-8 * p.scale
        assert p.y_min > 0


def test_rounded_polygon_requires_convex_vertices():
    with pytest.raises(NonConvexError):
        rounded_polygon([[0, 2], [2, 2], [1, 2.5], [2, 4], [0, 4]], 0.1)
    with pytest.raises(ProfileError):
        rounded_polygon([[0, 2], [2, 2]], 0.1)


def test_rounded_polygon_orientation_independent():
    a = rounded_polygon([[0, 2], [2, 2], [1, 3.5]], 0.2)
    b = rounded_polygon([[1, 3.5], [2, 2], [0, 2]], 0.2)
    P = np.random.default_rng(3).uniform([-0.5, 1.5], [2.5, 4], size=(200, 2))
    assert np.allclose(a.implicit(P), b.implicit(P))


def test_interior_point_must_be_inside():
    with pytest.raises(ProfileError):
        expression_profile("(x - 1)^2 + (y - 2)^2 - 1", {}, (5, 5), ((-1, 6), (0, 6)))


def test_ray_exit_counts_crossings():
    c = crescent(0, 3, 1)
    with pytest.raises(NonConvexError):
        ray_exit(c.implicit, [-0.2, 3.3], [[0, -1]])
    d = disc(1, 2, 1)
    assert ray_exit(d.implicit, [1, 2], [[1, 0]])[0] == pytest.approx(1, abs=1e-12)


# -- H^1 domains --------------------------------------------------------------------


def test_koranyi_examples():
    K = koranyi_ball()
    assert K.psi(np.array([0, 0, 1.0])) == 0
    assert K.psi(np.array([1, 0, 0.0])) == 0
    assert K.psi(np.array([0.3, -0.2, 0.1])) == pytest.approx((0.13**2) + 0.01 - 1)
    with pytest.raises(HeisError):
        koranyi_ball(r=0)


@given(st.floats(0.3, 3.0))
def test_koranyi_dilation_covariance(lam):
    unit = koranyi_ball()
    big = koranyi_ball(r=lam)
    u = np.linspace(0, 1, 41)
    U, V = np.meshgrid(u, u)
    P = unit.parametrization(U.ravel(), V.ravel())
    Q = np.column_stack([lam * P[:, 0], lam * P[:, 1], lam * lam * P[:, 2]])
    assert np.max(np.abs(big.psi(Q))) / lam**4 <= 1e-10


def test_koranyi_off_centre_is_left_translate(rng):
    c = HPoint(0.4, -0.3, 0.8)
    K = koranyi_ball(c, 1.2)
    X = K.sample_boundary(200, rng)
    assert np.max(np.abs(K.psi(X))) < 1e-12
    assert K.psi.check_gradient() < 1e-6


def test_implicit_domain_requires_sign_change():
    f = ScalarField(lambda P: np.sum(P * P, axis=-1) + 1, 3, -1, 1)
    with pytest.raises(MeshError):
        ImplicitDomain(f)


# -- meshing ------------------------------------------------------------------------


def test_torus_mesh_16x8():
    T = make_torus(disc(1, 2, 1))
    mesh = boundary_mesh(T, (16, 8))
    assert len(mesh) == 128
    assert np.max(np.abs(mesh.values)) <= 1e-10
    # |z|^2 = y(s), t = x(s) exactly
    W = T.profile.points(mesh.st[:, 0])
    assert np.allclose(mesh.points[:, 0] ** 2 + mesh.points[:, 1] ** 2, W[:, 1], rtol=1e-14)
    assert np.array_equal(mesh.points[:, 2], W[:, 0])


def test_torus_psi_theta_invariant():
    T = make_torus(ellipse(0, 3, 2, 1))
    s = np.linspace(0, 1, 50, endpoint=False)
    for th in np.linspace(0, 2 * np.pi, 7):
        assert np.max(np.abs(T.psi(T.boundary_points(s, th + 0 * s)))) < 1e-12


def test_koranyi_mesh_32():
    K = koranyi_ball()
    mesh = boundary_mesh(K, 32)
    assert len(mesh) > 1000
    assert np.max(np.abs(gauge_array(mesh.points) - 1)) <= 1e-8
    assert np.max(np.abs(mesh.values)) <= 1e-10 * mesh.scale
    assert mesh.max_move_cells <= 2


def test_mesh_errors():
    with pytest.raises(MeshError):
        boundary_mesh(euclidean_ball(radius=1), 2)
    with pytest.raises(MeshError):
        boundary_mesh(half_space(), 1)
    with pytest.raises(MeshError):
        boundary_mesh(object(), 8)


def test_half_space_mesh():
    mesh = boundary_mesh(half_space(), 16)
    assert np.max(np.abs(mesh.points[:, 2])) < 1e-12


def test_dilated_koranyi_mesh_matches_dilation():
    for lam in (0.5, 2.0):
        mesh = boundary_mesh(koranyi_ball(r=lam), 24)
        back = np.array([dilate(1 / lam, HPoint.from_array(p)).as_array() for p in mesh.points[:50]])
        assert np.max(np.abs(gauge_array(back) - 1)) < 1e-8
