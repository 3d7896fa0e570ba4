"""Planar profiles, the H^1 domains built from them, and boundary meshing.

A profile U lives in the open upper half-plane with coordinates
``(a, b) = (t, |z|^2)``.  Its lift ``Omega = {(z, t) : t + i|z|^2 in U}`` is a
solid torus around the center {z = 0}; the boundary is parametrised by

    B(s, theta) = (sqrt(b(s)) cos theta, sqrt(b(s)) sin theta, a(s))

where ``gamma(s) = (a(s), b(s))``, ``s in [0, 1)``, traces the profile boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import expr as _expr
from ._parallel import chunked_apply
from .core import HPoint, group_mul_array, horizontal_components
from .errors import HeisError, MeshError, NonConvexError, ProfileError
from .fields import GradientData, ScalarField, compose_profile

CurveFn = Callable[[np.ndarray], np.ndarray]

PROFILE_CHECK_SAMPLES = 1024
SIMPLE_CHECK_SAMPLES = 256
RAY_PROBES = 512
RAY_TOL = 1e-12


# -- ray crossings (shared with the convex-geometry module) -----------------------


def ray_exit(u: ScalarField, A, D, tol: float = RAY_TOL, probes: int = RAY_PROBES) -> np.ndarray:
    """Parameter ``tau`` where the ray ``A + tau * D`` leaves ``{u < 0}``.

    ``D`` has shape (k, 2).  The ray is probed out to twice the diagonal of the
    field's box; more than one sign change means the region is not star-shaped
    about A along that ray, and the call refuses rather than pick a root.
    """
    A = np.asarray(A, float)
    D = np.atleast_2d(np.asarray(D, float))
    if u(A) >= 0:
        raise ProfileError(f"ray origin {A.tolist()} is not inside the profile")
    dn = np.linalg.norm(D, axis=1)
    if np.any(dn == 0):
        raise ProfileError("zero ray direction")
    tmax = 2.0 * u.diagonal / dn
    grid = np.linspace(0.0, 1.0, probes)
    taus = tmax[:, None] * grid[None, :]
    vals = u(A + taus[..., None] * D[:, None, :])
    pos = vals > 0
    changes = np.count_nonzero(pos[:, 1:] != pos[:, :-1], axis=1)
    if np.any(changes == 0) or np.any(~pos[:, -1]):
        raise ProfileError("ray never leaves the profile inside its bounding box")
    if np.any(changes > 1):
        bad = int(np.flatnonzero(changes > 1)[0])
        raise NonConvexError(
            f"ray along {D[bad].tolist()} crosses the profile boundary {int(changes[bad])} times"
        )
    idx = np.argmax(pos, axis=1)
    rows = np.arange(len(D))
    lo, hi = taus[rows, idx - 1], taus[rows, idx]
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        inside = u(A + mid[:, None] * D) <= 0
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
        if np.all(hi - lo <= np.spacing(np.maximum(np.abs(hi), 1.0)) * 4):
            break
    return 0.5 * (lo + hi)


def _segments_cross(P: np.ndarray) -> bool:
    """True if the closed polyline through P has two non-adjacent crossing edges."""
    a, b = P, np.roll(P, -1, axis=0)
    m = len(P)

    def orient(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])

    A1, B1 = a[:, None], b[:, None]
    A2, B2 = a[None, :], b[None, :]
    o1, o2 = orient(A1, B1, A2), orient(A1, B1, B2)
    o3, o4 = orient(A2, B2, A1), orient(A2, B2, B1)
    hit = (o1 * o2 < 0) & (o3 * o4 < 0)
    i, j = np.indices((m, m))
    near = (np.abs(i - j) <= 1) | (np.abs(i - j) == m - 1)
    return bool(np.any(hit & ~near))


# -- profiles --------------------------------------------------------------------


@dataclass(frozen=True)
class Profile:
    """A planar region U (negative inside) with an optional closed boundary curve."""

    implicit: ScalarField
    curve: Optional[CurveFn] = None
    interior: Optional[tuple[float, float]] = None
    name: str = "profile"
    params: dict = field(default_factory=dict, compare=False)
    y_min: Optional[float] = None

    def __post_init__(self):
        if self.implicit.dim != 2:
            raise ProfileError("profile implicit field must be planar")
        if self.interior is not None:
            A = np.asarray(self.interior, float)
            object.__setattr__(self, "interior", (float(A[0]), float(A[1])))
            if not self.implicit(A) < 0:
                raise ProfileError(f"interior point {A.tolist()} is not inside the profile")
        if self.curve is None and self.interior is not None:
            object.__setattr__(self, "curve", _radial_trace(self.implicit, self.interior))
        if self.curve is None:
            if self.y_min is None or not self.y_min > 0:
                raise ProfileError("profile without boundary curve needs a positive y_min")
            return
        s = np.arange(PROFILE_CHECK_SAMPLES) / PROFILE_CHECK_SAMPLES
        pts = self.points(s)
        ymin = self._refined_min_height(pts, s)
        if self.y_min is not None:
            ymin = min(ymin, float(self.y_min))
        if not ymin > 0:
            raise ProfileError(f"profile boundary reaches the axis {{y = 0}} (min height {ymin:.3g})")
        object.__setattr__(self, "y_min", ymin)
        resid = np.abs(self.implicit(pts))
        if resid.max() > 1e-8 * self.scale:
            raise ProfileError(f"boundary curve is off the implicit zero set by {resid.max():.2e}")
        coarse = self.points(np.arange(SIMPLE_CHECK_SAMPLES) / SIMPLE_CHECK_SAMPLES)
        if _segments_cross(coarse):
            raise ProfileError("boundary curve self-intersects")

    def points(self, s) -> np.ndarray:
        if self.curve is None:
            raise ProfileError(f"{self.name} has no boundary curve")
        return np.asarray(self.curve(np.mod(np.asarray(s, float), 1.0)), float)

    def _refined_min_height(self, pts: np.ndarray, s: np.ndarray) -> float:
        i = int(np.argmin(pts[:, 1]))
        ds = 1.0 / len(s)
        res = minimize_scalar(
            lambda v: float(self.points(np.array([v]))[0, 1]),
            bounds=(s[i] - ds, s[i] + ds), method="bounded", options={"xatol": 1e-12},
        )
        return float(min(res.fun, pts[i, 1]))

    @property
    def scale(self) -> float:
        pts = self.points(np.arange(256) / 256)
        g = np.linalg.norm(self.implicit.gradient(pts), axis=1).max()
        return float(g * np.linalg.norm(np.ptp(pts, axis=0)))

    def tangent(self, W) -> np.ndarray:
        """Unit tangent of the boundary at planar points W (rotated implicit gradient)."""
        g = self.implicit.gradient(np.asarray(W, float))
        nrm = np.linalg.norm(g, axis=-1, keepdims=True)
        if np.any(nrm == 0):
            raise ProfileError("implicit gradient vanishes: no tangent line")
        g = g / nrm
        return np.stack([-g[..., 1], g[..., 0]], axis=-1)

    def descriptor(self) -> dict:
        return {"kind": "profile", "name": self.name, **self.params}


def _radial_trace(u: ScalarField, A) -> CurveFn:
    A = np.asarray(A, float)

    def curve(s):
        s = np.asarray(s, float)
        ang = 2 * np.pi * s.reshape(-1)
        D = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        tau = ray_exit(u, A, D)
        return (A + tau[:, None] * D).reshape(s.shape + (2,))

    return curve


def _box_around(pts_lo, pts_hi, margin=0.25):
    lo, hi = np.asarray(pts_lo, float), np.asarray(pts_hi, float)
    pad = margin * (hi - lo)
    return lo - pad, hi + pad


def disc(a1: float, a2: float, r: float) -> Profile:
    if not r > 0:
        raise ProfileError("disc radius must be positive")
    if not a2 - r > 0:
        raise ProfileError(f"disc of centre ({a1}, {a2}) and radius {r} touches the axis y = 0")
    c = np.array([a1, a2], float)

    def func(W):
        d = np.asarray(W, float) - c
        return np.sum(d * d, axis=-1) - r * r

    def grad(W):
        return 2.0 * (np.asarray(W, float) - c)

    def hess(W):
        return np.broadcast_to(2.0 * np.eye(2), np.shape(W) + (2,)).copy()

    def curve(s):
        ang = 2 * np.pi * np.asarray(s, float)
        return np.stack([a1 + r * np.cos(ang), a2 + r * np.sin(ang)], axis=-1)

    lo, hi = _box_around(c - r, c + r)
    u = ScalarField(func, 2, lo, hi, grad=grad, hess=hess, name="disc")
    return Profile(u, curve, (a1, a2), "disc", {"center": [a1, a2], "radius": r}, y_min=a2 - r)


def ellipse(a1: float, a2: float, r1: float, r2: float) -> Profile:
    if not (r1 > 0 and r2 > 0):
        raise ProfileError("ellipse semi-axes must be positive")
    if not a2 - r2 > 0:
        raise ProfileError("ellipse touches the axis y = 0")
    c = np.array([a1, a2], float)
    w = np.array([1 / r1**2, 1 / r2**2])

    def func(W):
        d = np.asarray(W, float) - c
        return np.sum(w * d * d, axis=-1) - 1.0

    def grad(W):
        return 2.0 * w * (np.asarray(W, float) - c)

    def hess(W):
        return np.broadcast_to(np.diag(2.0 * w), np.shape(W) + (2,)).copy()

    def curve(s):
        ang = 2 * np.pi * np.asarray(s, float)
        return np.stack([a1 + r1 * np.cos(ang), a2 + r2 * np.sin(ang)], axis=-1)

    lo, hi = _box_around(c - [r1, r2], c + [r1, r2])
    u = ScalarField(func, 2, lo, hi, grad=grad, hess=hess, name="ellipse")
    return Profile(u, curve, (a1, a2), "ellipse", {"center": [a1, a2], "radii": [r1, r2]}, y_min=a2 - r2)


def rounded_polygon(vertices: Sequence[Sequence[float]], rounding: float) -> Profile:
    """Convex polygon grown by ``rounding``: ``{p : dist(p, polygon) < rounding}``.

    The implicit field is the signed distance to the polygon minus ``rounding``;
    the boundary curve alternates offset edges and circular arcs and is
    parametrised proportionally to arc length.
    """
    V = np.asarray(vertices, float)
    if V.ndim != 2 or V.shape[1] != 2 or len(V) < 3:
        raise ProfileError("need at least three planar vertices")
    if not rounding > 0:
        raise ProfileError("rounding radius must be positive")
    E = np.roll(V, -1, axis=0) - V
    area2 = np.sum(V[:, 0] * np.roll(V[:, 1], -1) - np.roll(V[:, 0], -1) * V[:, 1])
    if area2 < 0:
        V = V[::-1].copy()
        E = np.roll(V, -1, axis=0) - V
    turns = E[:, 0] * np.roll(E, -1, axis=0)[:, 1] - E[:, 1] * np.roll(E, -1, axis=0)[:, 0]
    if np.any(turns <= 0):
        raise NonConvexError("rounded polygons need a strictly convex vertex list")
    L = np.linalg.norm(E, axis=1)
    N = np.stack([E[:, 1], -E[:, 0]], axis=1) / L[:, None]
    ang_n = np.arctan2(N[:, 1], N[:, 0])
    sweep = np.mod(np.roll(ang_n, -1) - ang_n, 2 * np.pi)
    arc_len = rounding * sweep
    lengths = np.ravel(np.column_stack([L, arc_len]))
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    total = cum[-1]
    k = len(V)

    def _closest(W):
        W = np.asarray(W, float)
        rel = W[..., None, :] - V
        tt = np.clip(np.sum(rel * E, axis=-1) / (L * L), 0.0, 1.0)
        C = V + tt[..., None] * E
        d = np.linalg.norm(W[..., None, :] - C, axis=-1)
        i = np.argmin(d, axis=-1)
        cross = E[:, 0] * rel[..., 1] - E[:, 1] * rel[..., 0]
        inside = np.all(cross >= 0, axis=-1)
        dmin = np.take_along_axis(d, i[..., None], axis=-1)[..., 0]
        cmin = np.take_along_axis(C, i[..., None, None].repeat(2, axis=-1), axis=-2)[..., 0, :]
        return dmin, cmin, inside

    def func(W):
        d, _, inside = _closest(W)
        return np.where(inside, -d, d) - rounding

    def grad(W):
        W = np.asarray(W, float)
        d, c, inside = _closest(W)
        sgn = np.where(inside, -1.0, 1.0)
        return sgn[..., None] * (W - c) / np.maximum(d, 1e-300)[..., None]

    def curve(s):
        ell = np.asarray(s, float) * total
        piece = np.clip(np.searchsorted(cum, ell, side="right") - 1, 0, 2 * k - 1)
        local = ell - cum[piece]
        out = np.empty(np.shape(ell) + (2,))
        for p in range(2 * k):
            m = piece == p
            if not np.any(m):
                continue
            i = p // 2
            if p % 2 == 0:
                start = V[i] + rounding * N[i]
                out[m] = start + (local[m] / L[i])[:, None] * E[i]
            else:
                j = (i + 1) % k
                phi = ang_n[i] + local[m] / rounding
                out[m] = V[j] + rounding * np.stack([np.cos(phi), np.sin(phi)], axis=-1)
        return out

    lo, hi = _box_around(V.min(axis=0) - rounding, V.max(axis=0) + rounding)
    u = ScalarField(func, 2, lo, hi, grad=grad, name="rounded-polygon")
    centroid = V.mean(axis=0)
    return Profile(
        u, curve, (float(centroid[0]), float(centroid[1])), "rounded-polygon",
        {"vertices": V.tolist(), "rounding": rounding},
    )


def crescent(a1: float, a2: float, radius: float, depth: float = 0.9) -> Profile:
    """Kidney-shaped non-convex profile, polar radius ``R (1 + depth cos phi)`` about (a1, a2).

    The dent faces the -a direction; for depth near 1 it is crescent-like.
    """
    if not (0 < depth < 1 and radius > 0):
        raise ProfileError("crescent needs radius > 0 and 0 < depth < 1")
    c = np.array([a1, a2], float)

    def _polar(W):
        d = np.asarray(W, float) - c
        rho = np.hypot(d[..., 0], d[..., 1])
        phi = np.arctan2(d[..., 1], d[..., 0])
        return d, rho, phi

    def func(W):
        _, rho, phi = _polar(W)
        return rho - radius * (1 + depth * np.cos(phi))

    def grad(W):
        d, rho, phi = _polar(W)
        rho = np.maximum(rho, 1e-300)
        er = d / rho[..., None]
        ephi = np.stack([-d[..., 1], d[..., 0]], axis=-1) / (rho * rho)[..., None]
        return er + (radius * depth * np.sin(phi))[..., None] * ephi

    def curve(s):
        ang = 2 * np.pi * np.asarray(s, float)
        rr = radius * (1 + depth * np.cos(ang))
        return np.stack([a1 + rr * np.cos(ang), a2 + rr * np.sin(ang)], axis=-1)

    ext = radius * (1 + depth)
    lo, hi = _box_around(c - ext, c + ext)
    u = ScalarField(func, 2, lo, hi, grad=grad, name="crescent")
    inner = (a1 + 0.5 * radius, a2)
    return Profile(u, curve, inner, "crescent", {"center": [a1, a2], "radius": radius, "depth": depth})


def expression_profile(text: str, constants: dict | None, interior, box) -> Profile:
    """Profile from an expression in ``x`` (t-coordinate) and ``y`` (|z|^2-coordinate).

    The boundary curve is traced radially from ``interior``, so the region must
    be star-shaped about that point.  ``box`` is ``((x_lo, x_hi), (y_lo, y_hi))``.
    """
    tree = _expr.parse(text, constants or {})

    def func(W):
        W = np.asarray(W, float)
        return _expr.evaluate(tree, W[..., 0], W[..., 1])

    (xl, xh), (yl, yh) = box
    u = ScalarField(func, 2, (xl, yl), (xh, yh), name="expression")
    return Profile(u, None, tuple(interior), "expression",
                   {"expression": _expr.to_source(tree), "interior": list(interior), "box": [list(box[0]), list(box[1])]})


# -- H^1 domains -------------------------------------------------------------------


@dataclass(frozen=True)
class TorusDomain:
    profile: Profile
    psi: ScalarField

    @property
    def name(self) -> str:
        return f"torus[{self.profile.name}]"

    def boundary_points(self, s, theta) -> np.ndarray:
        W = self.profile.points(s)
        r = np.sqrt(W[..., 1])
        theta = np.asarray(theta, float)
        return np.stack([r * np.cos(theta), r * np.sin(theta), W[..., 0]], axis=-1)

    @property
    def diameter(self) -> float:
        W = self.profile.points(np.arange(512) / 512)
        r = np.sqrt(W[:, 1].max())
        return float(np.sqrt(8 * r * r + np.ptp(W[:, 0]) ** 2))

    def sample_boundary(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.boundary_points(rng.random(n), 2 * np.pi * rng.random(n))

    def descriptor(self) -> dict:
        return {"kind": "torus", "profile": self.profile.descriptor()}


def make_torus(profile: Profile) -> TorusDomain:
    if profile.curve is None:
        raise ProfileError("torus domains need a boundary curve to mesh")
    if not (profile.y_min is not None and profile.y_min > 0):
        raise ProfileError("profile touches the axis y = 0")
    return TorusDomain(profile, compose_profile(profile.implicit))


@dataclass(frozen=True)
class ImplicitDomain:
    """Domain ``{psi < 0}`` inside the bounding box of ``psi``."""

    psi: ScalarField
    name: str = "implicit"
    params: dict = field(default_factory=dict, compare=False)
    parametrization: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.psi.dim != 3:
            raise HeisError("implicit domains live in H^1 (three coordinates)")
        axes = [np.linspace(lo, hi, 17) for lo, hi in zip(self.psi.lower, self.psi.upper)]
        v = self.psi(np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1))
        if not (v.min() < 0 < v.max()):
            raise MeshError(f"{self.name}: defining field does not change sign in its box")

    def sample_boundary(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.parametrization is None:
            raise HeisError(f"{self.name} has no exact boundary parametrisation")
        return self.parametrization(rng.random(n), rng.random(n))

    def descriptor(self) -> dict:
        return {"kind": "implicit", "name": self.name, **self.params}


def koranyi_ball(center: HPoint | None = None, r: float = 1.0) -> ImplicitDomain:
    """Gauge ball ``{xi : d(xi, center) < r}``, the left translate of B(0, r) by ``center``.

    The field is ``rho(center^-1 . xi)^4 - r^4``, smooth everywhere unlike the gauge itself.
    """
    if not r > 0:
        raise HeisError("Koranyi radius must be positive")
    c = (center or HPoint.identity()).as_array()
    if c.size != 3:
        raise HeisError("Koranyi balls are built in H^1 only")
    x0, y0, t0 = c

    def parts(P):
        P = np.asarray(P, float)
        a, b = P[..., 0] - x0, P[..., 1] - y0
        w = P[..., 2] - t0 + 2.0 * (x0 * P[..., 1] - P[..., 0] * y0)
        return a, b, w

    def func(P):
        a, b, w = parts(P)
        s = a * a + b * b
        return s * s + w * w - r**4

    def grad(P):
        a, b, w = parts(P)
        s = a * a + b * b
        return np.stack([4 * s * a - 4 * w * y0, 4 * s * b + 4 * w * x0, 2 * w], axis=-1)

    def hess(P):
        a, b, _ = parts(P)
        s = a * a + b * b
        H = np.empty(np.shape(P)[:-1] + (3, 3))
        H[..., 0, 0] = 4 * s + 8 * a * a + 8 * y0 * y0
        H[..., 1, 1] = 4 * s + 8 * b * b + 8 * x0 * x0
        H[..., 0, 1] = H[..., 1, 0] = 8 * a * b - 8 * x0 * y0
        H[..., 0, 2] = H[..., 2, 0] = -4 * y0
        H[..., 1, 2] = H[..., 2, 1] = 4 * x0
        H[..., 2, 2] = 2.0
        return H

    def param(u, v):
        t = r * r * (2 * np.asarray(u, float) - 1)
        rad = np.maximum(r**4 - t * t, 0.0) ** 0.25
        th = 2 * np.pi * np.asarray(v, float)
        eta = np.stack([rad * np.cos(th), rad * np.sin(th), t], axis=-1)
        return group_mul_array(np.broadcast_to(c, eta.shape), eta)

    tspan = r * r + 2 * r * (abs(x0) + abs(y0))
    lo = np.array([x0 - r, y0 - r, t0 - tspan])
    hi = np.array([x0 + r, y0 + r, t0 + tspan])
    pad = 0.1 * (hi - lo)
    psi = ScalarField(func, 3, lo - pad, hi + pad, grad=grad, hess=hess, name="koranyi")
    return ImplicitDomain(psi, "koranyi-ball", {"center": c.tolist(), "radius": r}, param)


def euclidean_ball(center=(0.0, 0.0, 0.0), radius: float = 1.0) -> ImplicitDomain:
    if not radius > 0:
        raise HeisError("radius must be positive")
    c = np.asarray(center, float)

    def func(P):
        d = np.asarray(P, float) - c
        return np.sum(d * d, axis=-1) - radius**2

    def grad(P):
        return 2.0 * (np.asarray(P, float) - c)

    def hess(P):
        return np.broadcast_to(2.0 * np.eye(3), np.shape(P) + (3,)).copy()

    def param(u, v):
        ct = 2 * np.asarray(u, float) - 1
        st = np.sqrt(np.maximum(1 - ct * ct, 0.0))
        ph = 2 * np.pi * np.asarray(v, float)
        return c + radius * np.stack([st * np.cos(ph), st * np.sin(ph), ct], axis=-1)

    pad = 0.1 * radius
    psi = ScalarField(func, 3, c - radius - pad, c + radius + pad, grad=grad, hess=hess, name="euclidean")
    return ImplicitDomain(psi, "euclidean-ball", {"center": c.tolist(), "radius": radius}, param)


def half_space(half_width: float = 1.0) -> ImplicitDomain:
    """``{t < 0}`` clipped to the box ``[-w, w]^3``."""

    def grad(P):
        g = np.zeros(np.shape(P))
        g[..., 2] = 1.0
        return g

    def param(u, v):
        w = half_width
        return np.stack([w * (2 * np.asarray(u) - 1), w * (2 * np.asarray(v) - 1), np.zeros(np.shape(u))], axis=-1)

    psi = ScalarField(lambda P: np.asarray(P, float)[..., 2], 3, -half_width, half_width, grad=grad,
                      hess=lambda P: np.zeros(np.shape(P) + (3,)), name="half-space")
    return ImplicitDomain(psi, "half-space", {"half_width": half_width}, param)


# -- meshing -------------------------------------------------------------------------


@dataclass
class BoundaryMesh:
    kind: str  # "parametric" or "box"
    dims: tuple
    points: np.ndarray
    values: np.ndarray
    grads: np.ndarray
    hgrads: np.ndarray
    scale: float
    diameter: float
    st: Optional[np.ndarray] = None
    cells: Optional[np.ndarray] = None
    cell_size: Optional[np.ndarray] = None
    dropped: int = 0
    max_move_cells: float = 0.0

    def __len__(self) -> int:
        return len(self.points)

    def gradient_data(self, i: int) -> GradientData:
        return GradientData(float(self.values[i]), self.grads[i], self.hgrads[i])


def _bbox_diagonal(P: np.ndarray) -> float:
    return float(np.linalg.norm(np.ptp(P, axis=0)))


def boundary_mesh(domain, resolution, newton_tol: float = 1e-10, max_newton: int = 40) -> BoundaryMesh:
    """Boundary samples with gradient data.

    ``resolution`` is ``(n_s, n_theta)`` for torus domains and the number of grid
    nodes per axis for implicit domains.  Implicit samples start at the centres of
    sign-change cells and are Newton-projected along the gradient until
    ``|psi| <= newton_tol * scale``.
    """
    if isinstance(domain, TorusDomain):
        n_s, n_t = (int(v) for v in resolution)
        if n_s < 1 or n_t < 1:
            raise MeshError("mesh dimensions must be positive")
        s = np.arange(n_s) / n_s
        th = 2 * np.pi * np.arange(n_t) / n_t
        S, T = np.meshgrid(s, th, indexing="ij")
        P = domain.boundary_points(S.ravel(), T.ravel())
        vals = domain.psi(P)
        G = chunked_apply(domain.psi.gradient, P)
        diam = _bbox_diagonal(P)
        scale = float(np.linalg.norm(G, axis=1).max() * diam)
        return BoundaryMesh("parametric", (n_s, n_t), P, vals, G, horizontal_components(P, G),
                            scale, diam, st=np.column_stack([S.ravel(), T.ravel()]))
    if not isinstance(domain, ImplicitDomain):
        raise MeshError(f"cannot mesh {type(domain).__name__}")
    n = int(resolution)
    if n < 2:
        raise MeshError("box grid needs at least two nodes per axis")
    psi = domain.psi
    lo, hi = np.array(psi.lower), np.array(psi.upper)
    axes = [np.linspace(lo[k], hi[k], n) for k in range(3)]
    h = (hi - lo) / (n - 1)
    V = psi(np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1))
    corners = [V[i : n - 1 + i, j : n - 1 + j, k : n - 1 + k] for i in (0, 1) for j in (0, 1) for k in (0, 1)]
    vmin = np.minimum.reduce(corners)
    vmax = np.maximum.reduce(corners)
    cells = np.argwhere((vmin < 0) & (vmax >= 0))
    if len(cells) == 0:
        raise MeshError(f"{domain.name}: no boundary crossing inside the box")
    seeds = lo + (cells + 0.5) * h
    step_cap = np.linalg.norm(h)

    def newton(P):
        for _ in range(max_newton):
            v = psi(P)
            g = psi.gradient(P)
            done = np.abs(v) <= newton_tol * mesh_scale(P, g)
            if done.all():
                break
            gg = np.sum(g * g, axis=1)
            step = np.where(gg[:, None] > 0, -(v / np.where(gg > 0, gg, 1.0))[:, None] * g, 0.0)
            ln = np.linalg.norm(step, axis=1, keepdims=True)
            step = np.where(ln > step_cap, step * step_cap / np.maximum(ln, 1e-300), step)
            P = np.where(done[:, None], P, P + step)
        return P

    def mesh_scale(P, g):
        return float(np.linalg.norm(g, axis=1).max() * max(_bbox_diagonal(P), h.max()))

    P = newton(seeds.copy())
    move = np.max(np.abs(P - seeds) / h, axis=1)
    keep = (np.abs(psi(P)) <= newton_tol * mesh_scale(P, psi.gradient(P))) & (move <= 2.0)
    if not keep.any():
        raise MeshError(f"{domain.name}: Newton projection failed for every seed")
    P, cells, seeds = P[keep], cells[keep], seeds[keep]
    # dropping seeds can shrink the scale; re-polish against the final one
    P = newton(P)
    G = chunked_apply(psi.gradient, P)
    scale = mesh_scale(P, G)
    v = psi(P)
    move = np.max(np.abs(P - seeds) / h, axis=1)
    ok = (np.abs(v) <= newton_tol * scale) & (move <= 2.0)
    if not ok.all():
        raise MeshError(f"{domain.name}: {int((~ok).sum())} samples failed the final projection")
    return BoundaryMesh(
        "box", (n, n, n), P, v, G, horizontal_components(P, G), scale, _bbox_diagonal(P),
        cells=cells, cell_size=h, dropped=int((~keep).sum()), max_move_cells=float(move.max()),
    )
