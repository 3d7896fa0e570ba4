"""Radial homeomorphism between a compact convex profile K and a disc D(A, r).

For a direction point ``omega`` on the circle S(A, r) the ray from A through
omega meets the boundary of K exactly once, at ``A + a(omega)(omega - A)``.
That radial extent ``a`` drives every map here:

* ``boundary_to_circle``   dK -> S(A, r),   X -> A + r (X - A)/|X - A|
* ``circle_to_boundary``   its inverse,     omega -> A + a(omega)(omega - A)
* ``disc_to_profile``      D(A, r) -> K, radial rescaling by a
* ``profile_to_disc``      K -> D(A, r), the inverse rescaling

Boundary projections are radial from A (not closest-point), which is what makes
the last two maps mutually inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .domains import Profile, ray_exit
from .errors import NonConvexError, ProfileError

CONVEXITY_SAMPLES = 2048


def convexity_defect(profile: Profile, n: int = CONVEXITY_SAMPLES) -> tuple[float, np.ndarray]:
    """Signed cross products of consecutive boundary edges, normalised by edge lengths.

    Returns ``(worst, crosses)`` where ``worst`` is the most negative value after
    orienting the curve counter-clockwise; a convex curve has ``worst >= -tol``.
    """
    P = profile.points(np.arange(n) / n)
    E = np.roll(P, -1, axis=0) - P
    E2 = np.roll(E, -1, axis=0)
    cross = E[:, 0] * E2[:, 1] - E[:, 1] * E2[:, 0]
    cross /= np.linalg.norm(E, axis=1) * np.linalg.norm(E2, axis=1)
    area2 = np.sum(P[:, 0] * np.roll(P[:, 1], -1) - np.roll(P[:, 0], -1) * P[:, 1])
    if area2 < 0:
        cross = -cross
    return float(cross.min()), cross


def distance_to_boundary(profile: Profile, A, n: int = 4096) -> float:
    A = np.asarray(A, float)
    s = np.arange(n) / n
    d = np.linalg.norm(profile.points(s) - A, axis=1)
    i = int(np.argmin(d))
    res = minimize_scalar(
        lambda v: float(np.linalg.norm(profile.points(np.array([v]))[0] - A)),
        bounds=(s[i] - 1.0 / n, s[i] + 1.0 / n), method="bounded", options={"xatol": 1e-12},
    )
    return float(min(res.fun, d[i]))


@dataclass(frozen=True)
class ConvexProfile:
    base: Profile
    A: tuple[float, float]
    r: float
    convexity: float = field(default=0.0, compare=False)

    @property
    def center(self) -> np.ndarray:
        return np.asarray(self.A, float)

    def descriptor(self) -> dict:
        return {"profile": self.base.descriptor(), "anchor": list(self.A), "r": self.r,
                "convexity_min_cross": self.convexity}


def make_convex(profile: Profile, A=None, r: float | None = None, tol: float = 1e-9) -> ConvexProfile:
    """Validate convexity and pick the inner disc.

    ``A`` defaults to the profile's interior point and ``r`` to half the distance
    from A to the boundary.
    """
    if profile.curve is None:
        raise ProfileError("convexity check needs a boundary curve")
    worst, _ = convexity_defect(profile)
    if worst < -tol:
        raise NonConvexError(f"{profile.name} is not convex (edge cross product {worst:.3g})")
    if A is None:
        if profile.interior is None:
            raise ProfileError("no interior point given")
        A = profile.interior
    A = np.asarray(A, float)
    if not profile.implicit(A) < 0:
        raise ProfileError(f"anchor {A.tolist()} is not interior")
    dist = distance_to_boundary(profile, A)
    if r is None:
        r = 0.5 * dist
    # the circle may touch the boundary (r = dist); allow round-off in dist
    if not 0 < r <= dist * (1 + 1e-9):
        raise ProfileError(f"disc of radius {r} around {A.tolist()} does not fit in the profile (distance {dist:.6g})")
    return ConvexProfile(profile, (float(A[0]), float(A[1])), float(r), worst)


def _on_circle(cp: ConvexProfile, omega: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    d = np.linalg.norm(omega - cp.center, axis=-1)
    if np.any(np.abs(d - cp.r) > tol * max(1.0, cp.r)):
        raise ProfileError("point is not on the circle S(A, r)")
    return d


def radial_extent(cp: ConvexProfile, omega) -> np.ndarray | float:
    """``a(omega)`` with ``A + a (omega - A)`` on the boundary of K."""
    omega = np.asarray(omega, float)
    single = omega.ndim == 1
    W = np.atleast_2d(omega)
    _on_circle(cp, W)
    tau = ray_exit(cp.base.implicit, cp.center, W - cp.center)
    return float(tau[0]) if single else tau


def circle_to_boundary(cp: ConvexProfile, omega) -> np.ndarray:
    omega = np.asarray(omega, float)
    a = np.asarray(radial_extent(cp, omega))
    return cp.center + a[..., None] * (omega - cp.center) if omega.ndim > 1 else cp.center + a * (omega - cp.center)


def boundary_to_circle(cp: ConvexProfile, X, tol: float = 1e-8) -> np.ndarray:
    X = np.asarray(X, float)
    resid = np.abs(cp.base.implicit(X))
    if np.any(resid > tol * cp.base.scale):
        raise ProfileError("point is not on the profile boundary")
    d = X - cp.center
    nd = np.linalg.norm(d, axis=-1, keepdims=True)
    if np.any(nd == 0):
        raise ProfileError("the anchor A has no image on the circle")
    return cp.center + cp.r * d / nd


def disc_to_profile(cp: ConvexProfile, Y) -> np.ndarray:
    Y = np.asarray(Y, float)
    W = np.atleast_2d(Y)
    d = W - cp.center
    nd = np.linalg.norm(d, axis=1)
    if np.any(nd > cp.r * (1 + 1e-12)):
        raise ProfileError("point lies outside the disc D(A, r)")
    out = np.tile(cp.center, (len(W), 1))
    m = nd > 0
    if m.any():
        omega = cp.center + cp.r * d[m] / nd[m, None]
        a = ray_exit(cp.base.implicit, cp.center, omega - cp.center)
        # |A - Y| / |A - omega| * (g^-1(omega) - A), with |A - omega| = r
        out[m] = cp.center + (nd[m] / cp.r * a)[:, None] * (omega - cp.center)
    return out[0] if Y.ndim == 1 else out


def profile_to_disc(cp: ConvexProfile, X, tol: float = 1e-8) -> np.ndarray:
    X = np.asarray(X, float)
    W = np.atleast_2d(X)
    if np.any(cp.base.implicit(W) > tol * cp.base.scale):
        raise ProfileError("point lies outside the profile")
    d = W - cp.center
    nd = np.linalg.norm(d, axis=1)
    out = np.tile(cp.center, (len(W), 1))
    m = nd > 0
    if m.any():
        omega = cp.center + cp.r * d[m] / nd[m, None]
        a = ray_exit(cp.base.implicit, cp.center, omega - cp.center)
        # radial boundary point is A + a (omega - A), at distance a r from A
        out[m] = cp.center + (nd[m] / (a * cp.r))[:, None] * (omega - cp.center)
    return out[0] if X.ndim == 1 else out


def injectivity_check(cp: ConvexProfile, n: int = 4096) -> dict:
    """Map boundary samples to the circle and check their angles are strictly monotone.

    ``min_ratio`` is the smallest angular gap divided by the mean gap; it must be
    positive for an injective map at this resolution.
    """
    X = cp.base.points(np.arange(n) / n)
    Y = boundary_to_circle(cp, X)
    ang = np.arctan2(Y[:, 1] - cp.A[1], Y[:, 0] - cp.A[0])
    gaps = np.angle(np.exp(1j * (np.roll(ang, -1) - ang)))
    gaps = gaps * np.sign(gaps.sum())
    ok = bool(np.all(gaps > 0) and abs(gaps.sum() - 2 * np.pi) < 1e-9)
    return {"injective": ok, "min_gap": float(gaps.min()), "mean_gap": float(gaps.mean()),
            "min_ratio": float(gaps.min() / gaps.mean()), "samples": n}


def radial_lipschitz(cp: ConvexProfile, n: int = 4096) -> float:
    """Empirical Lipschitz constant of ``a`` along the circle (chord metric)."""
    ang = 2 * np.pi * np.arange(n) / n
    omega = cp.center + cp.r * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    a = radial_extent(cp, omega)
    chord = np.linalg.norm(np.roll(omega, -1, axis=0) - omega, axis=1)
    return float(np.max(np.abs(np.roll(a, -1) - a) / chord))
