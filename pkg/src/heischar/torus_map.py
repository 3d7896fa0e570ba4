"""The chart ``(z, t) -> (w(z, t), z/|z|)`` from H^1 minus the center onto R^2_+ x S^1.

``w`` is written as the planar pair ``(t, |z|^2)``.  Everything here refuses to
work within ``CENTER_TOL`` of the center rather than lose precision silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import HPoint, TangentVector
from .errors import CenterError, DimensionMismatch, HeisError

CENTER_TOL = 1e-12


@dataclass(frozen=True)
class ProductPoint:
    w: tuple[float, float]
    u: tuple[float, float]

    def __post_init__(self):
        w = tuple(float(c) for c in self.w)
        u = tuple(float(c) for c in self.u)
        if len(w) != 2 or len(u) != 2:
            raise DimensionMismatch("product points have planar w and u")
        if not w[1] > 0:
            raise CenterError(f"second coordinate of w must be positive, got {w[1]}")
        if abs(np.hypot(*u) - 1.0) > 1e-12:
            raise HeisError(f"u = {u} is not a unit vector")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "u", u)


def _require_h1(p: HPoint) -> None:
    if p.n != 1:
        raise DimensionMismatch("the torus chart is defined on H^1 only")


def to_product_array(P: np.ndarray, tol: float = CENTER_TOL) -> tuple[np.ndarray, np.ndarray]:
    P = np.asarray(P, float)
    r = np.hypot(P[..., 0], P[..., 1])
    if np.any(r <= tol):
        raise CenterError("point on or near the center {z = 0}")
    W = np.stack([P[..., 2], r * r], axis=-1)
    U = P[..., :2] / r[..., None]
    return W, U


def from_product_array(W: np.ndarray, U: np.ndarray) -> np.ndarray:
    W, U = np.asarray(W, float), np.asarray(U, float)
    if np.any(W[..., 1] <= 0):
        raise CenterError("second coordinate of w must be positive")
    r = np.sqrt(W[..., 1])
    return np.stack([r * U[..., 0], r * U[..., 1], W[..., 0]], axis=-1)


def to_product(p: HPoint, tol: float = CENTER_TOL) -> ProductPoint:
    _require_h1(p)
    W, U = to_product_array(p.as_array(), tol)
    return ProductPoint(tuple(W), tuple(U))


def from_product(q: ProductPoint) -> HPoint:
    return HPoint.from_array(from_product_array(np.array(q.w), np.array(q.u)))


def tangent_matrix(P: np.ndarray, tol: float = CENTER_TOL) -> np.ndarray:
    """Jacobian of the chart as a (..., 4, 3) array: rows (dw_1, dw_2, du_1, du_2)."""
    P = np.asarray(P, float)
    x, y = P[..., 0], P[..., 1]
    r = np.hypot(x, y)
    if np.any(r <= tol):
        raise CenterError("tangent map requested on or near the center")
    J = np.zeros(P.shape[:-1] + (4, 3))
    J[..., 0, 2] = 1.0
    J[..., 1, 0] = 2 * x
    J[..., 1, 1] = 2 * y
    r3 = r**3
    J[..., 2, 0] = 1 / r - x * x / r3
    J[..., 2, 1] = -x * y / r3
    J[..., 3, 0] = -x * y / r3
    J[..., 3, 1] = 1 / r - y * y / r3
    return J


def tangent_map(p: HPoint, v: TangentVector, tol: float = CENTER_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Push ``v`` through the chart: ``dw = (v3, 2(x v1 + y v2))`` and
    ``du = (v1, v2)/|z| - (x v1 + y v2) z/|z|^3``."""
    _require_h1(p)
    if v.base != p:
        raise HeisError("tangent vector is not based at p")
    out = tangent_matrix(p.as_array(), tol) @ v.as_array()
    return out[:2], out[2:]


def chart_fd_jacobian(P: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of the chart, same layout as :func:`tangent_matrix`."""
    P = np.asarray(P, float)
    J = np.empty(P.shape[:-1] + (4, 3))
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        Wp, Up = to_product_array(P + e)
        Wm, Um = to_product_array(P - e)
        J[..., :, k] = np.concatenate([Wp - Wm, Up - Um], axis=-1) / (2 * h)
    return J
