"""Algebraic and differential structure of the Heisenberg group H^n.

Coordinates are ordered ``(x_1..x_n, y_1..y_n, t)`` with ``z_j = x_j + i y_j``.
The group law is

    (z', t') . (z, t) = (x + x', y + y', t + t' + 2(<x, y'> - <x', y>))

so ``group_mul(p, q)`` puts ``p`` in the primed slot.  With this convention the
fields ``X_j = d/dx_j + 2 y_j d/dt`` and ``Y_j = d/dy_j - 2 x_j d/dt`` are left
invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, HeisError, NonFiniteError

EPS = np.finfo(float).eps


def _as_tuple(v) -> tuple[float, ...]:
    if np.ndim(v) == 0:
        return (float(v),)
    return tuple(float(c) for c in v)


def homogeneous_dimension(n: int = 1) -> int:
    return 2 * n + 2


@dataclass(frozen=True)
class HPoint:
    """A point (z, t) of H^n.  Scalars are accepted for n = 1: ``HPoint(1, 2, 5)``."""

    x: tuple[float, ...]
    y: tuple[float, ...]
    t: float

    def __post_init__(self):
        x, y = _as_tuple(self.x), _as_tuple(self.y)
        if len(x) != len(y) or len(x) < 1:
            raise DimensionMismatch(f"x has {len(x)} entries, y has {len(y)}")
        t = float(self.t)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y)) and np.isfinite(t)):
            raise NonFiniteError("HPoint coordinates must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "t", t)

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def identity(cls, n: int = 1) -> "HPoint":
        return cls((0.0,) * n, (0.0,) * n, 0.0)

    @classmethod
    def from_array(cls, arr: Sequence[float]) -> "HPoint":
        arr = np.asarray(arr, dtype=float)
        if arr.ndim != 1 or arr.size % 2 != 1 or arr.size < 3:
            raise DimensionMismatch(f"expected 2n+1 coordinates, got shape {arr.shape}")
        n = (arr.size - 1) // 2
        return cls(arr[:n], arr[n : 2 * n], arr[-1])

    def as_array(self) -> np.ndarray:
        return np.array(self.x + self.y + (self.t,))

    @property
    def z(self) -> np.ndarray:
        return np.array(self.x) + 1j * np.array(self.y)


@dataclass(frozen=True)
class TangentVector:
    """Coordinate components (vx, vy, vt) of a vector based at ``base``."""

    base: HPoint
    vx: tuple[float, ...]
    vy: tuple[float, ...]
    vt: float

    def __post_init__(self):
        vx, vy = _as_tuple(self.vx), _as_tuple(self.vy)
        if len(vx) != self.base.n or len(vy) != self.base.n:
            raise DimensionMismatch("vector components do not match the base point dimension")
        vt = float(self.vt)
        if not (np.all(np.isfinite(vx)) and np.all(np.isfinite(vy)) and np.isfinite(vt)):
            raise NonFiniteError("tangent vector components must be finite")
        object.__setattr__(self, "vx", vx)
        object.__setattr__(self, "vy", vy)
        object.__setattr__(self, "vt", vt)

    @classmethod
    def from_array(cls, base: HPoint, arr: Sequence[float]) -> "TangentVector":
        arr = np.asarray(arr, dtype=float)
        n = base.n
        if arr.shape != (2 * n + 1,):
            raise DimensionMismatch(f"expected {2 * n + 1} components, got {arr.shape}")
        return cls(base, arr[:n], arr[n : 2 * n], arr[-1])

    def as_array(self) -> np.ndarray:
        return np.array(self.vx + self.vy + (self.vt,))


@dataclass(frozen=True)
class HorizontalVector:
    """Coefficients of ``sum alpha_j X_j + beta_j Y_j`` at ``base``."""

    base: HPoint
    alpha: tuple[float, ...]
    beta: tuple[float, ...]

    def __post_init__(self):
        a, b = _as_tuple(self.alpha), _as_tuple(self.beta)
        if len(a) != self.base.n or len(b) != self.base.n:
            raise DimensionMismatch("coefficient count does not match the base point dimension")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise NonFiniteError("horizontal coefficients must be finite")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    def as_array(self) -> np.ndarray:
        return np.array(self.alpha + self.beta)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def to_tangent(self) -> TangentVector:
        a, b = np.array(self.alpha), np.array(self.beta)
        x, y = np.array(self.base.x), np.array(self.base.y)
        return TangentVector(self.base, a, b, float(2.0 * (a @ y - b @ x)))


def _check_same_n(p: HPoint, q: HPoint) -> None:
    if p.n != q.n:
        raise DimensionMismatch(f"cannot combine points of H^{p.n} and H^{q.n}")


# -- group structure ---------------------------------------------------------


def group_mul(p: HPoint, q: HPoint) -> HPoint:
    """Return ``p . q``."""
    _check_same_n(p, q)
    px, py, qx, qy = map(np.array, (p.x, p.y, q.x, q.y))
    t = q.t + p.t + 2.0 * (qx @ py - px @ qy)
    return HPoint(px + qx, py + qy, t)


def group_inv(p: HPoint) -> HPoint:
    return HPoint(tuple(-c for c in p.x), tuple(-c for c in p.y), -p.t)


def group_mul_array(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Batched ``group_mul`` for H^1 arrays of shape (..., 3)."""
    P, Q = np.asarray(P, float), np.asarray(Q, float)
    out = P + Q
    out[..., 2] += 2.0 * (Q[..., 0] * P[..., 1] - P[..., 0] * Q[..., 1])
    return out


def dilate(lam: float, p: HPoint) -> HPoint:
    if not lam > 0:
        raise HeisError(f"dilation factor must be positive, got {lam}")
    return HPoint(tuple(lam * c for c in p.x), tuple(lam * c for c in p.y), lam * lam * p.t)


def dilation_jacobian(lam: float, n: int = 1) -> np.ndarray:
    if not lam > 0:
        raise HeisError(f"dilation factor must be positive, got {lam}")
    return np.diag([lam] * (2 * n) + [lam * lam])


def gauge(p: HPoint) -> float:
    """Koranyi gauge ``(sum |z_j|^4 + t^2)^(1/4)``."""
    z2 = np.square(p.x) + np.square(p.y)
    return float((np.sum(z2 * z2) + p.t * p.t) ** 0.25)


def gauge_array(P: np.ndarray) -> np.ndarray:
    P = np.asarray(P, float)
    z2 = P[..., 0] ** 2 + P[..., 1] ** 2
    return (z2 * z2 + P[..., 2] ** 2) ** 0.25


def distance(p: HPoint, q: HPoint) -> float:
    """Left-invariant gauge distance ``rho(q^-1 . p)`` (``group_mul`` order)."""
    _check_same_n(p, q)
    return gauge(group_mul(group_inv(q), p))


def distance_array(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    return gauge_array(group_mul_array(-np.asarray(Q, float), P))


# -- frames and forms ----------------------------------------------------------


@dataclass(frozen=True)
class Frame:
    X: tuple[TangentVector, ...]
    Y: tuple[TangentVector, ...]
    T: TangentVector


def frame_at(p: HPoint) -> Frame:
    n = p.n
    Xs, Ys = [], []
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        Xs.append(TangentVector(p, e, np.zeros(n), 2.0 * p.y[j]))
        Ys.append(TangentVector(p, np.zeros(n), e, -2.0 * p.x[j]))
    T = TangentVector(p, np.zeros(n), np.zeros(n), 1.0)
    return Frame(tuple(Xs), tuple(Ys), T)


def left_translate_push(g: HPoint, v: TangentVector) -> TangentVector:
    """Differential of ``q -> g . q`` applied to ``v``; the result is based at ``g . v.base``."""
    _check_same_n(g, v.base)
    gx, gy = np.array(g.x), np.array(g.y)
    vx, vy = np.array(v.vx), np.array(v.vy)
    vt = v.vt + 2.0 * (vx @ gy - gx @ vy)
    return TangentVector(group_mul(g, v.base), vx, vy, vt)


def contact_form(p: HPoint, v: TangentVector) -> float:
    """theta_0(v) = dt + sum_j (2 x_j dy_j - 2 y_j dx_j)."""
    if v.base != p:
        raise HeisError("tangent vector is not based at p")
    x, y = np.array(p.x), np.array(p.y)
    return float(v.vt + 2.0 * (x @ np.array(v.vy) - y @ np.array(v.vx)))


def contact_covector(P: np.ndarray) -> np.ndarray:
    """theta_0 as a covector (-2y, 2x, 1) in H^1; batched over (..., 3)."""
    P = np.asarray(P, float)
    return np.stack([-2.0 * P[..., 1], 2.0 * P[..., 0], np.ones(P.shape[:-1])], axis=-1)


def j_map(h: HorizontalVector) -> HorizontalVector:
    """Complex structure on H: J X_j = Y_j, J Y_j = -X_j."""
    return HorizontalVector(h.base, tuple(-b for b in h.beta), h.alpha)


# -- differential operators on fields --------------------------------------------


def horizontal_components(P: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """(X_j f, Y_j f) from the Euclidean gradient; works on batches (..., 2n+1)."""
    P, grad = np.asarray(P, float), np.asarray(grad, float)
    n = (P.shape[-1] - 1) // 2
    x, y = P[..., :n], P[..., n : 2 * n]
    ft = grad[..., -1:]
    return np.concatenate([grad[..., :n] + 2.0 * y * ft, grad[..., n : 2 * n] - 2.0 * x * ft], axis=-1)


def horizontal_gradient(f, p: HPoint) -> HorizontalVector:
    """Subgradient (X_1 f..X_n f, Y_1 f..Y_n f) at ``p``.

    ``f`` is any field exposing ``gradient(P)`` on coordinate arrays, such as
    :class:`heischar.fields.ScalarField`.
    """
    P = p.as_array()
    g = np.asarray(f.gradient(P), float)
    if not np.all(np.isfinite(g)):
        raise NonFiniteError(f"gradient evaluation failed at {P}")
    h = horizontal_components(P, g)
    n = p.n
    return HorizontalVector(p, h[:n], h[n:])


def sublaplacian(f, p: HPoint) -> float:
    """Kohn-Spencer laplacian ``-sum_j (X_j^2 + Y_j^2) f`` at ``p``.

    Uses ``X_j^2 f = f_xx + 4 y f_xt + 4 y^2 f_tt`` and
    ``Y_j^2 f = f_yy - 4 x f_yt + 4 x^2 f_tt``.
    """
    P = p.as_array()
    H = np.asarray(f.hessian(P), float)
    if not np.all(np.isfinite(H)):
        raise NonFiniteError(f"hessian evaluation failed at {P}")
    n = p.n
    total = 0.0
    for j in range(n):
        x, y = p.x[j], p.y[j]
        ix, iy, it = j, n + j, 2 * n
        total += H[ix, ix] + 4 * y * H[ix, it] + 4 * y * y * H[it, it]
        total += H[iy, iy] - 4 * x * H[iy, it] + 4 * x * x * H[it, it]
    return -float(total)


def zbar_derivative(re_grad: np.ndarray, im_grad: np.ndarray, p: HPoint, j: int = 0) -> complex:
    """Apply ``Zbar_j = d/dzbar_j - i z_j d/dt`` to ``w = u + i v``.

    ``re_grad`` and ``im_grad`` are the Euclidean gradients of u and v at p;
    ``d/dzbar = (d/dx + i d/dy) / 2``.
    """
    n = p.n
    ix, iy, it = j, n + j, 2 * n
    dw = lambda k: complex(re_grad[k], im_grad[k])  # noqa: E731
    zj = complex(p.x[j], p.y[j])
    return 0.5 * (dw(ix) + 1j * dw(iy)) - 1j * zj * dw(it)


# -- Siegel model ------------------------------------------------------------


def siegel_embed(p: HPoint) -> np.ndarray:
    """(z, t) -> (t + i|z|^2, z_1, .., z_n), a point of the Siegel boundary M_n."""
    z = p.z
    return np.concatenate([[p.t + 1j * float(np.sum(np.abs(z) ** 2))], z])


def siegel_action(g: HPoint, xi: Sequence[complex]) -> np.ndarray:
    xi = np.asarray(xi, dtype=complex)
    if xi.shape != (g.n + 1,):
        raise DimensionMismatch(f"expected {g.n + 1} complex coordinates, got {xi.shape}")
    z = g.z
    out = np.empty_like(xi)
    out[0] = xi[0] + g.t + 1j * np.sum(np.abs(z) ** 2) + 2j * np.sum(xi[1:] * np.conj(z))
    out[1:] = xi[1:] + z
    return out


def siegel_defect(xi: Sequence[complex]) -> float:
    """``Im xi_0 - sum |xi_j|^2``; zero exactly on M_n."""
    xi = np.asarray(xi, dtype=complex)
    return float(xi[0].imag - np.sum(np.abs(xi[1:]) ** 2))
