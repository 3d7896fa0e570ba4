"""Scalar fields with derivative access.

A :class:`ScalarField` wraps a vectorised evaluator ``f(P)`` taking arrays of
shape ``(..., dim)``.  Derivatives come from analytic evaluators when supplied,
otherwise from finite differences:

* gradient: central differences with one Richardson step (h and h/2),
  ``h = eps^(1/3) * max(1, |coordinate|)``;
* hessian: central differences of the analytic gradient when there is one,
  else nested central differences of values with ``h = eps^(1/4) * max(1, |c|)``.

Planar profile fields use coordinates ``(a, b) = (t, |z|^2)``, i.e. real then
imaginary part of ``w = t + i|z|^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .core import EPS, horizontal_components
from .errors import HeisError, NonFiniteError, OutOfBoxError

Evaluator = Callable[[np.ndarray], np.ndarray]

H1_STEP = EPS ** (1.0 / 3.0)
H2_STEP = EPS ** 0.25


@dataclass(frozen=True)
class ScalarField:
    func: Evaluator
    dim: int
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    grad: Optional[Evaluator] = None
    hess: Optional[Evaluator] = None
    name: str = ""
    debug: bool = field(default=False, compare=False)

    def __post_init__(self):
        lo = tuple(float(v) for v in np.broadcast_to(self.lower, (self.dim,)))
        hi = tuple(float(v) for v in np.broadcast_to(self.upper, (self.dim,)))
        if any(a >= b for a, b in zip(lo, hi)):
            raise HeisError(f"empty bounding box {lo} .. {hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if self.debug and self.grad is not None:
            self.check_gradient()

    def __call__(self, P) -> np.ndarray:
        return np.asarray(self.func(np.asarray(P, float)), float)

    def in_box(self, P, slack: float = 1e-9) -> np.ndarray:
        P = np.asarray(P, float)
        lo, hi = np.array(self.lower), np.array(self.upper)
        pad = slack * np.maximum(1.0, hi - lo)
        return np.all((P >= lo - pad) & (P <= hi + pad), axis=-1)

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(np.subtract(self.upper, self.lower)))

    def gradient(self, P) -> np.ndarray:
        P = np.asarray(P, float)
        if self.grad is not None:
            return np.asarray(self.grad(P), float)
        return richardson_gradient(self, P)

    def hessian(self, P) -> np.ndarray:
        P = np.asarray(P, float)
        if self.hess is not None:
            return np.asarray(self.hess(P), float)
        if self.grad is not None:
            return _jacobian_of(self.grad, P, H1_STEP)
        return nested_hessian(self, P)

    def check_gradient(self, n: int = 32, rtol: float = 1e-6, seed: int = 0) -> float:
        """Compare the analytic gradient with finite differences on random box points.

        Returns the worst relative error; raises if it exceeds ``rtol``.
        """
        rng = np.random.default_rng(seed)
        P = rng.uniform(self.lower, self.upper, size=(n, self.dim))
        ga = self.gradient(P)
        gf = richardson_gradient(self, P)
        scale = np.maximum(1.0, np.linalg.norm(gf, axis=-1))
        err = float(np.max(np.linalg.norm(ga - gf, axis=-1) / scale))
        if err > rtol:
            raise HeisError(f"analytic gradient of {self.name or 'field'} disagrees with FD ({err:.2e})")
        return err


def _steps(P: np.ndarray, base: float) -> np.ndarray:
    return base * np.maximum(1.0, np.abs(P))


def central_difference(f: Evaluator, P: np.ndarray, h) -> np.ndarray:
    """Plain central-difference gradient with absolute step(s) ``h``."""
    P = np.asarray(P, float)
    d = P.shape[-1]
    h = np.broadcast_to(np.asarray(h, float), P.shape)
    out = np.empty(P.shape)
    for i in range(d):
        e = np.zeros(P.shape)
        e[..., i] = h[..., i]
        out[..., i] = (np.asarray(f(P + e)) - np.asarray(f(P - e))) / (2.0 * h[..., i])
    return out


def richardson_gradient(f: Evaluator, P: np.ndarray, base_step: float = H1_STEP) -> np.ndarray:
    P = np.asarray(P, float)
    h = _steps(P, base_step)
    d1 = central_difference(f, P, h)
    d2 = central_difference(f, P, h / 2)
    return (4.0 * d2 - d1) / 3.0


def _jacobian_of(g: Evaluator, P: np.ndarray, base_step: float) -> np.ndarray:
    P = np.asarray(P, float)
    d = P.shape[-1]
    h = _steps(P, base_step)
    J = np.empty(P.shape + (d,))
    for i in range(d):
        e = np.zeros(P.shape)
        e[..., i] = h[..., i]
        J[..., :, i] = (np.asarray(g(P + e)) - np.asarray(g(P - e))) / (2.0 * h[..., i : i + 1])
    return 0.5 * (J + np.swapaxes(J, -1, -2))


def nested_hessian(f: Evaluator, P: np.ndarray, base_step: float = H2_STEP) -> np.ndarray:
    P = np.asarray(P, float)
    d = P.shape[-1]
    h = _steps(P, base_step)
    H = np.empty(P.shape + (d,))
    f0 = np.asarray(f(P))
    for i in range(d):
        ei = np.zeros(P.shape)
        ei[..., i] = h[..., i]
        H[..., i, i] = (np.asarray(f(P + ei)) - 2.0 * f0 + np.asarray(f(P - ei))) / h[..., i] ** 2
        for j in range(i + 1, d):
            ej = np.zeros(P.shape)
            ej[..., j] = h[..., j]
            v = (
                np.asarray(f(P + ei + ej))
                - np.asarray(f(P + ei - ej))
                - np.asarray(f(P - ei + ej))
                + np.asarray(f(P - ei - ej))
            ) / (4.0 * h[..., i] * h[..., j])
            H[..., i, j] = H[..., j, i] = v
    return H


@dataclass(frozen=True)
class GradientData:
    value: float
    euclidean: np.ndarray
    horizontal: Optional[np.ndarray] = None

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.euclidean))


def eval_with_gradient(f: ScalarField, p) -> GradientData:
    """Value and gradient at a single point, with bounding-box and finiteness checks.

    For ambient fields (odd dimension >= 3) the horizontal part is filled in.
    """
    P = np.asarray(p.as_array() if hasattr(p, "as_array") else p, float)
    if P.shape != (f.dim,):
        raise HeisError(f"point has {P.size} coordinates, field expects {f.dim}")
    if not f.in_box(P):
        raise OutOfBoxError(f"{P} lies outside the declared box of {f.name or 'field'}")
    v = float(f(P))
    g = f.gradient(P)
    if not (np.isfinite(v) and np.all(np.isfinite(g))):
        raise NonFiniteError(f"non-finite evaluation of {f.name or 'field'} at {P}")
    hz = horizontal_components(P, g) if f.dim >= 3 and f.dim % 2 == 1 else None
    return GradientData(v, g, hz)


# -- composition and algebra ----------------------------------------------------


def compose_profile(u: ScalarField) -> ScalarField:
    """Lift a planar field u(a, b) to ``Psi(x, y, t) = u(t, x^2 + y^2)`` on H^1."""
    if u.dim != 2:
        raise HeisError("profile field must be planar")

    def to_plane(P):
        return np.stack([P[..., 2], P[..., 0] ** 2 + P[..., 1] ** 2], axis=-1)

    def func(P):
        return u(to_plane(np.asarray(P, float)))

    def grad(P):
        P = np.asarray(P, float)
        gu = u.gradient(to_plane(P))
        ua, ub = gu[..., 0], gu[..., 1]
        return np.stack([2 * P[..., 0] * ub, 2 * P[..., 1] * ub, ua], axis=-1)

    def hess(P):
        P = np.asarray(P, float)
        W = to_plane(P)
        gu, Hu = u.gradient(W), u.hessian(W)
        x, y = P[..., 0], P[..., 1]
        ub = gu[..., 1]
        uaa, uab, ubb = Hu[..., 0, 0], Hu[..., 0, 1], Hu[..., 1, 1]
        H = np.empty(P.shape + (3,))
        H[..., 0, 0] = 2 * ub + 4 * x * x * ubb
        H[..., 1, 1] = 2 * ub + 4 * y * y * ubb
        H[..., 0, 1] = H[..., 1, 0] = 4 * x * y * ubb
        H[..., 0, 2] = H[..., 2, 0] = 2 * x * uab
        H[..., 1, 2] = H[..., 2, 1] = 2 * y * uab
        H[..., 2, 2] = uaa
        return H

    rmax = float(np.sqrt(max(u.upper[1], 0.0))) or 1.0
    return ScalarField(
        func,
        3,
        (-rmax, -rmax, u.lower[0]),
        (rmax, rmax, u.upper[0]),
        grad=grad,
        hess=hess,
        name=f"lift({u.name})" if u.name else "lift",
    )


def scale_field(psi: ScalarField, h: ScalarField) -> ScalarField:
    """Pointwise product ``h * psi`` with product-rule derivatives."""
    if psi.dim != h.dim:
        raise HeisError("fields of different dimension")

    def func(P):
        return h(P) * psi(P)

    def grad(P):
        return h(P)[..., None] * psi.gradient(P) + psi(P)[..., None] * h.gradient(P)

    def hess(P):
        hv, pv = h(P)[..., None, None], psi(P)[..., None, None]
        gh, gp = h.gradient(P), psi.gradient(P)
        cross = gh[..., :, None] * gp[..., None, :]
        return hv * psi.hessian(P) + pv * h.hessian(P) + cross + np.swapaxes(cross, -1, -2)

    return ScalarField(func, psi.dim, psi.lower, psi.upper, grad=grad, hess=hess,
                       name=f"{h.name or 'h'}*{psi.name or 'psi'}")


def negate_field(psi: ScalarField) -> ScalarField:
    return ScalarField(
        lambda P: -psi(P), psi.dim, psi.lower, psi.upper,
        grad=lambda P: -psi.gradient(P), hess=lambda P: -psi.hessian(P),
        name=f"-{psi.name}",
    )


def squared_field(psi: ScalarField) -> ScalarField:
    """``psi^2``: same zero set, gradient vanishing on it.  Used as a bad defining field."""
    return ScalarField(
        lambda P: psi(P) ** 2, psi.dim, psi.lower, psi.upper,
        grad=lambda P: 2 * psi(P)[..., None] * psi.gradient(P),
        name=f"({psi.name})^2",
    )


def coordinate_field(index: int, dim: int = 3, lower=-10.0, upper=10.0) -> ScalarField:
    def grad(P):
        g = np.zeros(np.shape(P))
        g[..., index] = 1.0
        return g

    return ScalarField(
        lambda P: np.asarray(P, float)[..., index], dim, lower, upper,
        grad=grad, hess=lambda P: np.zeros(np.shape(P) + (dim,)), name=f"coord{index}",
    )


# -- defining functions -----------------------------------------------------------


@dataclass
class DefiningCheck:
    ok: bool
    min_grad: float
    tol: float
    failures: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def validate_defining(f: ScalarField, boundary_samples: Sequence, tol: float = 1e-8) -> DefiningCheck:
    """Check that ``|grad f|`` exceeds ``tol`` at every boundary sample.

    ``tol`` is absolute on ``|grad f|``; callers normalise the field first if
    they need a scale-free verdict.
    """
    pts = [np.asarray(p.as_array() if hasattr(p, "as_array") else p, float) for p in boundary_samples]
    if not pts:
        raise HeisError("no boundary samples supplied")
    P = np.stack(pts)
    g = np.linalg.norm(f.gradient(P), axis=-1)
    if not np.all(np.isfinite(g)):
        raise NonFiniteError("non-finite gradient on boundary samples")
    bad = np.flatnonzero(g <= tol)
    failures = [(P[i].tolist(), float(g[i])) for i in bad]
    return DefiningCheck(bool(bad.size == 0), float(g.min()), tol, failures)

