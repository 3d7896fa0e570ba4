"""Characteristic points of H^1 domains.

A boundary point is characteristic when the horizontal gradient of a defining
field vanishes there, equivalently when ``ker dPsi`` equals the horizontal plane
``ker theta_0``.  The scanner works with the normalised measure

    m = |grad_H Psi| / (|grad Psi| (1 + 2|z|))

which lies in [0, sqrt 2], vanishes exactly at characteristic points, and does
not change when Psi is multiplied by a positive function (on the zero set).
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .core import HorizontalVector, HPoint, contact_covector, distance_array, horizontal_components
from .convex import ConvexProfile, make_convex
from .domains import BoundaryMesh, ImplicitDomain, TorusDomain, boundary_mesh
from .errors import CharacteristicPointError, DefiningFunctionError, HeisError, ProfileError
from .fields import GradientData, eval_with_gradient

TANGENCY_NOTE = (
    "tangent-space membership pushes v to (v3, 2(x v1 + y v2)); the factor 2 is the "
    "differential of |z|^2 and matches the tangency equation used by the certificate"
)


def _as_points(xi) -> np.ndarray:
    if isinstance(xi, HPoint):
        if xi.n != 1:
            raise HeisError("characteristic analysis is implemented for H^1 only")
        return xi.as_array()
    return np.asarray(xi, float)


# -- pointwise quantities -----------------------------------------------------------


def measure_from_gradient(P: np.ndarray, G: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(m, |grad_H|, |grad|)`` for batches of points and Euclidean gradients."""
    P, G = np.asarray(P, float), np.asarray(G, float)
    hn = np.linalg.norm(horizontal_components(P, G), axis=-1)
    gn = np.linalg.norm(G, axis=-1)
    rz = np.hypot(P[..., 0], P[..., 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        m = hn / (gn * (1.0 + 2.0 * rz))
    return m, hn, gn


def char_measure(domain, xi, floor: float = 1e-12) -> float | np.ndarray:
    """Normalised characteristic measure at boundary point(s) ``xi``.

    ``floor`` is the smallest acceptable ``|grad Psi|``; below it the field is
    not a defining function there and ``DefiningFunctionError`` is raised.
    """
    P = _as_points(xi)
    m, _, gn = measure_from_gradient(P, domain.psi.gradient(P))
    if np.any(gn < floor):
        raise DefiningFunctionError("Euclidean gradient of the defining field vanishes")
    return float(m) if np.ndim(m) == 0 else m


def intersection_sine(P: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Sine of the angle between ``grad Psi`` and the contact covector (-2y, 2x, 1)."""
    C = contact_covector(P)
    cr = np.cross(G, C)
    return np.linalg.norm(cr, axis=-1) / (np.linalg.norm(G, axis=-1) * np.linalg.norm(C, axis=-1))


@dataclass(frozen=True)
class BoundarySample:
    xi: HPoint
    grad: GradientData
    m: float
    st: Optional[tuple[float, float]] = None


def boundary_sample(domain, xi, st=None, tol: float = 1e-8) -> BoundarySample:
    """Evaluate the defining field at a boundary point and package ``m`` with it.

    Raises ``HeisError`` when ``|Psi(xi)|`` exceeds ``tol`` times the field scale.
    """
    P = _as_points(xi)
    gd = eval_with_gradient(domain.psi, P)
    scale = max(1.0, gd.norm * max(1.0, float(np.abs(P).max())))
    if abs(gd.value) > tol * scale:
        raise HeisError(f"{P.tolist()} is not on the boundary (Psi = {gd.value:.3g})")
    if gd.norm == 0:
        raise DefiningFunctionError("Euclidean gradient of the defining field vanishes")
    m, _, _ = measure_from_gradient(P, gd.euclidean)
    return BoundarySample(HPoint.from_array(P), gd, float(m), None if st is None else (float(st[0]), float(st[1])))


@dataclass(frozen=True)
class TangentFrame:
    base: np.ndarray
    tangent_basis: np.ndarray  # (2, 3) orthonormal rows spanning ker dPsi
    X: np.ndarray
    Y: np.ndarray
    intersection_dim: int
    generator: Optional[np.ndarray]
    sine: float


def tangent_frame(domain, xi, rank_tol: float = 1e-6) -> TangentFrame:
    """Tangent plane of the boundary and its intersection with the horizontal plane.

    The intersection is ``ker dPsi`` ∩ ``ker theta_0``; it is a line spanned by
    ``grad Psi x (-2y, 2x, 1)`` unless the two covectors are parallel (sine below
    ``rank_tol``), in which case the tangent plane is horizontal.
    """
    P = _as_points(xi)
    g = domain.psi.gradient(P)
    gn = np.linalg.norm(g)
    if gn == 0 or not np.isfinite(gn):
        raise DefiningFunctionError("degenerate gradient: no tangent plane")
    _, _, Vt = np.linalg.svd(g[None, :] / gn)
    basis = Vt[1:]
    x, y = P[0], P[1]
    X = np.array([1.0, 0.0, 2 * y])
    Y = np.array([0.0, 1.0, -2 * x])
    sine = float(intersection_sine(P, g))
    if sine < rank_tol:
        return TangentFrame(P, basis, X, Y, 2, None, sine)
    gen = np.cross(g, contact_covector(P))
    return TangentFrame(P, basis, X, Y, 1, gen / np.linalg.norm(gen), sine)


def tangent_membership(domain: TorusDomain, xi, v, tol: float = 1e-9) -> bool:
    """Whether ``v`` is tangent to the torus boundary at ``xi``, decided in the profile plane.

    ``v`` is pushed to ``(v3, 2(x v1 + y v2))`` and compared with the tangent
    line of the profile boundary at ``w(xi)``.
    """
    if not isinstance(domain, TorusDomain):
        raise HeisError("tangent membership needs a torus domain")
    P = _as_points(xi)
    v = np.asarray(v.as_array() if hasattr(v, "as_array") else v, float)
    q = np.array([v[2], 2.0 * (P[0] * v[0] + P[1] * v[1])])
    qn = np.linalg.norm(q)
    if qn == 0:
        return True
    tau = domain.profile.tangent(np.array([P[2], P[0] ** 2 + P[1] ** 2]))
    return bool(abs(q[0] * tau[1] - q[1] * tau[0]) <= tol * qn)


def horizontal_normal(domain, xi, tol_char: float = 1e-6) -> HorizontalVector:
    P = _as_points(xi)
    g = domain.psi.gradient(P)
    m, hn, _ = measure_from_gradient(P, g)
    if not m > tol_char:
        raise CharacteristicPointError(f"horizontal normal undefined at characteristic point {P.tolist()}")
    h = horizontal_components(P, g) / hn
    return HorizontalVector(HPoint.from_array(P), h[:1], h[1:])


# -- scanning ------------------------------------------------------------------------


@dataclass
class ScanConfig:
    mesh: tuple[int, int] = (256, 64)
    grid: int = 64
    tol_char: float = 1e-6
    tol_suspect: float = 1e-3
    dedupe_radius: Optional[float] = None
    refine_iters: int = 200
    newton_iters: int = 30
    theta_tol: float = 1e-10
    full_refine: bool = False
    defining_floor: float = 1e-10
    newton_tol: float = 1e-10

    def __post_init__(self):
        self.mesh = tuple(int(v) for v in self.mesh)
        if min(self.mesh) < 8 or self.grid < 8:
            raise HeisError("mesh dimensions must be at least 8")
        if not 0 < self.tol_char < self.tol_suspect:
            raise HeisError("need 0 < tol_char < tol_suspect")
        if self.dedupe_radius is not None and not self.dedupe_radius > 0:
            raise HeisError("dedupe radius must be positive")
        if self.refine_iters < 1:
            raise HeisError("refine_iters must be positive")


@dataclass
class CharacteristicReport:
    domain: dict
    mesh: dict
    tolerances: dict
    global_min_m: dict
    global_min_hgrad: dict
    characteristic: list
    suspect: list
    violations: int
    verdict: str
    notes: list = field(default_factory=list)
    certificate: Optional[dict] = None
    samples: Optional[dict] = None
    timings: dict = field(default_factory=dict)

    @property
    def parametric(self) -> bool:
        return self.mesh.get("kind") == "parametric"

    def characteristic_points(self) -> np.ndarray:
        return np.array([c["location"] for c in self.characteristic]).reshape(-1, 3)

    def to_dict(self) -> dict:
        return asdict(self)


def _descend(obj, X0, step0, iters, f_stop, fd_h, project=None, normal=None):
    """Damped gradient descent with step halving, vectorised over starting points.

    Directions are normalised finite-difference gradients (projected onto the
    tangent plane when ``normal`` is given); a rejected step halves the step
    length, an accepted one grows it by 1.25.  Stops per point when the step
    drops below 1e-12 or the objective below ``f_stop``.
    """
    X = np.array(X0, float)
    F = obj(X)
    eta = np.full(len(X), float(step0))
    d = X.shape[1]
    for _ in range(iters):
        act = (eta >= 1e-12) & (F >= f_stop)
        if not act.any():
            break
        Xa = X[act]
        G = np.empty_like(Xa)
        for k in range(d):
            e = np.zeros(d)
            e[k] = fd_h
            G[:, k] = (obj(Xa + e) - obj(Xa - e)) / (2 * fd_h)
        if normal is not None:
            N = normal(Xa)
            G = G - np.sum(G * N, axis=1, keepdims=True) * N
        gn = np.linalg.norm(G, axis=1)
        flat = gn == 0
        Xn = Xa - (eta[act] / np.where(flat, 1.0, gn))[:, None] * G
        if project is not None:
            Xn = project(Xn)
        Fn = obj(Xn)
        better = (Fn < F[act]) & ~flat
        idx = np.flatnonzero(act)
        X[idx[better]] = Xn[better]
        F[idx[better]] = Fn[better]
        eta[idx] = np.where(better, eta[idx] * 1.25, eta[idx] * 0.5)
        eta[idx[flat]] = 0.0
    done = (eta < 1e-12) | (F < f_stop)
    return X, F, done


def _newton_project(psi, X, scale, tol, iters=8):
    X = np.array(X, float)
    for _ in range(iters):
        v = psi(X)
        if np.all(np.abs(v) <= tol * scale):
            break
        g = psi.gradient(X)
        gg = np.maximum(np.sum(g * g, axis=1), 1e-300)
        X = X - (v / gg)[:, None] * g
    return X


def _polish(psi, X, iters, scale, max_move):
    """Newton on (X Psi, Y Psi, Psi) = 0; returns polished points and a success mask."""
    X = np.array(X, float)
    X0 = X.copy()
    ok = np.zeros(len(X), bool)
    for i in range(len(X)):
        p = X[i].copy()
        for _ in range(iters):
            g = psi.gradient(p)
            H = psi.hessian(p)
            x, y = p[0], p[1]
            Fv = np.array([g[0] + 2 * y * g[2], g[1] - 2 * x * g[2], float(psi(p))])
            gn = np.linalg.norm(g)
            if np.linalg.norm(Fv[:2]) <= 1e-14 * gn and abs(Fv[2]) <= 1e-13 * scale:
                ok[i] = True
                break
            J = np.array([
                [H[0, 0] + 2 * y * H[2, 0], H[0, 1] + 2 * g[2] + 2 * y * H[2, 1], H[0, 2] + 2 * y * H[2, 2]],
                [H[1, 0] - 2 * g[2] - 2 * x * H[2, 0], H[1, 1] - 2 * x * H[2, 1], H[1, 2] - 2 * x * H[2, 2]],
                g,
            ])
            try:
                step = np.linalg.solve(J, -Fv)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(step)):
                break
            p = p + step
            if np.linalg.norm(p - X0[i]) > max_move:
                break
        else:
            g = psi.gradient(p)
            Fv = np.array([g[0] + 2 * p[1] * g[2], g[1] - 2 * p[0] * g[2]])
            ok[i] = np.linalg.norm(Fv) <= 1e-12 * np.linalg.norm(g) and abs(psi(p)) <= 1e-12 * scale
        if ok[i] and np.linalg.norm(p - X0[i]) <= max_move:
            X[i] = p
        else:
            ok[i] = False
    return X, ok


def _periodic_minima_1d(v: np.ndarray) -> np.ndarray:
    return np.flatnonzero((v <= np.roll(v, 1)) & (v <= np.roll(v, -1)) & np.isfinite(v))


def _periodic_minima_2d(V: np.ndarray) -> np.ndarray:
    ok = np.isfinite(V)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                ok &= V <= np.roll(np.roll(V, di, 0), dj, 1)
    return np.argwhere(ok)


def _grid_minima_3d(cells: np.ndarray, values: np.ndarray, n: int) -> np.ndarray:
    A = np.full((n + 1, n + 1, n + 1), np.inf)
    c = cells + 1
    A[c[:, 0], c[:, 1], c[:, 2]] = np.where(np.isfinite(values), values, np.inf)
    mine = A[c[:, 0], c[:, 1], c[:, 2]]
    ok = np.isfinite(mine)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            for dk in (-1, 0, 1):
                if di or dj or dk:
                    nb = A[(c[:, 0] + di) % (n + 1), (c[:, 1] + dj) % (n + 1), (c[:, 2] + dk) % (n + 1)]
                    ok &= mine <= nb
    return np.flatnonzero(ok)


def _dedupe(points: np.ndarray, order: np.ndarray, radius: float) -> list[int]:
    kept: list[int] = []
    for i in order:
        if not kept or np.all(distance_array(points[kept], np.broadcast_to(points[i], (len(kept), 3))) > radius):
            kept.append(int(i))
    return kept


def scan(domain, config: ScanConfig | None = None) -> CharacteristicReport:
    """Search the boundary for characteristic points.

    1. mesh the boundary and evaluate m on every sample;
    2. refine discrete local minima of m (and of |grad_H Psi|) by descent in
       boundary coordinates: (s) or (s, theta) for tori, ambient tangent-plane
       steps with re-projection onto {Psi = 0} for implicit domains;
    3. polish minima with m below the suspect threshold by Newton's method on
       (X Psi, Y Psi, Psi) = 0;
    4. report deduplicated minima with m < tol_char as characteristic.
    """
    cfg = config or ScanConfig()
    t0 = time.perf_counter()
    if isinstance(domain, TorusDomain):
        mesh = boundary_mesh(domain, cfg.mesh)
    elif isinstance(domain, ImplicitDomain):
        mesh = boundary_mesh(domain, cfg.grid, newton_tol=cfg.newton_tol)
    else:
        raise HeisError(f"cannot scan {type(domain).__name__}")
    psi = domain.psi
    t_mesh = time.perf_counter()
    P, G = mesh.points, mesh.grads
    m, hn, gn = measure_from_gradient(P, G)
    bad = gn < cfg.defining_floor * mesh.scale
    m = np.where(bad, np.nan, m)
    dedupe = cfg.dedupe_radius if cfg.dedupe_radius is not None else 1e-3 * mesh.diameter
    notes = [TANGENCY_NOTE]

    def m_at(X):
        mm, _, _ = measure_from_gradient(X, psi.gradient(X))
        return mm

    def h_at(X):
        _, hh, _ = measure_from_gradient(X, psi.gradient(X))
        return hh

    f_stop = (cfg.tol_char / 10) ** 2
    theta_spread = None
    if mesh.kind == "parametric":
        n_s, n_t = mesh.dims
        M = m.reshape(n_s, n_t)
        Hn = hn.reshape(n_s, n_t)
        theta_spread = float(np.nanmax(np.nanmax(M, 1) - np.nanmin(M, 1)))
        one_d = theta_spread <= cfg.theta_tol and not cfg.full_refine
        if theta_spread > cfg.theta_tol:
            notes.append(f"m varies with theta by {theta_spread:.3e}; refining in (s, theta)")
        st = mesh.st.reshape(n_s, n_t, 2)
        ds = 1.0 / n_s
        if one_d:
            def lift(S):
                return domain.boundary_points(S[:, 0], np.zeros(len(S)))
            starts_m = st[_periodic_minima_1d(M[:, 0]), 0, :1]
            starts_h = st[_periodic_minima_1d(Hn[:, 0]), 0, :1]
            step0, fd_h = ds, 1e-7
        else:
            def lift(S):
                return domain.boundary_points(S[:, 0], S[:, 1])
            im = _periodic_minima_2d(M)
            ih = _periodic_minima_2d(Hn)
            starts_m = st[im[:, 0], im[:, 1]]
            starts_h = st[ih[:, 0], ih[:, 1]]
            step0, fd_h = ds, 1e-7
        S_m, _, done_m = _descend(lambda S: m_at(lift(S)) ** 2, starts_m, step0, cfg.refine_iters, f_stop, fd_h)
        S_h, _, _ = _descend(lambda S: h_at(lift(S)) ** 2, starts_h, step0, cfg.refine_iters, 0.0, fd_h)
        X_m, X_h = lift(S_m), lift(S_h)
        st_m = np.column_stack([S_m[:, 0] % 1.0, (S_m[:, 1] if S_m.shape[1] > 1 else np.zeros(len(S_m))) % (2 * np.pi)])
        step_len = np.sqrt(ds) * mesh.diameter
    else:
        cells = mesh.cells
        starts_m = P[_grid_minima_3d(cells, m, mesh.dims[0])]
        starts_h = P[_grid_minima_3d(cells, np.where(bad, np.nan, hn), mesh.dims[0])]
        h = float(np.linalg.norm(mesh.cell_size))
        fd_h = 1e-7 * max(1.0, mesh.diameter)

        def project(X):
            return _newton_project(psi, X, mesh.scale, cfg.newton_tol)

        def normal(X):
            g = psi.gradient(X)
            return g / np.linalg.norm(g, axis=1, keepdims=True)

        X_m, _, done_m = _descend(lambda X: m_at(X) ** 2, starts_m, h, cfg.refine_iters, f_stop, fd_h, project, normal)
        X_h, _, _ = _descend(lambda X: h_at(X) ** 2, starts_h, h, cfg.refine_iters, 0.0, fd_h, project, normal)
        st_m = None
        step_len = 2 * h
    t_refine = time.perf_counter()

    mref = m_at(X_m)
    polished = np.zeros(len(X_m), bool)
    cand = np.flatnonzero(mref < cfg.tol_suspect)
    if cand.size:
        Xp, okp = _polish(psi, X_m[cand], cfg.newton_iters, mesh.scale, step_len)
        X_m[cand] = Xp
        polished[cand] = okp
        mref = m_at(X_m)
        if st_m is not None:
            # polishing moves points off the (s, theta) grid slightly; theta is exact, s approximate
            st_m[cand, 1] = np.mod(np.arctan2(X_m[cand, 1], X_m[cand, 0]), 2 * np.pi)
    href = h_at(X_m)
    hh = h_at(X_h)

    # global minima over mesh and refined points
    all_m = np.concatenate([np.where(np.isnan(m), np.inf, m), mref])
    all_P = np.concatenate([P, X_m])
    k = int(np.argmin(all_m))
    gmin = {"value": float(all_m[k]), "location": all_P[k].tolist()}
    if mesh.kind == "parametric":
        all_st = np.concatenate([mesh.st, st_m])
        gmin["st"] = all_st[k].tolist()
    all_h = np.concatenate([np.where(bad, np.inf, hn), href, hh])
    all_hP = np.concatenate([P, X_m, X_h])
    kh = int(np.argmin(all_h))
    hmin = {"value": float(all_h[kh]), "location": all_hP[kh].tolist()}

    def entries(idx):
        if not len(idx):
            return []
        if st_m is not None:
            order = np.lexsort((st_m[idx, 1], st_m[idx, 0], mref[idx]))
        else:
            order = np.lexsort((X_m[idx, 2], X_m[idx, 1], X_m[idx, 0], mref[idx]))
        kept = _dedupe(X_m[idx], order, dedupe)
        out = []
        for j in kept:
            i = idx[j]
            e = {"location": X_m[i].tolist(), "m": float(mref[i]),
                 "converged": bool(polished[i] or done_m[i]), "newton_polished": bool(polished[i])}
            if st_m is not None:
                e["st"] = st_m[i].tolist()
            out.append(e)
        return out

    char_idx = np.flatnonzero(mref < cfg.tol_char)
    sus_idx = np.flatnonzero((mref >= cfg.tol_char) & (mref < cfg.tol_suspect))
    characteristic = entries(char_idx)
    suspect = entries(sus_idx)
    dims = list(mesh.dims)
    if characteristic:
        verdict = f"{len(characteristic)} characteristic point(s) found"
    else:
        verdict = f"no characteristic point found at resolution {'x'.join(map(str, dims))}"
    tol = {
        "tol_char": cfg.tol_char, "tol_suspect": cfg.tol_suspect, "dedupe_radius": dedupe,
        "refine_iters": cfg.refine_iters, "newton_iters": cfg.newton_iters, "theta_tol": cfg.theta_tol,
        "defining_floor": cfg.defining_floor, "newton_tol": cfg.newton_tol,
        "refine_stop_m": cfg.tol_char / 10, "refine_min_step": 1e-12,
    }
    mesh_info = {
        "kind": mesh.kind, "dims": dims, "n_samples": len(mesh), "dropped": mesh.dropped,
        "scale": mesh.scale, "diameter": mesh.diameter, "max_move_cells": mesh.max_move_cells,
        "theta_spread": theta_spread, "minima_refined": int(len(X_m)),
    }
    samples = {
        "st": mesh.st, "points": P, "psi": mesh.values, "grad_norm": gn, "hgrad_norm": hn, "m": m,
    }
    t_end = time.perf_counter()
    return CharacteristicReport(
        domain=domain.descriptor(), mesh=mesh_info, tolerances=tol, global_min_m=gmin,
        global_min_hgrad=hmin, characteristic=characteristic, suspect=suspect,
        violations=int(bad.sum()), verdict=verdict, notes=notes, samples=samples,
        timings={"mesh_s": t_mesh - t0, "refine_s": t_refine - t_mesh, "total_s": t_end - t0},
    )


# -- certificates ----------------------------------------------------------------------


@dataclass
class ConvexCertificate:
    passed: bool
    n_samples: int
    dims: np.ndarray
    sines: np.ndarray
    cases: np.ndarray
    case_counts: dict
    min_sine: float
    rank_tol: float
    violations: list
    disc_bound: Optional[dict] = None
    profile: Optional[dict] = None

    def to_dict(self, per_sample: bool = True) -> dict:
        out = {
            "status": "PASS" if self.passed else "FAIL", "n_samples": self.n_samples,
            "case_counts": self.case_counts, "min_sine": self.min_sine, "rank_tol": self.rank_tol,
            "violations": self.violations, "disc_bound": self.disc_bound, "profile": self.profile,
        }
        if per_sample:
            out["per_sample"] = {"dim": self.dims.tolist(), "sine": self.sines.tolist(), "case": self.cases.tolist()}
        return out


CASES = ("t0=a1", "|z0|^2=a2", "generic")


def certify_convex(domain: TorusDomain, n_samples: int = 10_000, cp: ConvexProfile | None = None,
                   rank_tol: float = 1e-6, case_tol: float = 1e-9) -> ConvexCertificate:
    """Check, sample by sample, that the tangent plane meets the horizontal plane in a line.

    At ``xi = B(s, theta)`` with planar normal ``n = grad u(w0)`` the tangency
    condition is ``n_a v3 + 2 n_b (x v1 + y v2) = 0`` and horizontality is
    ``2 y v1 - 2 x v2 - v3 = 0``; the two rows must have rank 2.  Samples are
    labelled by which component of ``n`` vanishes (for a disc of centre (a1, a2):
    ``t0 = a1`` when ``n_a = 0`` and ``|z0|^2 = a2`` when ``n_b = 0``).
    """
    if not isinstance(domain, TorusDomain):
        raise HeisError("convex certificate needs a torus domain")
    if cp is None:
        cp = make_convex(domain.profile)
    if n_samples < 1:
        raise HeisError("need at least one sample")
    k = np.arange(n_samples)
    s = k / n_samples
    theta = np.mod(k * np.pi * (3 - np.sqrt(5)), 2 * np.pi)
    X = domain.boundary_points(s, theta)
    W = np.column_stack([X[:, 2], X[:, 0] ** 2 + X[:, 1] ** 2])
    Nrm = domain.profile.implicit.gradient(W)
    na, nb = Nrm[:, 0], Nrm[:, 1]
    x, y = X[:, 0], X[:, 1]
    row1 = np.column_stack([2 * x * nb, 2 * y * nb, na])
    row2 = np.column_stack([2 * y, -2 * x, -np.ones(n_samples)])
    sine = np.linalg.norm(np.cross(row1, row2), axis=1) / (
        np.linalg.norm(row1, axis=1) * np.linalg.norm(row2, axis=1))
    dims = np.where(sine > rank_tol, 1, 2)
    nn = np.hypot(na, nb)
    cases = np.where(np.abs(na) <= case_tol * nn, 0, np.where(np.abs(nb) <= case_tol * nn, 1, 2))
    counts = {CASES[c]: int(np.sum(cases == c)) for c in range(3)}
    viol = [{"s": float(s[i]), "theta": float(theta[i]), "sine": float(sine[i])} for i in np.flatnonzero(dims != 1)]
    bound = None
    if domain.profile.name == "disc":
        (a1, a2), r = domain.profile.params["center"], domain.profile.params["radius"]
        bound = disc_certificate((a1, a2), r)
    return ConvexCertificate(
        passed=bool(np.all(dims == 1)), n_samples=n_samples, dims=dims, sines=sine, cases=cases,
        case_counts=counts, min_sine=float(sine.min()), rank_tol=rank_tol, violations=viol,
        disc_bound=bound, profile=cp.descriptor(),
    )


def disc_certificate(center, r: float) -> dict:
    """Closed-form minimum of ``|grad_H Psi|`` on the torus over the disc profile.

    For ``u = (a - a1)^2 + (b - a2)^2 - r^2`` one has ``|grad_H Psi|^2 = 4|z|^2 |grad u|^2
    = 16 |z|^2 r^2`` on the boundary, minimal where ``|z|^2 = a2 - r``.
    """
    a1, a2 = (float(c) for c in center)
    if not r > 0:
        raise ProfileError("radius must be positive")
    if not a2 - r > 0:
        raise ProfileError(f"disc profile touches the axis (a2 - r = {a2 - r:g})")
    sq = 16.0 * (a2 - r) * r * r
    return {"center": [a1, a2], "radius": r, "min_hgrad_sq": sq, "min_hgrad": float(np.sqrt(sq)),
            "attained_at_z2": a2 - r}
