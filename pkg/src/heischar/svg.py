"""Static SVG figures: heatmap of m over (s, theta) and a profile sketch."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .characteristic import CharacteristicReport
from .convex import ConvexProfile, circle_to_boundary
from .errors import HeisError
from .report import report_dict

# viridis-like stops
_STOPS = np.array([
    [0.267, 0.005, 0.329],
    [0.229, 0.322, 0.546],
    [0.128, 0.567, 0.551],
    [0.369, 0.789, 0.383],
    [0.993, 0.906, 0.144],
])


def colour(v: float) -> str:
    v = min(max(float(v), 0.0), 1.0) * (len(_STOPS) - 1)
    i = min(int(v), len(_STOPS) - 2)
    c = _STOPS[i] + (v - i) * (_STOPS[i + 1] - _STOPS[i])
    return "#%02x%02x%02x" % tuple(int(round(255 * x)) for x in c)


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def _write(path, text: str) -> Path:
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise HeisError(f"cannot write {path}: {exc}") from exc
    return path


def emit_svg_heatmap(report, path, cell: float = 3.0) -> Path:
    """Heatmap of m over the (s, theta) mesh; accepts a report object or its JSON dict.

    Cells with ``m < tol_char`` carry the class ``zero-level``; the global minimum
    and any characteristic points are circled.
    """
    if isinstance(report, CharacteristicReport):
        report = report_dict(report, include_timings=False)
    mesh = report.get("mesh", {})
    if mesh.get("kind") != "parametric":
        raise HeisError("heatmaps need a parametric (torus) report")
    cols = report.get("samples")
    if not cols:
        raise HeisError("report has no samples")
    n_s, n_t = mesh["dims"]
    m = np.array([np.nan if v is None else v for v in cols["m"]], float).reshape(n_s, n_t)
    tol = report["tolerances"]["tol_char"]
    top = float(np.nanmax(m)) if np.isfinite(m).any() else 1.0
    top = top if top > 0 else 1.0
    ml, mt = 50.0, 30.0
    W, H = n_s * cell, n_t * cell
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(W + ml + 90)}" height="{_fmt(H + mt + 45)}">',
        f'<text x="{_fmt(ml)}" y="18" font-size="12" font-family="sans-serif">'
        f'm over (s, theta), max {top:.4g}, min {np.nanmin(m):.4g}</text>',
        f'<g transform="translate({_fmt(ml)},{_fmt(mt)})" shape-rendering="crispEdges">',
    ]
    for i in range(n_s):
        for j in range(n_t):
            v = m[i, j]
            if not np.isfinite(v):
                out.append(f'<rect class="violation" x="{_fmt(i * cell)}" y="{_fmt(j * cell)}" '
                           f'width="{_fmt(cell)}" height="{_fmt(cell)}" fill="#ff00ff"/>')
                continue
            cls = ' class="zero-level"' if v < tol else ""
            out.append(f'<rect{cls} x="{_fmt(i * cell)}" y="{_fmt(j * cell)}" width="{_fmt(cell)}" '
                       f'height="{_fmt(cell)}" fill="{colour(v / top)}"/>')
    out.append("</g>")

    def marker(st, cls, stroke):
        x = ml + st[0] * W
        y = mt + st[1] / (2 * np.pi) * H
        return f'<circle class="{cls}" cx="{_fmt(x)}" cy="{_fmt(y)}" r="5" fill="none" stroke="{stroke}" stroke-width="1.5"/>'

    if "st" in report["global_min_m"]:
        out.append(marker(report["global_min_m"]["st"], "global-min", "#ffffff"))
    for c in report["characteristic"]:
        if "st" in c:
            out.append(marker(c["st"], "characteristic", "#ff0000"))
    out.append(f'<text x="{_fmt(ml + W / 2)}" y="{_fmt(mt + H + 30)}" font-size="12" '
               f'font-family="sans-serif" text-anchor="middle">s</text>')
    out.append(f'<text x="15" y="{_fmt(mt + H / 2)}" font-size="12" font-family="sans-serif">theta</text>')
    # colour bar
    bx = ml + W + 20
    for k in range(50):
        out.append(f'<rect x="{_fmt(bx)}" y="{_fmt(mt + H - (k + 1) * H / 50)}" width="12" '
                   f'height="{_fmt(H / 50 + 0.5)}" fill="{colour(k / 49)}"/>')
    out.append(f'<text x="{_fmt(bx + 16)}" y="{_fmt(mt + 8)}" font-size="10" font-family="sans-serif">{top:.3g}</text>')
    out.append(f'<text x="{_fmt(bx + 16)}" y="{_fmt(mt + H)}" font-size="10" font-family="sans-serif">0</text>')
    out.append("</svg>\n")
    return _write(path, "\n".join(out))


def emit_svg_profile(cp: ConvexProfile, path, n: int = 512, size: float = 400.0, rays: int = 12) -> Path:
    """Profile boundary in the (t, |z|^2) plane with the anchor A, the disc D(A, r) and radial rays."""
    P = cp.base.points(np.arange(n) / n)
    lo, hi = P.min(axis=0), P.max(axis=0)
    span = float(max(hi - lo)) * 1.15
    mid = 0.5 * (lo + hi)
    k = size / span

    def xy(p):
        return size / 2 + k * (p[0] - mid[0]), size / 2 - k * (p[1] - mid[1])

    pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in map(xy, P))
    ax, ay = xy(cp.center)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(size)}" height="{_fmt(size + 20)}">',
        f'<polygon class="profile" points="{pts}" fill="#dde8f5" stroke="#1f4e8c" stroke-width="1.5"/>',
    ]
    ang = 2 * np.pi * np.arange(rays) / rays
    omega = cp.center + cp.r * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    ends = circle_to_boundary(cp, omega)
    for e in ends:
        ex, ey = xy(e)
        out.append(f'<line class="ray" x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(ex)}" y2="{_fmt(ey)}" '
                   f'stroke="#888888" stroke-width="0.7"/>')
    out.append(f'<circle class="disc" cx="{_fmt(ax)}" cy="{_fmt(ay)}" r="{_fmt(k * cp.r)}" '
               f'fill="none" stroke="#c0392b" stroke-width="1.2"/>')
    out.append(f'<circle class="anchor" cx="{_fmt(ax)}" cy="{_fmt(ay)}" r="3" fill="#c0392b"/>')
    out.append(f'<text x="8" y="{_fmt(size + 14)}" font-size="11" font-family="sans-serif">'
               f'{cp.base.name}: A = ({cp.A[0]:.4g}, {cp.A[1]:.4g}), r = {cp.r:.4g}; axes t, |z|^2</text>')
    out.append("</svg>\n")
    return _write(path, "\n".join(out))
