"""Command-line front end.

Subcommands::

    scan         search a domain boundary for characteristic points
    certify      per-sample rank certificate for a convex-profile torus
    map          the chart (z, t) -> ((t, |z|^2), z/|z|) and its tangent map
    profile-map  radial maps between a convex profile and a disc D(A, r)
    report       re-render CSV / SVG from a saved JSON report

Exit status: 0 on success, 1 on usage or validation errors, 2 when a
certificate FAILs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import domains as dom
from .characteristic import ScanConfig, certify_convex, scan
from .convex import (boundary_to_circle, disc_to_profile, injectivity_check, make_convex,
                     profile_to_disc, radial_lipschitz)
from .core import HPoint, TangentVector
from .errors import HeisError
from .report import canonical, dumps, load_json, report_dict, to_plain, write_csv, write_json
from .svg import emit_svg_heatmap, emit_svg_profile
from .torus_map import (ProductPoint, chart_fd_jacobian, from_product, from_product_array, tangent_map,
                        tangent_matrix, to_product, to_product_array)

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
DEFAULT_TRIANGLE = "0,2;2,2;1,3.5"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str, n: int | None = None, what: str = "value") -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise HeisError(f"cannot parse {what} {text!r}") from None
    if n is not None and len(vals) != n:
        raise HeisError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    return vals


def _mesh_dims(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise HeisError(f"mesh must look like 256x64, got {text!r}") from None


# -- domain construction ----------------------------------------------------------------


def _add_profile_args(p):
    g = p.add_argument_group("profile")
    g.add_argument("--profile", choices=["disc", "ellipse", "rounded-polygon", "crescent", "expr"], default="disc")
    g.add_argument("--center", help="a1,a2 for profiles; x,y,t for balls")
    g.add_argument("--radius", type=float, default=1.0)
    g.add_argument("--axes", default="2,1", help="ellipse semi-axes r1,r2")
    g.add_argument("--vertices", default=DEFAULT_TRIANGLE, help="polygon vertices 'a,b;c,d;...'")
    g.add_argument("--rounding", type=float, default=0.2)
    g.add_argument("--depth", type=float, default=0.9, help="crescent indentation")
    g.add_argument("--profile-file", help="JSON expression profile (see README)")


def build_profile(args) -> dom.Profile:
    kind = args.profile
    if args.profile_file:
        kind = "expr"
    if kind == "expr":
        if not args.profile_file:
            raise HeisError("--profile expr needs --profile-file")
        try:
            data = json.loads(open(args.profile_file).read())
        except (OSError, json.JSONDecodeError) as exc:
            raise HeisError(f"cannot read profile file: {exc}") from exc
        try:
            return dom.expression_profile(data["expression"], data.get("constants"), data["interior"], data["box"])
        except KeyError as exc:
            raise HeisError(f"profile file lacks {exc}") from None
    center = _floats(args.center or "1,2", 2, "--center")
    if kind == "disc":
        return dom.disc(center[0], center[1], args.radius)
    if kind == "ellipse":
        r1, r2 = _floats(args.axes, 2, "--axes")
        return dom.ellipse(center[0], center[1], r1, r2)
    if kind == "rounded-polygon":
        verts = [_floats(v, 2, "vertex") for v in args.vertices.split(";")]
        return dom.rounded_polygon(verts, args.rounding)
    return dom.crescent(center[0], center[1], args.radius, args.depth)


def build_domain(args):
    kind = args.domain
    if kind == "torus":
        return dom.make_torus(build_profile(args))
    if kind == "koranyi-ball":
        c = HPoint.from_array(_floats(args.center, 3, "--center")) if args.center else None
        return dom.koranyi_ball(c, args.radius)
    if kind == "euclidean-ball":
        c = _floats(args.center or "0,0,0", 3, "--center")
        return dom.euclidean_ball(tuple(c), args.radius)
    return dom.half_space(args.radius)


# -- subcommands --------------------------------------------------------------------------


def cmd_scan(args) -> int:
    domain = build_domain(args)
    cfg = ScanConfig(
        mesh=_mesh_dims(args.mesh), grid=args.grid, tol_char=args.tol_char, tol_suspect=args.tol_suspect,
        dedupe_radius=args.dedupe_radius, refine_iters=args.refine_iters, newton_iters=args.newton_iters,
        full_refine=args.full_refine,
    )
    rep = scan(domain, cfg)
    cert = None
    if args.certify:
        if not isinstance(domain, dom.TorusDomain):
            raise HeisError("--certify applies to torus domains only")
        cert = certify_convex(domain, args.samples)
    doc = report_dict(rep, cert, include_samples=not args.no_samples, include_timings=not args.no_timings,
                      seed=args.seed)
    if args.out:
        write_json(doc, args.out)
    if args.csv:
        write_csv(doc, args.csv)
    if args.svg:
        emit_svg_heatmap(doc, args.svg)
    print(rep.verdict)
    print(f"global min m = {rep.global_min_m['value']:.6g} at {rep.global_min_m['location']}")
    for c in rep.characteristic:
        print(f"  characteristic: {c['location']}  m = {c['m']:.3g}")
    if cert is not None:
        print(f"certificate: {'PASS' if cert.passed else 'FAIL'}")
        return EXIT_OK if cert.passed else EXIT_FAIL
    return EXIT_OK


def cmd_certify(args) -> int:
    profile = build_profile(args)
    domain = dom.make_torus(profile)
    cp = make_convex(profile, _floats(args.anchor, 2, "--anchor") if args.anchor else None, args.disc_radius)
    cert = certify_convex(domain, args.samples, cp, rank_tol=args.rank_tol)
    doc = {"schema_version": 1, "domain": domain.descriptor(), "certificate": cert.to_dict(not args.summary)}
    if args.out:
        write_json(doc, args.out)
    status = "PASS" if cert.passed else "FAIL"
    print(f"{status}: {cert.n_samples} samples, min sine {cert.min_sine:.4g}, cases {cert.case_counts}")
    if cert.disc_bound:
        print(f"min |grad_H Psi| = {cert.disc_bound['min_hgrad']:.6g} (closed form)")
    for v in cert.violations[:10]:
        print(f"  violation at s={v['s']:.6f} theta={v['theta']:.6f} sine={v['sine']:.3g}")
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_map(args) -> int:
    if args.random:
        rng = np.random.default_rng(args.seed)
        r = rng.uniform(args.min_radius, 3.0, args.random)
        phi = rng.uniform(0, 2 * np.pi, args.random)
        P = np.column_stack([r * np.cos(phi), r * np.sin(phi), rng.uniform(-3, 3, args.random)])
        W, U = to_product_array(P)
        back = from_product_array(W, U)
        J = tangent_matrix(P)
        Jfd = chart_fd_jacobian(P)
        sv = np.linalg.svd(J, compute_uv=False)[:, -1]
        out = {"points": args.random, "seed": args.seed, "min_radius": args.min_radius,
               "max_roundtrip_error": float(np.max(np.abs(back - P))),
               "max_fd_jacobian_error": float(np.max(np.abs(J - Jfd))),
               "min_singular_value": float(sv.min())}
    elif args.point:
        p = HPoint.from_array(_floats(args.point, 3, "--point"))
        q = to_product(p)
        out = {"point": list(p.as_array()), "w": list(q.w), "u": list(q.u)}
        if args.vector:
            v = TangentVector.from_array(p, _floats(args.vector, 3, "--vector"))
            dw, du = tangent_map(p, v)
            out.update({"vector": list(v.as_array()), "dw": dw.tolist(), "du": du.tolist()})
    elif args.w and args.u:
        q = ProductPoint(tuple(_floats(args.w, 2, "--w")), tuple(_floats(args.u, 2, "--u")))
        out = {"w": list(q.w), "u": list(q.u), "point": list(from_product(q).as_array())}
    else:
        raise HeisError("map needs --point, --w with --u, or --random N")
    text = dumps(to_plain(out))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_profile_map(args) -> int:
    profile = build_profile(args)
    cp = make_convex(profile, _floats(args.anchor, 2, "--anchor") if args.anchor else None, args.disc_radius)
    out = {"convex_profile": cp.descriptor()}
    if args.point:
        P = np.array([_floats(s, 2, "--point") for s in args.point])
        if args.direction == "to-disc":
            Y = profile_to_disc(cp, P)
            out.update({"direction": "to-disc", "input": P.tolist(), "output": Y.tolist(),
                        "roundtrip_error": float(np.max(np.abs(disc_to_profile(cp, Y) - P)))})
        else:
            X = disc_to_profile(cp, P)
            out.update({"direction": "to-profile", "input": P.tolist(), "output": X.tolist(),
                        "roundtrip_error": float(np.max(np.abs(profile_to_disc(cp, X) - P)))})
    if args.random:
        rng = np.random.default_rng(args.seed)
        rad = cp.r * np.sqrt(rng.uniform(0, 1, args.random))
        ang = rng.uniform(0, 2 * np.pi, args.random)
        Y = cp.center + rad[:, None] * np.column_stack([np.cos(ang), np.sin(ang)])
        X = disc_to_profile(cp, Y)
        err_gh = float(np.max(np.abs(profile_to_disc(cp, X) - Y)))
        Xb = profile.points(rng.uniform(0, 1, args.random))
        err_bd = float(np.max(np.abs(np.linalg.norm(boundary_to_circle(cp, Xb) - cp.center, axis=1) - cp.r)))
        out["random_check"] = {"points": args.random, "seed": args.seed, "max_roundtrip_error": err_gh,
                               "max_circle_error": err_bd}
    out["injectivity"] = injectivity_check(cp)
    out["radial_lipschitz"] = radial_lipschitz(cp)
    if args.svg:
        emit_svg_profile(cp, args.svg)
    text = dumps(to_plain(out))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_report(args) -> int:
    doc = load_json(args.report)
    if args.csv:
        write_csv(doc, args.csv)
    if args.svg:
        emit_svg_heatmap(doc, args.svg)
    if args.canonical:
        sys.stdout.write(canonical(doc))
    else:
        print(doc.get("verdict", ""))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="heischar", description="Characteristic points of domains in the Heisenberg group H^1.")
    ap.add_argument("--threads", type=int, help="worker threads (overrides HEISCHAR_THREADS)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="search a boundary for characteristic points")
    p.add_argument("--domain", choices=["koranyi-ball", "euclidean-ball", "half-space", "torus"], default="torus")
    _add_profile_args(p)
    p.add_argument("--mesh", default="256x64", help="torus mesh n_s x n_theta")
    p.add_argument("--grid", type=int, default=64, help="box grid nodes per axis for implicit domains")
    p.add_argument("--tol-char", type=float, default=1e-6)
    p.add_argument("--tol-suspect", type=float, default=1e-3)
    p.add_argument("--dedupe-radius", type=float)
    p.add_argument("--refine-iters", type=int, default=200)
    p.add_argument("--newton-iters", type=int, default=30)
    p.add_argument("--full-refine", action="store_true", help="refine tori in (s, theta) instead of s")
    p.add_argument("--certify", action="store_true", help="also run the convex certificate (tori)")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="JSON report path")
    p.add_argument("--csv")
    p.add_argument("--svg", help="heatmap of m over (s, theta); tori only")
    p.add_argument("--no-samples", action="store_true", help="omit per-sample columns from JSON")
    p.add_argument("--no-timings", action="store_true", help="omit the timings block (byte-stable output)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("certify", help="convex-profile certificate")
    _add_profile_args(p)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--anchor", help="interior point A = a1,a2 (default: profile interior point)")
    p.add_argument("--disc-radius", type=float, help="radius of D(A, r) (default: half the distance to the boundary)")
    p.add_argument("--rank-tol", type=float, default=1e-6)
    p.add_argument("--summary", action="store_true", help="omit per-sample arrays from JSON")
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("map", help="chart to R^2_+ x S^1 and its tangent map")
    p.add_argument("--point", help="x,y,t")
    p.add_argument("--vector", help="v1,v2,v3 tangent at --point")
    p.add_argument("--w", help="inverse chart input w = t,|z|^2")
    p.add_argument("--u", help="inverse chart input u (unit vector)")
    p.add_argument("--random", type=int, help="round-trip / Jacobian check on N random points")
    p.add_argument("--min-radius", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("profile-map", help="maps between a convex profile and D(A, r)")
    _add_profile_args(p)
    p.add_argument("--anchor")
    p.add_argument("--disc-radius", type=float)
    p.add_argument("--direction", choices=["to-disc", "to-profile"], default="to-disc")
    p.add_argument("--point", action="append", help="a,b (repeatable)")
    p.add_argument("--random", type=int, default=0, help="round-trip check on N random disc points")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--svg", help="profile sketch with A, r and D(A, r)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_profile_map)

    p = sub.add_parser("report", help="render CSV / SVG from a saved JSON report")
    p.add_argument("report")
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.add_argument("--canonical", action="store_true", help="print JSON without the timings block")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.threads is not None:
        if args.threads < 1:
            ap.error("--threads must be positive")
        os.environ["HEISCHAR_THREADS"] = str(args.threads)
    try:
        return args.func(args)
    except HeisError as exc:
        print(f"heischar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"heischar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
