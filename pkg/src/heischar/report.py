"""JSON and CSV serialisation of characteristic reports.

The JSON document is the source of truth; CSV and SVG outputs are rendered from
the JSON dictionary, so they can also be produced from a saved report.  Only the
``timings`` block (which carries the timestamp) varies between identical runs.
"""

from __future__ import annotations

import csv
import json
import math
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .characteristic import CharacteristicReport, ConvexCertificate
from .errors import HeisError

SCHEMA_VERSION = 1
CSV_COLUMNS = ("s", "theta", "x", "y", "t", "psi", "grad_norm", "hgrad_norm", "m")


def to_plain(obj):
    """Convert numpy containers to plain Python; non-finite floats become None."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def _sample_columns(samples: dict | None) -> dict | None:
    if samples is None:
        return None
    P = np.asarray(samples["points"])
    st = samples.get("st")
    n = len(P)
    cols = {
        "s": st[:, 0] if st is not None else [None] * n,
        "theta": st[:, 1] if st is not None else [None] * n,
        "x": P[:, 0], "y": P[:, 1], "t": P[:, 2],
        "psi": samples["psi"], "grad_norm": samples["grad_norm"],
        "hgrad_norm": samples["hgrad_norm"], "m": samples["m"],
    }
    return cols


def report_dict(report: CharacteristicReport, certificate: ConvexCertificate | None = None,
                include_samples: bool = True, include_timings: bool = True, seed: int | None = None) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "domain": report.domain,
        "mesh": report.mesh,
        "tolerances": report.tolerances,
        "seed": seed,
        "verdict": report.verdict,
        "global_min_m": report.global_min_m,
        "global_min_hgrad": report.global_min_hgrad,
        "characteristic": report.characteristic,
        "suspect": report.suspect,
        "violations": report.violations,
        "notes": report.notes,
    }
    if certificate is not None:
        out["certificate"] = certificate.to_dict()
    elif report.certificate is not None:
        out["certificate"] = report.certificate
    if include_samples:
        out["samples"] = _sample_columns(report.samples)
    if include_timings:
        out["timings"] = {**report.timings, "timestamp": datetime.now(timezone.utc).isoformat()}
    return to_plain(out)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def canonical(doc: dict) -> str:
    """Serialisation with the timings block removed, for reproducibility checks."""
    return dumps({k: v for k, v in doc.items() if k != "timings"})


def write_json(doc: dict, path) -> Path:
    path = Path(path)
    try:
        path.write_text(dumps(doc))
    except OSError as exc:
        raise HeisError(f"cannot write {path}: {exc}") from exc
    return path


def load_json(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise HeisError(f"cannot read report {path}: {exc}") from exc
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise HeisError(f"unsupported report schema {doc.get('schema_version')!r}")
    return doc


def write_csv(doc: dict, path) -> Path:
    cols = doc.get("samples")
    if not cols:
        raise HeisError("report has no samples to export")
    path = Path(path)
    n = len(cols["x"])
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for i in range(n):
                w.writerow(["" if cols[c][i] is None else repr(cols[c][i]) for c in CSV_COLUMNS])
    except OSError as exc:
        raise HeisError(f"cannot write {path}: {exc}") from exc
    return path
