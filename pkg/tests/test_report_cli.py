import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from heischar.characteristic import ScanConfig, certify_convex, scan
from heischar.cli import main
from heischar.domains import disc, koranyi_ball, make_torus
from heischar.errors import HeisError
from heischar.report import CSV_COLUMNS, canonical, load_json, report_dict, write_csv, write_json
from heischar.svg import emit_svg_heatmap, emit_svg_profile
from heischar.convex import make_convex


@pytest.fixture(scope="module")
def torus_report():
    T = make_torus(disc(1, 2, 1))
    return scan(T, ScanConfig(mesh=(64, 16))), certify_convex(T, 500)


def test_report_json_shape(torus_report, tmp_path):
    rep, cert = torus_report
    doc = report_dict(rep, cert, seed=7)
    for key in ("schema_version", "domain", "mesh", "tolerances", "global_min_m", "characteristic", "suspect",
                "certificate", "timings", "seed"):
        assert key in doc
    assert doc["schema_version"] == 1 and doc["seed"] == 7
    assert doc["certificate"]["status"] == "PASS"
    assert "timestamp" in doc["timings"]
    path = write_json(doc, tmp_path / "r.json")
    again = load_json(path)
    assert canonical(again) == canonical(doc)
    assert len(again["samples"]["m"]) == 64 * 16


def test_report_canonical_is_deterministic(torus_report):
    rep, _ = torus_report
    T = make_torus(disc(1, 2, 1))
    other = scan(T, ScanConfig(mesh=(64, 16)))
    assert canonical(report_dict(rep)) == canonical(report_dict(other))
    assert "timings" not in report_dict(rep, include_timings=False)


def test_load_json_rejects_other_schema(tmp_path):
    (tmp_path / "x.json").write_text(json.dumps({"schema_version": 2}))
    with pytest.raises(HeisError):
        load_json(tmp_path / "x.json")
    with pytest.raises(HeisError):
        load_json(tmp_path / "missing.json")


def test_csv_rows(torus_report, tmp_path):
    rep, _ = torus_report
    path = write_csv(report_dict(rep), tmp_path / "r.csv")
    rows = list(csv.reader(path.open()))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 1 + 64 * 16
    m = np.array([float(r[-1]) for r in rows[1:]])
    assert m.min() > 0.22
    with pytest.raises(HeisError):
        write_csv(report_dict(rep, include_samples=False), tmp_path / "none.csv")


def test_svg_heatmap(torus_report, tmp_path):
    rep, _ = torus_report
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    emit_svg_heatmap(rep, a)
    emit_svg_heatmap(report_dict(rep), b)
    text = a.read_text()
    assert text.startswith("<svg") or text.startswith("<?xml")
    assert "zero-level" not in text
    assert a.read_bytes() == b.read_bytes()
    emit_svg_heatmap(rep, b)
    assert a.read_bytes() == b.read_bytes()


def test_svg_heatmap_rejects_box_scan(tmp_path):
    rep = scan(koranyi_ball(), ScanConfig(grid=16))
    with pytest.raises(HeisError):
        emit_svg_heatmap(rep, tmp_path / "k.svg")


def test_svg_profile(tmp_path):
    path = tmp_path / "p.svg"
    emit_svg_profile(make_convex(disc(1, 2, 1)), path)
    assert "<circle" in path.read_text()


# -- command line ----------------------------------------------------------------------


def test_cli_scan_koranyi(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["scan", "--domain", "koranyi-ball", "--radius", "1", "--grid", "64", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["characteristic"]) == 2
    assert "2 characteristic point(s) found" in capsys.readouterr().out


def test_cli_certify_exit_codes(capsys):
    assert main(["certify", "--profile", "disc", "--center", "1,2", "--radius", "1", "--samples", "10000"]) == 0
    assert "PASS" in capsys.readouterr().out
    assert main(["certify", "--profile", "disc", "--center", "1,0.5", "--radius", "1"]) == 1
    assert "axis" in capsys.readouterr().err
    assert main(["certify", "--profile", "crescent", "--center", "0,3"]) == 1


def test_cli_certify_fail_exit_code(capsys):
    # a rank tolerance above every sine forces a FAIL verdict
    assert main(["certify", "--samples", "100", "--rank-tol", "2"]) == 2
    assert "FAIL" in capsys.readouterr().out


def test_cli_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--domain", "moebius"])
    assert exc.value.code == 1
    assert main(["scan", "--mesh", "4x64"]) == 1
    assert main(["scan", "--mesh", "bogus"]) == 1
    assert main(["scan", "--mesh", "16x8", "--out", str(tmp_path / "no" / "dir" / "r.json")]) == 1
    assert main(["map"]) == 1
    assert main(["map", "--point", "0,0,1"]) == 1


def test_cli_map(capsys):
    assert main(["map", "--point", "1,0,4", "--vector", "0,0,1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["w"] == [4.0, 1.0] and out["u"] == [1.0, 0.0] and out["dw"] == [1.0, 0.0]
    assert main(["map", "--w", "0,4", "--u", "0,1"]) == 0
    assert json.loads(capsys.readouterr().out)["point"] == [0.0, 2.0, 0.0]
    assert main(["map", "--random", "1000"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["max_roundtrip_error"] <= 1e-12 and out["min_singular_value"] > 0


def test_cli_profile_map(tmp_path, capsys):
    svg = tmp_path / "p.svg"
    assert main(["profile-map", "--profile", "disc", "--center", "1,2", "--radius", "1", "--anchor", "1,2",
                 "--disc-radius", "0.5", "--point", "1.5,2", "--random", "200", "--svg", str(svg)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert np.allclose(out["output"], [[1.25, 2]], atol=1e-12)
    assert out["random_check"]["max_roundtrip_error"] <= 1e-9
    assert svg.exists()


def test_cli_expression_profile(tmp_path, capsys):
    data = {"expression": "(x - a1)^2 + (y - a2)^2 - r^2", "constants": {"a1": 1, "a2": 2, "r": 1},
            "interior": [1, 2], "box": [[-1, 3], [0, 4]]}
    f = tmp_path / "p.json"
    f.write_text(json.dumps(data))
    assert main(["certify", "--profile-file", str(f), "--samples", "500"]) == 0
    assert main(["certify", "--profile", "expr"]) == 1


def test_cli_scan_torus_artifacts_and_report(tmp_path, capsys):
    out, csv_path, svg = tmp_path / "t.json", tmp_path / "t.csv", tmp_path / "t.svg"
    assert main(["scan", "--domain", "torus", "--mesh", "32x8", "--certify", "--samples", "200",
                 "--out", str(out), "--csv", str(csv_path), "--svg", str(svg)]) == 0
    assert "certificate: PASS" in capsys.readouterr().out
    svg2, csv2 = tmp_path / "u.svg", tmp_path / "u.csv"
    assert main(["report", str(out), "--svg", str(svg2), "--csv", str(csv2)]) == 0
    assert svg.read_bytes() == svg2.read_bytes()
    assert csv_path.read_bytes() == csv2.read_bytes()
    kout = tmp_path / "k.json"
    assert main(["scan", "--domain", "koranyi-ball", "--grid", "16", "--out", str(kout)]) == 0
    assert main(["report", str(kout), "--svg", str(tmp_path / "k.svg")]) == 1


def test_cli_reproducible_json(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["scan", "--mesh", "32x8", "--seed", "3", "--no-timings", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "heischar", "map", "--point", "0,2,0"], capture_output=True,
                         text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["u"] == [0.0, 1.0]
