import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from cmc1.bianchi import bicalo_grid
from cmc1.catalog import GALLERY_NAMES
from cmc1.cli import JobConfig, main
from cmc1.export import CSV_COLUMNS, REPORT_SCHEMA, read_obj, write_csv, write_obj
from cmc1.expr import parse
from cmc1.grid import Domain

SQUARE_64 = ["--f", "tau^2", "--r", "0.5:2", "--theta", "0:6.283185307", "--n", "64x64"]


def test_generate_square(tmp_path, capsys):
    out = tmp_path / "square.obj"
    assert main(["generate", *SQUARE_64, "--out", str(out)]) == 0
    verts, faces = read_obj(out)
    assert len(verts) == 4096
    assert len(faces) == 63 * 63 and all(len(f) == 4 for f in faces)
    rows = (tmp_path / "square.csv").read_text().splitlines()
    assert rows[0].split(",") == CSV_COLUMNS and len(rows) == 4097
    assert capsys.readouterr().err == ""


def test_generate_degenerate(tmp_path, capsys):
    code = main(["generate", "--f", "2*tau+1", "--out", str(tmp_path / "x.obj")])
    assert code == 3
    assert "degenerate: image is a single point (1, 0, 2)" in capsys.readouterr().err


def test_generate_parse_error(tmp_path, capsys):
    assert main(["generate", "--f", "tau +", "--out", str(tmp_path / "x.obj")]) == 2
    assert "offset 5" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["generate"],
    ["generate", "--f", "tau", "--n", "12"],
    ["generate", "--f", "tau", "--r", "2:1"],
    ["verify", "--f", "tau", "--tol-h", "-1"],
    ["verify", "--f", "tau", "--method", "other"],
    ["render"],
])
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2


def test_io_failure(tmp_path):
    out = tmp_path / "missing" / "x.obj"
    assert main(["generate", "--f", "tau^2", "--n", "8x8", "--out", str(out)]) == 4
    rep = tmp_path / "missing" / "r.json"
    assert main(["verify", "--f", "tau^2", "--n", "16x16", "--report", str(rep)]) == 4


def test_verify_both_routes(tmp_path):
    rep = tmp_path / "r.json"
    assert main(["verify", "--f", "log(tau)", "--method", "both", "--report", str(rep)]) == 0
    data = json.loads(rep.read_text())
    jsonschema.validate(data, REPORT_SCHEMA)
    checks = {c["name"]: c for c in data["checks"]}
    assert checks["route_equivalence"]["max_residual"] < 1e-9
    assert {"bianchi.mean_curvature", "small.gauss_map"} <= set(checks)
    assert data["timing_ms"] is None and data["holes"] == 0


def test_verify_tight_tolerance(tmp_path):
    rep = tmp_path / "r.json"
    assert main(["verify", "--f", "tau^2", "--tol-h", "1e-9", "--report", str(rep)]) == 5
    data = json.loads(rep.read_text())
    assert not all(c["pass"] for c in data["checks"])
    assert data["checks"][0]["tolerance"] == 1e-9


def test_verify_exp(tmp_path):
    assert main(["verify", "--f", "exp(tau)", "--report", str(tmp_path / "r.json")]) == 0


def test_verify_timing(tmp_path):
    rep = tmp_path / "r.json"
    main(["verify", "--f", "tau^2", "--n", "16x16", "--timing", "--report", str(rep)])
    assert json.loads(rep.read_text())["timing_ms"] > 0


def test_verify_degenerate(tmp_path, capsys):
    assert main(["verify", "--f", "3*tau", "--report", str(tmp_path / "r.json")]) == 3
    assert "(0, 0, 3)" in capsys.readouterr().err


def test_determinism(tmp_path):
    outputs = []
    for k in range(2):
        d = tmp_path / str(k)
        d.mkdir()
        main(["generate", "--f", "exp(tau)", "--n", "32x48", "--method", "both",
              "--out", str(d / "s.obj")])
        main(["verify", "--f", "exp(tau)", "--n", "32x48", "--method", "both",
              "--report", str(d / "r.json")])
        outputs.append([(d / name).read_bytes() for name in ("s.obj", "s.csv", "r.json")])
    assert outputs[0] == outputs[1]


def test_gallery(tmp_path):
    out = tmp_path / "gallery"
    assert main(["gallery", "--out", str(out), "--n", "32x32"]) == 0
    summary = json.loads((out / "gallery.json").read_text())
    expected = sorted(f"{n}.obj" for n in GALLERY_NAMES.values())
    assert sorted(p.name for p in out.glob("*.obj")) == expected
    entries = {e["name"]: e for e in summary["entries"]}
    cousin = entries["catenoid_cousin"]
    r = np.linspace(0.5, 2, 32)
    z_max = (8 * r**3 / (9 * r**2 + 1)).max()
    assert 0 < cousin["z_range"][0] and cousin["z_range"][1] <= z_max + 1e-12
    ruled = entries["ruled"]
    assert ruled["domain"]["theta_max"] == pytest.approx(4 * np.pi)
    theta = np.arange(64) * 4 * np.pi / 64
    assert ruled["y_range"] == pytest.approx([theta[0], theta[-1]], abs=1e-12)
    verts, _ = read_obj(out / "ruled.obj")
    assert len(verts) == 32 * 64


def test_gallery_io_failure(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["gallery", "--out", str(blocker), "--n", "8x8"]) == 4


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "cmc1", "generate", "--f", "tau +"],
                          capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 2 and "offset 5" in proc.stderr


def test_job_config_validation():
    d = Domain(0.5, 2, 0, 1, 4, 4)
    with pytest.raises(ValueError):
        JobConfig("tau", d, method="fast")
    assert JobConfig("tau", d, method="both").routes == ["bianchi", "small"]


# -- exporters ---------------------------------------------------------------------

def test_obj_round_trip(tmp_path):
    g = bicalo_grid(parse("exp(tau)"), Domain(0.5, 2, 0, 2 * np.pi, 9, 13))
    nverts, nfaces = write_obj(g, tmp_path / "e.obj")
    verts, faces = read_obj(tmp_path / "e.obj")
    assert np.array_equal(verts, g.points.reshape(-1, 3))
    assert (nverts, nfaces) == (9 * 13, 8 * 12) and len(faces) == nfaces


def test_obj_skips_holes(tmp_path):
    g = bicalo_grid(parse("tau^2"), Domain(0, 1, 0, 2 * np.pi, 4, 5))
    nverts, nfaces = write_obj(g, tmp_path / "h.obj")
    verts, faces = read_obj(tmp_path / "h.obj")
    assert nverts == len(verts) == 15
    assert nfaces == 2 * 4
    assert max(max(f) for f in faces) == 15


def test_csv_rows_skip_holes(tmp_path):
    g = bicalo_grid(parse("tau^2"), Domain(0, 1, 0, 2 * np.pi, 4, 5))
    assert write_csv([g], tmp_path / "h.csv") == g.node_count
    lines = (tmp_path / "h.csv").read_text().splitlines()
    assert len(lines) == g.node_count + 1
    first = lines[1].split(",")
    assert first[-1] == "bianchi" and float(first[2]) == pytest.approx(1 / 3)
