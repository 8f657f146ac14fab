import csv
import json

import pytest

from hgeom.cli import run
from hgeom.measure import PointCloud
from hgeom.subgroups import make_subgroup


@pytest.fixture
def plane_json(tmp_path):
    path = tmp_path / "vertical-plane.json"
    path.write_text(json.dumps(make_subgroup("vertical", [[0.0, 1.0]], 1).to_json()))
    return path


@pytest.fixture
def plane_cloud(tmp_path):
    out = tmp_path / "plane.json"
    assert run(["generate", "--type", "subgroup", "--kind", "vertical", "--n", "1", "--count", "3000",
                "--seed", "1", "--out", str(out)]) == 0
    return out


def test_dist_example(plane_json, capsys):
    assert run(["dist", "--p", "[1,0,0]", "--subgroup", str(plane_json)]) == 0
    assert capsys.readouterr().out.strip() == "1.0"


def test_dist_batch_and_repr(plane_json, capsys):
    assert run(["dist", "--p", "[[0.1,0,0],[0,3,4]]", "--subgroup", str(plane_json)]) == 0
    assert capsys.readouterr().out.split() == [repr(0.1), "0.0"]


def test_generate_is_deterministic(tmp_path, plane_cloud):
    again = tmp_path / "again.json"
    run(["generate", "--type", "subgroup", "--kind", "vertical", "--n", "1", "--count", "3000",
         "--seed", "1", "--out", str(again)])
    assert again.read_bytes() == plane_cloud.read_bytes()
    cloud = PointCloud.load(plane_cloud)
    assert cloud.k_m == 3 and len(cloud) == 3000


@pytest.mark.parametrize("extra", [
    ["--type", "graph", "--family", "smooth", "--amplitude", "0.2"],
    ["--type", "ifs", "--depth", "5"],
    ["--type", "ball", "--n", "2"],
    ["--type", "subgroup", "--kind", "horizontal", "--n", "2", "--base", "[1,0,0,0,0]"],
])
def test_generate_types(tmp_path, extra):
    out = tmp_path / "c.json"
    assert run(["generate", "--count", "200", "--seed", "3", "--out", str(out)] + extra) == 0
    assert len(PointCloud.load(out)) == 200


def test_seed_env_fallback(tmp_path, monkeypatch):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    monkeypatch.setenv("HGEOM_SEED", "5")
    run(["generate", "--type", "ball", "--count", "50", "--out", str(a)])
    run(["generate", "--type", "ball", "--count", "50", "--seed", "5", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_contains(capsys):
    region = {"type": "cone", "vertex": [0, 0, 0], "axis": {"kind": "horizontal", "n": 1, "basis": [[1, 0]]}, "aperture": 0.5}
    assert run(["contains", "--p", "[[1,0,0],[0,0,1]]", "--region", json.dumps(region)]) == 0
    assert capsys.readouterr().out.split() == ["true", "false"]


def test_density_csv(tmp_path, plane_cloud):
    out = tmp_path / "d.csv"
    assert run(["density", "--cloud", str(plane_cloud), "--radii", "0.5,0.25", "--samples", "3", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["point_index", "radius", "ball_mass", "normalized"]
    assert len(rows) == 1 + 3 * 2


def test_tangent_with_config(tmp_path, plane_cloud, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"cloud": str(plane_cloud), "k": 2, "radii": [0.6, 0.45, 0.3], "samples": 3, "budget": 120}))
    out = tmp_path / "t.json"
    assert run(["tangent", "--config", str(cfg), "--out", str(out), "--seed", "2"]) == 0
    reports = json.loads(out.read_text())
    assert len(reports) == 3 and all(r["converged"] for r in reports)
    assert "3/3 converged" in capsys.readouterr().out


def test_verify_and_report(tmp_path, capsys):
    out = tmp_path / "v.json"
    code = run(["verify", "--check", "cone_inversion", "--params", '{"alpha":1,"beta":1,"s":1,"M":1}',
                "--trials", "2000", "--seed", "7", "--out", str(out)])
    assert code == 0 and json.loads(out.read_text())["violations"] == 0
    bad = tmp_path / "bad.json"
    code = run(["verify", "--check", "projection_sandwich", "--params", '{"c": 1.5}', "--trials", "500", "--out", str(bad)])
    assert code == 1
    csv_out = tmp_path / "r.csv"
    assert run(["report", str(out), str(bad), "--out", str(csv_out)]) == 1
    rows = list(csv.reader(csv_out.open()))
    assert [r[0] for r in rows[1:]] == ["cone_inversion", "projection_sandwich"]
    assert run(["report", str(out)]) == 0


def test_usage_errors(tmp_path, capsys):
    assert run(["bogus"]) == 2
    assert run([]) == 2
    assert run(["dist", "--p", "[1,0,0]"]) == 2
    assert run(["dist", "--p", "[1,0", "--subgroup", "{}"]) == 2
    assert run(["verify", "--check", "two_cone_covering"]) == 2
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"nonsense": 1}))
    assert run(["dist", "--config", str(cfg), "--p", "[1,0,0]"]) == 2
