import io
import json
import subprocess
import sys

import pytest

from homdim import cli
from homdim.verification import CheckResult


def run(args):
    buf = io.StringIO()
    code = cli.main(args, out=buf)
    return code, buf.getvalue()


def run_json(args):
    code, text = run(args + ["--format", "json"])
    return code, json.loads(text) if text else None


@pytest.fixture
def ring(data_dir):
    return lambda name: str(data_dir / f"{name}.json")


def test_ring_info(ring):
    code, rep = run_json(["ring-info", "--ring", ring("hypersurface")])
    assert code == 0
    assert rep["complete_intersection"] and rep["artinian"] and rep["depth"] == 0
    code, rep = run_json(["ring-info", "--ring", ring("square_zero")])
    assert not rep["complete_intersection"]


def test_betti_and_resolve(ring, data_dir):
    code, rep = run_json(["betti", "--ring", ring("square_zero"), "--cutoff", "5"])
    assert code == 0 and rep["betti"] == {str(n): 2 ** n for n in range(6)}
    code, rep = run_json(["resolve", "--ring", ring("square_zero"),
                          "--object", str(data_dir / "example_complex.json"), "--cutoff", "4"])
    assert code == 0 and rep["minimal"]
    assert rep["betti"] == {"0": 1, "1": 1}
    code, text = run(["resolve", "--ring", ring("plane")])
    assert code == 0 and "table:" in text


def test_homology(ring, data_dir):
    obj = str(data_dir / "example_complex.json")
    code, rep = run_json(["homology", "--ring", ring("square_zero"), "--object", obj])
    assert code == 0
    assert rep["homology"]["0"] == {"0": 1, "1": 1}
    assert rep["homology"]["1"] == {"2": 2}
    code, rep = run_json(["homology", "--ring", ring("square_zero"), "--object", obj,
                          "--degree", "1"])
    assert list(rep["homology"]) == ["1"]


def test_dimension_commands(ring):
    h = ring("hypersurface")
    assert run_json(["pd", "--ring", ring("plane")])[1]["pd"] == "2"
    assert run_json(["gdim", "--ring", h])[1]["gdim"] == "0"
    assert run_json(["pcidim", "--ring", h])[1]["pcidim"] == "0"
    assert run_json(["depth", "--ring", ring("plane")])[1]["depth"] == 0
    rep = run_json(["poincare", "--ring", h, "--cutoff", "9"])[1]
    assert rep["complexity"] == "exactly 1"
    rep = run_json(["poincare", "--ring", h, "--cutoff", "3"])[1]
    assert rep["complexity"] == "window too small"
    code, rep = run_json(["gdim", "--ring", ring("square_zero"), "--cutoff", "4"])
    assert code == 0 and rep["gdim"] == ">= 4"


def test_cidim_and_hierarchy(ring, data_dir):
    h = ring("hypersurface")
    code, rep = run_json(["cidim-bound", "--ring", h, "--deformations",
                          str(data_dir / "hypersurface_deformation.json")])
    assert code == 0 and rep["cidim_bound"] == "0"
    code, rep = run_json(["hierarchy", "--ring", ring("plane")])
    assert code == 0 and rep["violations"] == []


def test_json_is_deterministic(ring):
    args = ["betti", "--ring", ring("hypersurface"), "--format", "json"]
    assert run(args) == run(args)


def test_usage_errors(ring, capsys):
    assert run(["bogus"])[0] == 1
    assert run(["betti"])[0] == 1
    assert run(["betti", "--ring", ring("plane"), "--cutoff", "-1"])[0] == 1
    assert run(["betti", "--ring", "/nonexistent/ring.json"])[0] == 1
    assert run(["verify", "--suite", "other"])[0] == 1


def test_parse_errors(tmp_path, ring, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"variables": ["x"],\n "relations": ["x^"]}')
    assert run(["betti", "--ring", str(bad)])[0] == 2
    err = capsys.readouterr().err
    assert "parse error" in err and "2" in err
    bad.write_text("{not json")
    assert run(["betti", "--ring", str(bad)])[0] == 2
    obj = tmp_path / "obj.json"
    obj.write_text(json.dumps({"terms": [{"degree": 0, "generators": [0]},
                                         {"degree": 1, "generators": [0]}],
                               "differentials": [{"degree": 1, "matrix": [["s"]]}]}))
    assert run(["betti", "--ring", ring("square_zero"), "--object", str(obj)])[0] == 2
    reg = tmp_path / "reg.json"
    reg.write_text(json.dumps([{"ambient_vars": ["x"], "regular_sequence": ["x^3"]}]))
    assert run(["cidim-bound", "--ring", ring("hypersurface"), "--deformations", str(reg)])[0] == 2


def test_verify_exit_codes(monkeypatch):
    import homdim.verification as ver
    monkeypatch.setattr(ver, "run_suite",
                        lambda seed=None: [CheckResult("x", True, {}, 0.0)])
    assert run(["verify"])[0] == 0
    monkeypatch.setattr(ver, "run_suite",
                        lambda seed=None: [CheckResult("x", False, {}, 0.0)])
    code, rep = run_json(["verify"])
    assert code == 3 and rep["results"] == {"x": "FAIL"}


def test_entry_point(ring):
    proc = subprocess.run([sys.executable, "-m", "homdim.cli", "ring-info", "--ring",
                           ring("plane"), "--format", "json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["relations"] == []
