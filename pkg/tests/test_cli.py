import json
import subprocess
import sys

import pytest

from polytc import cli
from polytc.corpus import K1_FACES, K2_FACES
from polytc.errors import CertificateError


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(p)


@pytest.fixture
def k1(tmp_path):
    return write(tmp_path, "k1.json", {"n": 4, "dims": [1, 1, 1, 1], "maximal_faces": K1_FACES,
                                       "name": "K1"})


@pytest.fixture
def s2(tmp_path):
    return write(tmp_path, "s2.json", {"n": 1, "dims": [2], "maximal_faces": [[1]]})


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_tc_reference_values(tmp_path, k1, capsys):
    code, out, _ = run(["tc", "--spec", k1, "--s", "3"], capsys)
    assert code == 0 and out.splitlines()[0] == "6"
    k2 = write(tmp_path, "k2.json", {"n": 4, "dims": [3, 3, 3, 3], "maximal_faces": K2_FACES})
    code, out, _ = run(["tc", "--spec", k2, "--s", "3"], capsys)
    assert out.splitlines()[0] == "5"


def test_tc_json_schema(k1, capsys):
    code, out, _ = run(["tc", "--spec", k1, "--s", "3", "--json"], capsys)
    data = json.loads(out)
    assert data == {"value": 6, "witness": [[1, 2], [1, 2], [3, 4]]}


@pytest.mark.parametrize("payload", [
    {"n": 2, "dims": [1, 1], "maximal_faces": [[1, 3]]},
    {"n": 2, "dims": [1, 0], "maximal_faces": [[1]]},
    {"n": 2, "maximal_faces": [[1]]},
    [1, 2],
    "{not json",
])
def test_bad_specs_exit_2(tmp_path, payload, capsys):
    path = write(tmp_path, "bad.json", payload)
    code, _, err = run(["tc", "--spec", path, "--s", "2"], capsys)
    assert code == 2 and err.startswith("error:")


def test_missing_file_and_bad_s_exit_2(tmp_path, s2, capsys):
    assert run(["tc", "--spec", str(tmp_path / "nope.json"), "--s", "2"], capsys)[0] == 2
    assert run(["tc", "--spec", s2, "--s", "1"], capsys)[0] == 2


def test_zcl_certificates(tmp_path, s2, capsys):
    wedge = write(tmp_path, "w.json", {"n": 2, "dims": [1, 1], "maximal_faces": [[1], [2]]})
    code, out, _ = run(["zcl", "--spec", wedge, "--s", "2"], capsys)
    assert code == 0 and json.loads(out)["count"] == 2
    target = tmp_path / "cert.json"
    code, out, _ = run(["zcl", "--spec", s2, "--s", "3", "--out", str(target)], capsys)
    assert code == 0 and json.loads(target.read_text())["count"] == 3
    empty = write(tmp_path, "e.json", {"n": 2, "dims": [1, 2], "maximal_faces": []})
    code, out, _ = run(["zcl", "--spec", empty, "--s", "2"], capsys)
    assert json.loads(out)["factors"] == [] and json.loads(out)["count"] == 0


def test_zcl_certificate_failure_exit_3(s2, capsys, monkeypatch):
    def broken(spec, s):
        raise CertificateError("product vanished")

    monkeypatch.setattr(cli, "certificate_for", broken)
    code, _, err = run(["zcl", "--spec", s2, "--s", "2"], capsys)
    assert code == 3 and "product vanished" in err


def test_plan_base_point(tmp_path, s2, capsys):
    config = write(tmp_path, "c.json", {"columns": [[[1, 0, 0]], [[1, 0, 0]]]})
    trace = tmp_path / "t.csv"
    code, out, _ = run(["plan", "--spec", s2, "--s", "2", "--config", config, "--grid", "8",
                        "--out", str(trace)], capsys)
    summary = json.loads(out)
    assert code == 0 and summary["domain_index"] == 0
    lines = trace.read_text().splitlines()
    assert len(lines) == 9
    assert {line.split(",", 1)[1] for line in lines[1:]} == {"1.0,0.0,0.0,1.0,0.0,0.0"}


def test_plan_antipodal_pairs(tmp_path, s2, capsys):
    s1 = write(tmp_path, "s1.json", {"n": 1, "dims": [1], "maximal_faces": [[1]]})
    config = write(tmp_path, "c1.json", {"columns": [[[0, 1]], [[0, -1]]]})
    code, out, _ = run(["plan", "--spec", s1, "--s", "2", "--config", config], capsys)
    assert json.loads(out)["domain_index"] == 0
    assert json.loads(out)["rules"] == [["geodesic", "semicircle_nu"]]
    config = write(tmp_path, "c2.json", {"columns": [[[0, 0.6, 0.8]], [[0, -0.6, -0.8]]]})
    code, out, _ = run(["plan", "--spec", s2, "--s", "2", "--config", config], capsys)
    assert code == 0 and json.loads(out)["domain_index"] == 1


def test_plan_errors(tmp_path, s2, capsys):
    near = write(tmp_path, "near.json", {"columns": [[[1, 0, 0]], [[1 - 1.25e-17, 5e-9, 0]]]})
    assert run(["plan", "--spec", s2, "--s", "2", "--config", near], capsys)[0] == 4
    wrong_s = write(tmp_path, "ws.json", {"columns": [[[1, 0, 0]]]})
    assert run(["plan", "--spec", s2, "--s", "2", "--config", wrong_s], capsys)[0] == 2
    not_unit = write(tmp_path, "nu.json", {"columns": [[[2, 0, 0]], [[1, 0, 0]]]})
    assert run(["plan", "--spec", s2, "--s", "2", "--config", not_unit], capsys)[0] == 2


def test_verify(tmp_path, s2, capsys):
    argv = ["verify", "--spec", s2, "--s", "2", "--trials", "30", "--seed", "4"]
    code, out, _ = run(argv, capsys)
    assert code == 0 and json.loads(out)["passed"]
    assert run(argv, capsys)[1] == out
    code, out, _ = run(["verify", "--spec", s2, "--s", "2", "--trials", "0"], capsys)
    assert code == 0 and json.loads(out)["failures"] == []


def test_verify_failure_exit_5(s2, capsys, monkeypatch):
    from polytc import harness

    real = harness.verify_planner

    def failing(*a, **kw):
        rep = real(*a, **kw)
        rep.fail("endpoints", "injected")
        return rep

    monkeypatch.setattr(harness, "verify_planner", failing)
    assert run(["verify", "--spec", s2, "--s", "2", "--trials", "2"], capsys)[0] == 5


def test_examples_table(capsys):
    code, out, _ = run(["examples"], capsys)
    lines = out.splitlines()
    assert code == 0
    assert "FAIL" not in out
    row = next(line for line in lines if line.startswith("TC_3 of the path-shaped index"))
    assert row.split()[-3:] == ["6", "6", "PASS"]
    assert any(line.startswith("skeleton n=6 d=3 s=5") for line in lines)
    assert any(line.startswith("two simplices c1=5 c2=4 s=5") for line in lines)


def test_module_entry_point(s2):
    proc = subprocess.run([sys.executable, "-m", "polytc", "tc", "--spec", s2, "--s", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "3"
