import json

import jsonschema
import pytest

from markoff_k3.cli import main, schema


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    data = json.loads(out)
    jsonschema.validate(data, schema())
    return code, data, out


def test_hilbert(capsys):
    code, out = run(capsys, "hilbert", "3", "-1", "2")
    assert code == 0 and out.strip() == "1/2"


def test_obstruction_f1(capsys):
    code, data, _ = run_json(capsys, "obstruction", "--family", "f1", "--ell", "1")
    assert code == 0 and data["result"]["verdict"] == "obstructed"
    assert data["result"]["surface"] == {"family": "f1", "k": -17}


def test_obstruction_inconclusive_exit_code(capsys):
    code, data, _ = run_json(capsys, "obstruction", "--family", "f3", "--ell", "10291", "--profile", "f3-pronic-3mod8")
    assert code == 2 and data["result"]["verdict"] == "inconclusive"


def test_picard(capsys):
    code, data, _ = run_json(capsys, "picard", "--verify")
    r = data["result"]
    assert code == 0 and r["determinant"] == -48
    assert r["h1_closed"] == [2, 2, 2] and r["h1_open"] == [2, 2, 2, 2]


def test_picard_dump(capsys, tmp_path):
    path = tmp_path / "m.txt"
    assert main(["picard", "--dump", str(path)]) == 0
    text = path.read_text()
    assert text.startswith("# gram\n0 2 2")


def test_frobenius(capsys):
    code, data, _ = run_json(capsys, "frobenius", "--p", "5", "--kmod", "3", "--max-n", "3")
    r = data["result"]
    assert code == 0 and r["counts"] == {"1": 42, "2": 1032, "3": 16122}
    assert r["quotient_coefficients"] == ["1", "4/5", "6/5", "4/5", "1"] and r["unity_eigenvalues"] == 18


@pytest.mark.parametrize("argv", [
    ("search", "--family", "f2", "--k", "574", "--box", "20"),
    ("search", "--family", "f1", "--k", "-17", "--height", "20"),
    ("solvable", "--family", "f1", "--k", "-17", "--bound", "50"),
    ("sa-failure", "--family", "f2", "--k", "574"),
    ("rational-bm", "--family", "f1", "--k", "-17", "--valuations=-1,-3"),
    ("census", "--family", "f1", "--max-M", "1000"),
])
def test_schema_and_determinism(capsys, argv):
    code1, _, out1 = run_json(capsys, *argv)
    code2, _, out2 = run_json(capsys, *argv)
    assert code1 == code2 == 0 and out1 == out2


def test_census_csv(capsys, tmp_path):
    path = tmp_path / "c.csv"
    code, _ = run(capsys, "census", "--family", "f1", "--max-M", "1000", "--verify-obstruction", "--out", str(path))
    assert code == 0
    assert path.read_text().splitlines() == ["family,ell,k,solvable,obstructed,inconclusive", "f1,1,-17,1,1,0",
                                             "f1,5,-401,1,1,0"]


@pytest.mark.parametrize("argv", [
    ("obstruction", "--family", "f1", "--k", "abc"),
    ("obstruction", "--family", "f1"),
    ("obstruction", "--family", "f1", "--k", "3", "--ell", "1"),
    ("nonsense",),
    ("frobenius", "--p", "5", "--max-n", "4"),
])
def test_usage_errors(capsys, argv):
    assert main(list(argv)) == 1


def test_prime_bound_env(capsys, monkeypatch):
    monkeypatch.setenv("MARKOFF_K3_PRIME_BOUND", "30")
    code, data, _ = run_json(capsys, "solvable", "--family", "f1", "--k", "-17")
    assert data["result"]["bound"] == 30
    monkeypatch.setenv("MARKOFF_K3_PRIME_BOUND", "x")
    assert main(["solvable", "--family", "f1", "--k", "-17"]) == 1
