import json
import subprocess
import sys

import pytest

from conftest import build_incomplete_protocol
from wotsim.cli import main
from wotsim.protocol import spec_to_dict


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "wotsim", *args],
        capture_output=True, text=True,
    )
    return proc.returncode, proc.stdout, proc.stderr


def test_analyze_cks(capsys):
    code = main(["analyze", "cks"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["alice_bound"] == pytest.approx(0.5, abs=1e-9)
    assert payload["bob_bound"] == pytest.approx(0.75, abs=1e-6)
    assert set(payload) == {
        "spec_name", "delta", "f", "alice_bound", "bob_bound",
        "bob_sim_s0", "bob_sim_s1", "theorem1_lhs",
    }


def test_analyze_trivial(capsys):
    code = main(["analyze", "trivial"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["alice_bound"] == pytest.approx(1.0, abs=1e-9)
    assert payload["bob_bound"] == pytest.approx(0.5, abs=1e-9)


def test_analyze_csv_format(capsys):
    code = main(["analyze", "trivial", "--format", "csv"])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0].split(",")[0] == "alice_bound"
    assert len(out) == 2


def test_analyze_json_file(tmp_path, capsys):
    from wotsim.catalog import build_cks

    path = tmp_path / "exported.json"
    path.write_text(json.dumps(spec_to_dict(build_cks())))
    code = main(["analyze", str(path)])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["bob_bound"] == pytest.approx(0.75, abs=1e-6)


def test_analyze_missing_file():
    assert main(["analyze", "missing.json"]) == 2


def test_analyze_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["analyze", str(path)]) == 2
    path.write_text(json.dumps({"name": "x", "factors": []}))
    assert main(["analyze", str(path)]) == 2


def test_analyze_invalid_spec_exits_3(tmp_path):
    data = spec_to_dict(build_incomplete_protocol())
    path = tmp_path / "incomplete.json"
    path.write_text(json.dumps(data))
    assert main(["analyze", str(path)]) == 3

    # structurally broken: non-unitary round
    bad = spec_to_dict(build_incomplete_protocol())
    bad["rounds"][0]["matrix"][0][0] = [2.0, 0.0]
    path.write_text(json.dumps(bad))
    assert main(["analyze", str(path)]) == 3


def test_builtin_name_resolves_before_path(tmp_path, monkeypatch, capsys):
    # a file literally named "cks" in cwd must not shadow the builtin
    monkeypatch.chdir(tmp_path)
    (tmp_path / "cks").write_text("garbage")
    assert main(["analyze", "cks"]) == 0
    capsys.readouterr()


def test_curve_rows(capsys):
    code = main(["curve", "--epsilon", "0", "--points", "3"])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0] == "lambda,epsilon,p_bob,p_alice,combined"
    assert out[1] == "0,0,0.75,0.5,2"
    assert out[2] == "0.5,0,0.625,0.75,2"
    assert out[3] == "1,0,0.5,1,2"


def test_curve_epsilon_slack(capsys):
    code = main(["curve", "--epsilon", "0.04", "--points", "2"])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    for line in out[1:]:
        assert abs(float(line.split(",")[-1]) - 2.04) < 1e-12


def test_curve_rejects_single_point():
    assert main(["curve", "--points", "1"]) == 2


def test_robustness_rows(capsys):
    code = main(["robustness", "--delta-min", "0", "--delta-max", "0.05", "--steps", "6"])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0] == "delta,p3,lambda_star,max_cheat"
    first = out[1].split(",")
    assert float(first[1]) == pytest.approx(0.5)
    assert float(first[2]) == pytest.approx(1 / 3, abs=1e-9)
    assert float(first[3]) == pytest.approx(2 / 3, abs=1e-9)
    code = main(["robustness", "--delta-min", "0.01", "--delta-max", "0.01", "--steps", "1"])
    row_001 = capsys.readouterr().out.splitlines()[1].split(",")
    assert row_001[1] == "0.609498743711"  # 12 significant digits
    assert float(row_001[2]) == pytest.approx(0.2194, abs=1e-3)
    assert float(row_001[3]) == pytest.approx(0.6952, abs=1e-3)
    last = out[-1].split(",")
    assert float(last[2]) == 0.0 and float(last[3]) == 0.75


def test_robustness_oracle_column(capsys):
    code = main(["robustness", "--delta-min", "0", "--delta-max", "0.02",
                 "--steps", "2", "--oracle-grid", "60"])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0].endswith(",oracle_p3")
    for line in out[1:]:
        vals = line.split(",")
        assert float(vals[4]) <= float(vals[1]) + 1e-6


def test_robustness_range_errors():
    assert main(["robustness", "--delta-min", "0.2", "--delta-max", "0.1"]) == 2
    assert main(["robustness", "--delta-min", "0", "--delta-max", "0.6"]) == 2


def test_simulate(capsys):
    code = main(["simulate", "--lambda", "0.5", "--trials", "500", "--seed", "3"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["completeness_rate"] == 1.0
    assert payload["trials"] == 500


def test_output_file(tmp_path, capsys):
    out = tmp_path / "curve.csv"
    code = main(["curve", "--points", "3", "--out", str(out)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert out.read_text().startswith("lambda,epsilon")


def test_output_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["robustness", "--steps", "5", "--out", str(a)])
    main(["robustness", "--steps", "5", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_verify_subprocess_deterministic_and_green():
    code1, out1, _ = run_cli("verify", "--seed", "7")
    code2, out2, _ = run_cli("verify", "--seed", "7")
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1.strip().endswith("OK")
    assert all(line.startswith(("PASS", "OK")) for line in out1.strip().splitlines())


def test_unknown_verb_exits_2():
    code, _, _ = run_cli("frobnicate")
    assert code == 2


def test_curve_json_format(capsys):
    code = main(["curve", "--points", "2", "--format", "json"])
    rows = json.loads(capsys.readouterr().out)
    assert code == 0
    assert rows[0]["p_bob"] == 0.75 and rows[0]["p_alice"] == 0.5


def test_robustness_json_format(capsys):
    code = main(["robustness", "--steps", "2", "--format", "json"])
    rows = json.loads(capsys.readouterr().out)
    assert code == 0
    assert rows[0]["lambda_star"] == pytest.approx(1 / 3, abs=1e-9)


def test_verify_out_file(tmp_path):
    out = tmp_path / "verify.txt"
    code = main(["verify", "--seed", "3", "--out", str(out)])
    assert code == 0
    assert out.read_text().strip().endswith("OK")
