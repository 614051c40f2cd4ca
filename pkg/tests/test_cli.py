import csv
import json
import subprocess
import sys

import pytest

from bethe_qes.cli import main, table_rows

from conftest import G_VALUES


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def parse_csv(text):
    lines = text.splitlines()
    assert lines[0] == "# bethe-qes v1"
    return list(csv.DictReader(lines[1:]))


def test_table_reproduces_golden(capsys, table1):
    code, out = run(capsys, "table", "--format", "csv", "--paper-precision")
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 60
    for row in rows:
        key = (int(row["n"]), int(row["kappa"]), float(row["g"]))
        assert f"{table1[key]:.7f}" == row["beta_n"]


def test_table_full_precision_round_trip(capsys):
    _, out = run(capsys, "table", "--format", "csv")
    rows = parse_csv(out)
    for row, ref in zip(rows, table_rows()):
        assert float(row["beta_n"]) == ref[3]
        assert float(row["E_n"]) == ref[4]


def test_table_formats(capsys):
    _, out = run(capsys, "table", "--format", "json", "--n-max", "0", "--kappa-max", "1")
    doc = json.loads(out)
    assert doc["schema"] == 1 and len(doc["rows"]) == len(G_VALUES)
    _, out = run(capsys, "table", "--n-max", "0", "--kappa-max", "1", "--g-list", "1/2")
    assert out.startswith("# bethe-qes v1\n")
    assert "0.7779142" in out


def test_output_is_deterministic(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["table", "--format", "csv", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_energy(capsys):
    code, out = run(capsys, "energy", "--g", "2", "--n", "0", "--kappa", "3")
    doc = json.loads(out)
    assert code == 0 and doc["roots"][0]["beta_n"] == pytest.approx(1.0, abs=1e-13)


def test_state_exact(capsys):
    code, out = run(capsys, "state", "--omega", "1", "--a2", "1/2", "--g", "2", "--n", "0", "--kappa", "1")
    doc = json.loads(out)
    assert code == 0 and doc["pass"]
    (sol,) = doc["solutions"]
    assert sol["beta"] == pytest.approx(6.0, abs=1e-12)
    assert sol["c_ps"] == pytest.approx(-257 / 6, abs=1e-11)
    assert sol["E"] == pytest.approx(-35 / 6, abs=1e-11)


def test_state_without_solution_exits_2(capsys):
    code, out = run(capsys, "state", "--a2", "1/2", "--g", "1", "--n", "0", "--kappa", "1")
    doc = json.loads(out)
    assert code == 2 and "error" in doc


def test_state_n1_reports_branches(capsys):
    code, out = run(capsys, "state", "--a2", "1/2", "--g", "2", "--n", "1", "--kappa", "2")
    doc = json.loads(out)
    assert code == 0
    for sol in doc["solutions"]:
        assert sum(b["matches_solved_root"] for b in sol["t1_branches"]) == 1
        assert sol["sextic_relative_residual_derived"] < 1e-10


def test_verify(capsys):
    code, out = run(capsys, "verify", "--a2", "1/2", "--g", "2", "--n", "0", "--kappa", "1")
    doc = json.loads(out)
    assert code == 0
    assert doc["solutions"][0]["checks"]["fd_oracle"] == "PASS"


def test_bethe_n1(capsys):
    code, out = run(capsys, "bethe", "--a2", "1/2", "--g", "2", "--kappa", "1", "--beta", "1", "--n", "1")
    doc = json.loads(out)
    assert code == 0 and doc["checks"]["determinant_n1"] == "PASS"
    code, out = run(capsys, "bethe", "--p2", "1", "--p1", "-1", "--p0", "0", "--q2", "-1",
                    "--q1", "3", "--q0", "-1", "--n", "2")
    assert code == 0 and json.loads(out)["checks"]["closure"] == "PASS"


def test_sl2(capsys):
    code, out = run(capsys, "sl2", "--n", "4")
    assert code == 0
    assert "hamiltonian identity: PASS (max entry diff 0.0e0)" in out
    assert "FAIL" not in out


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "bethe_qes.cli", "sl2", "--n", "1", "--format", "json"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["pass"] is True
