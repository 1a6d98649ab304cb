import csv
import io
import json
import subprocess
import sys

import pytest

from ising_exact.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_help_exits_zero():
    proc = subprocess.run([sys.executable, "-m", "ising_exact.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "usage" in proc.stdout


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["qseries", "verify", "--identity", "rr1", "--order", "5", "--bogus"])
    assert exc.value.code == 64


def test_empty_suite_name_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["suite", "--name", ""])
    assert exc.value.code == 64


def test_identity_verification(capsys):
    code, out, _ = run(capsys, "qseries", "verify", "--identity", "rr1", "--order", "200")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert doc["config"]["order"] == 200
    assert doc["provenance"]["module"] == "qseries"


def test_nickel_csv(capsys):
    code, out, _ = run(capsys, "chi", "nickel", "--n", "6")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# config:")
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    ws = {round(float(r["w"]), 9) for r in rows}
    assert {1.0, -1.0, round(1 / 3, 9), round(-1 / 3, 9)} <= ws


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "thermo", "--T", "-1")
    assert code == 64 and "temperature" in err


def test_series_output_is_exact(capsys):
    code, out, _ = run(capsys, "corr", "--kind", "diag", "--N", "1", "--T", "2.0", "--series", "--order", "4")
    doc = json.loads(out)
    assert code == 0 and doc["coefficients"] == ["1", "-1/4", "-3/64", "-5/256"]


def test_thermo_fields(capsys):
    code, out, _ = run(capsys, "thermo", "--T", "2.0")
    doc = json.loads(out)
    assert code == 0
    assert {"free_energy", "magnetization", "internal_energy", "provenance"} <= set(doc)


def test_hirota_records(tmp_path, capsys):
    path = tmp_path / "grid.json"
    code, _, _ = run(capsys, "hirota", "propagate", "--nmax", "4", "--out", str(path))
    doc = json.loads(path.read_text())
    assert code == 0
    assert set(doc["rows"][0]) == {"M", "N", "value", "provenance"}
    assert isinstance(doc["rows"][0]["value"], str)


def test_seeded_output_is_reproducible(capsys):
    argv = ("chi", "constants", "--n", "3", "--method", "rqmc", "--budget", "1024", "--seed", "5")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_leeyang(capsys):
    code, out, _ = run(capsys, "leeyang", "--L", "3")
    assert code == 0 and json.loads(out)["max_deviation"] < 1e-10


def test_quick_suite_bundle(tmp_path, capsys):
    path = tmp_path / "bundle.json"
    code, _, err = run(capsys, "suite", "--name", "quick", "--out", str(path))
    doc = json.loads(path.read_text())
    assert code == 0 and doc["passed"]
    assert "[PASS]" in err
