import json
import os
import shutil
import subprocess
import sys

import pytest

from fixerlab.cli import main, parse_int_list, parse_q_list
from fixerlab.ffield import data_path


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_lists():
    assert parse_int_list("5-7,9") == [5, 6, 7, 9]
    assert parse_q_list("4-9") == [4, 5, 7, 8, 9]
    with pytest.raises(Exception):
        parse_q_list("6")


def test_rho_equality_certificate(capsys):
    code, out = run(capsys, "rho", "A5:S3", "--format", "json")
    assert code == 0
    (v,) = json.loads(out.out)["verdicts"]
    assert (v["lhs_5K2"], v["rhs_2H2n"], v["relation"], v["best_order"]) == (720, 720, "=", 12)


def test_sporadic_row(capsys):
    code, out = run(capsys, "sporadic", "M11:GL2(3):M9.2", "--format", "json")
    assert code == 0
    (v,) = json.loads(out.out)["verdicts"]
    assert v["by_classes"] is True and v["on_cosets"] is True


def test_failing_verdict_sets_exit_code(capsys):
    code, out = run(capsys, "sporadic", "M12:PSL2(11):M11")
    assert code == 1
    assert "0/1 checks passed" in out.out


def test_unknown_subgroup_is_an_error(capsys):
    code, out = run(capsys, "sporadic", "M11:nope:M10")
    assert code == 2 and "nope" in out.err


def test_alt_scan_and_spiga(capsys):
    assert run(capsys, "alt-scan", "--n", "5-6")[0] == 0
    code, out = run(capsys, "spiga", "--q", "8,11", "--format", "json")
    rep = json.loads(out.out)
    assert code == 0
    assert [v["verdict"] for v in rep["verdicts"]] == ["character-difference", "equal"]


def test_reports_are_byte_identical(capsys):
    a = run(capsys, "table-psl2", "--q", "5,7", "--format", "json")[1].out
    b = run(capsys, "table-psl2", "--q", "5,7", "--format", "json", "--threads", "3")[1].out
    assert a == b
    assert "seconds" not in a


def test_timing_only_on_request(capsys):
    out = run(capsys, "verify-gamma", "--q", "4", "--format", "json", "--timing")[1].out
    rep = json.loads(out)
    assert "seconds" in rep["display"]
    assert all("seconds" not in v for v in rep["verdicts"])


def test_fixture_directory_override(tmp_path, capsys, monkeypatch):
    table = json.loads(data_path("psl2_large_fixers.json").read_text())
    for row in table:
        if row["group"] == "PSL2(7)" and row["expected"]:
            row["expected"] = ["A4"]
    (tmp_path / "psl2_large_fixers.json").write_text(json.dumps(table))
    monkeypatch.delenv("FIXERLAB_DATA", raising=False)
    code, _ = run(capsys, "table-psl2", "--q", "7", "--outer", "", "--fixtures", str(tmp_path))
    assert code == 1
    assert "FIXERLAB_DATA" not in os.environ
    assert run(capsys, "table-psl2", "--q", "7", "--outer", "")[0] == 0


def test_console_script():
    exe = shutil.which("fixerlab")
    cmd = [exe] if exe else [sys.executable, "-m", "fixerlab.cli"]
    p = subprocess.run(cmd + ["rho", "S6:S5"], capture_output=True, text=True)
    assert p.returncode == 0 and "1/1 checks passed" in p.stdout
