"""Command line behaviour: commands, exit codes, parse errors, determinism."""

import json
import subprocess
import sys
from pathlib import Path

SPECS = Path(__file__).resolve().parent.parent / "specs"


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "tglab.cli", *args],
        capture_output=True,
        text=True,
    )
    return proc


def test_validate_positive():
    proc = run_cli("validate", "--spec", str(SPECS / "p1_o2.json"))
    assert proc.returncode == 0
    assert "passed: True" in proc.stdout


def test_validate_negative_bundle():
    proc = run_cli("validate", "--spec", str(SPECS / "p1_o_minus1.json"))
    assert proc.returncode == 1
    assert "passed: False" in proc.stdout


def test_parse_error_exit_code():
    bad = SPECS / "broken.json"
    bad.write_text("{ not json", encoding="utf-8")
    try:
        proc = run_cli("validate", "--spec", str(bad))
        assert proc.returncode == 2
        assert "parse error" in proc.stderr
    finally:
        bad.unlink()


def test_missing_file_exit_code():
    proc = run_cli("validate", "--spec", str(SPECS / "no_such.json"))
    assert proc.returncode == 2


def test_construct_json_schema():
    proc = run_cli("construct", "--spec", str(SPECS / "p1_o2.json"), "--json")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["schema"] == 1
    res = report["results"]
    assert res["A_prime"] == [[1, -1, 0], [2, 0, 1]]
    assert res["nef_cones_agree"] is True
    assert res["nef_pullback_identity"] is True
    assert res["w_set_convex"] is True


def test_semigroup_f3_reports_saturated():
    """The pinned representative d=(1,1,1,1) has a normal doubled semigroup
    (see the acceptance suite for the discussion)."""
    proc = run_cli("semigroup", "--spec", str(SPECS / "f3_minus_k.json"), "--json")
    report = json.loads(proc.stdout)
    assert report["results"]["saturated_up_to_bound"] is True


def test_gkz_qdm_p2():
    proc = run_cli(
        "gkz", "--spec", str(SPECS / "p2.json"), "--gkz-variant", "qdm", "--json"
    )
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    ops = report["results"]["operators"]
    # (z q d/dq)^3 - q: four exported terms
    assert len(ops[0]) == 4
    assert {"coeff": "-1/1", "lambda": [1], "partial": [0], "thetaz": 0, "z": 0} in ops[0]


def test_gkz_hat_reports_fl_matches():
    proc = run_cli(
        "gkz", "--spec", str(SPECS / "p1_o2.json"), "--gkz-variant", "hat", "--json"
    )
    report = json.loads(proc.stdout)
    assert report["results"]["passed"] is True
    assert all(r["matches"] for r in report["results"]["fl_matches"])


def test_ifun_p1_o2():
    proc = run_cli("ifun", "--spec", str(SPECS / "p1_o2.json"), "--json", "--dmax", "6")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["results"]["passed"] is True
    assert all(r["B_d_is_zero"] for r in report["results"]["rows"])


def test_lg_seeded():
    proc = run_cli("lg", "--spec", str(SPECS / "p1_o2.json"), "--json", "--seed", "5")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert all(s["verdict"] == "good" for s in report["results"]["samples"])


def test_reports_are_byte_deterministic():
    for cmd, extra in [
        ("construct", []),
        ("gkz", ["--gkz-variant", "qdm"]),
        ("lg", ["--seed", "3"]),
        ("ifun", ["--dmax", "4"]),
    ]:
        a = run_cli(cmd, "--spec", str(SPECS / "p1_o2.json"), "--json", *extra)
        b = run_cli(cmd, "--spec", str(SPECS / "p1_o2.json"), "--json", *extra)
        assert a.stdout == b.stdout
        assert a.returncode == b.returncode
