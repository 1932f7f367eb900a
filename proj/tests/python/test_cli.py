"""Smoke tests for the command-line tool (path in $SKBIF_CLI)."""

import csv
import io
import json
import math
import os
import subprocess

import pytest

CLI = os.environ.get("SKBIF_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="SKBIF_CLI not set")


def run(*args):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, timeout=300)


def test_axes_k3():
    r = run("axes", "--k", 3)
    assert r.returncode == 0
    data = json.loads(r.stdout)
    assert data["count"] == 3
    assert len(data["axes"]) == 3
    first = data["axes"][0]["direction"]
    assert first[0] == pytest.approx(2 / math.sqrt(6), abs=1e-15)


def test_verify_k5():
    r = run("verify", "--k", 5, "--eta", 0.01)
    assert r.returncode == 0, r.stderr
    data = json.loads(r.stdout)
    assert data["crossing"] == 6
    assert data["folds"] == 10
    assert data["pass"] is True


def test_gamma_rows():
    r = run("gamma", "--k", 7, "--eta", 1e-3, "--format", "csv")
    assert r.returncode == 0, r.stderr
    rows = list(csv.DictReader(io.StringIO(r.stdout)))
    assert [int(row["p"]) for row in rows] == [1, 2, 3]
    for row in rows:
        assert float(row["rel_error"]) < 1e-8
    assert float(rows[0]["closed"]) > float(rows[1]["closed"]) > float(rows[2]["closed"])


def test_floats_round_trip():
    r = run("gamma", "--k", 5, "--eta", 0.01)
    data = json.loads(r.stdout)
    g1 = data["rows"][0]["closed"]
    # 17 significant digits survive the JSON round trip.
    assert g1 == pytest.approx(2 * math.sqrt(3 / math.sqrt(20) * 0.01), rel=1e-15)


def test_planar_csv_header():
    r = run("planar", "--k", 5, "--eta", 0.01, "--p", 3, "--lambda-min", -0.1, "--lambda-max", 0.1,
            "--grid", 3, "--format", "csv")
    assert r.returncode == 0, r.stderr
    lines = r.stdout.splitlines()
    assert lines[0] == "lambda,u,v,index,plane_p"
    rows = list(csv.DictReader(io.StringIO(r.stdout)))
    at_zero = [row for row in rows if float(row["lambda"]) == 0.0]
    assert sorted(abs(float(row["v"])) for row in at_zero) == pytest.approx([0.2114742527] * 2, abs=1e-9)


def test_usage_errors_exit_2():
    assert run("verify", "--k", 2).returncode == 2
    assert run("bogus").returncode == 2
    assert run("verify", "--k", 5, "--format", "xml").returncode == 2


def test_verification_failure_exit_1():
    # At k = 4 and eta = 1e-3 the L_1 folds land in the transition band of the
    # cubic plateau and the count comes out as (3, 7) instead of (3, 5).
    r = run("verify", "--k", 4, "--eta", 1e-3)
    assert r.returncode == 1
    data = json.loads(r.stdout)
    assert data["pass"] is False
    assert (data["crossing"], data["folds"]) == (3, 7)


def test_window_too_small_is_usage_error():
    r = run("verify", "--k", 5, "--eta", 0.01, "--lambda-min", -0.1, "--lambda-max", 0.1)
    assert r.returncode == 2


def test_diagram_svg(tmp_path):
    out = tmp_path / "d.svg"
    r = run("diagram", "--k", 5, "--eta", 0.01, "--format", "svg", "--out", out)
    assert r.returncode == 0, r.stderr
    assert out.read_text().startswith("<svg")
