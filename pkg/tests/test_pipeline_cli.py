"""Classification drivers and the command-line front end."""

import json
import os
import subprocess
import sys

import pytest

from quotlat.catalog import entry
from quotlat.cli import main
from quotlat.codes import CyclicOracle, type_of_word
from quotlat.lattices import format_gram
from quotlat.pipeline import classify_cyclic, classify_noncyclic


def test_classify_cyclic_d5():
    rep = classify_cyclic(9, 5)
    assert rep.candidates_admissible == 4
    rows = [(type_of_word(r.code.words[0], 5), r.s, r.r, r.s_prime)
            for r in rep.feasible_rows()]
    assert ((1, 8), 18, 17, 9) in rows
    assert len(rows) == 4
    assert all(r.s_prime == 9 for r in rep.feasible_rows())


def test_classify_cyclic_infeasible_rows_reported():
    rep = classify_cyclic(5, 3)
    assert rep.candidates_admissible == 0
    rep = classify_cyclic(6, 3)
    assert [(r.s, r.r) for r in rep.feasible_rows()] == [(12, 11)]


def test_divisor_prefilter_shrinks_composite_orders():
    oracle = CyclicOracle()
    oracle.add(9, 7, (0, 0, 7, 1, 1, 0, 0), False)  # arbitrary seeding works
    rep = classify_cyclic(9, 14, oracle=oracle)
    assert rep.meta["after_divisor_filter"] < rep.candidates_admissible


def test_classify_noncyclic_22_dim7():
    rep = classify_noncyclic(7, (2, 2))
    feas = rep.feasible_rows()
    assert len(feas) == 2
    for r in feas:
        assert not r.code.trivially_extends()
        assert r.code.quotient_type() == (2, 2)
        assert r.s_prime == 7


def _run_cli(args, tmp_path=None):
    import io
    from contextlib import redirect_stdout
    buf = io.StringIO()
    with redirect_stdout(buf):
        rc = main(args)
    return rc, buf.getvalue()


def test_cli_watson():
    rc, out = _run_cli(["watson", "--n", "9", "--d", "5"])
    assert rc == 0
    assert "1,8" in out and "4,5" in out


def test_cli_classify_cyclic_json_deterministic():
    rc1, out1 = _run_cli(["--format", "json", "classify-cyclic",
                          "--n", "7", "--d", "4"])
    rc2, out2 = _run_cli(["--format", "json", "classify-cyclic",
                          "--n", "7", "--d", "4"])
    assert rc1 == rc2 == 0
    assert out1 == out2
    rows = json.loads(out1)
    assert len(rows) == 4
    assert {"d_structure", "generators", "feasible", "s", "r", "s_prime"} <= \
        set(rows[0])


def test_cli_check_code_exit_codes(tmp_path):
    feasible = tmp_path / "d4.code"
    feasible.write_text("4 2\n1 1 1 1\n")
    rc, out = _run_cli(["--format", "json", "check-code", str(feasible)])
    assert rc == 0
    payload = json.loads(out)[0]
    assert payload["status"] == "feasible"
    assert payload["s"] == 12 and payload["r"] == 10

    impossible = tmp_path / "bad.code"
    impossible.write_text("5 3\n1 1 1 1 1\n")
    rc, out = _run_cli(["--format", "json", "check-code", str(impossible)])
    assert rc == 1

    invalid = tmp_path / "invalid.code"
    invalid.write_text("4 2\n0 0 0 0\n")
    rc, _ = _run_cli(["--format", "json", "check-code", str(invalid)])
    assert rc == 3


def test_cli_invariants(tmp_path):
    gram = tmp_path / "l87.gram"
    gram.write_text(format_gram(entry("L87").gram))
    rc, out = _run_cli(["--format", "json", "invariants", str(gram)])
    assert rc == 0
    payload = json.loads(out)[0]
    assert payload["min"] == "4"
    assert payload["s"] == 87
    assert payload["r"] == 42
    assert payload["eutaxy"] == "eutactic"


def test_cli_index_system(tmp_path):
    gram = tmp_path / "d5.gram"
    gram.write_text(format_gram(entry("D5").gram))
    rc, out = _run_cli(["--format", "json", "index-system", str(gram),
                        "--mode", "brute"])
    assert rc == 0
    rows = json.loads(out)
    assert {r["type"] for r in rows} == {"1", "2"}


def test_cli_csv_and_out_file(tmp_path):
    dest = tmp_path / "report.csv"
    rc, _ = _run_cli(["--format", "csv", "--out", str(dest),
                      "classify-cyclic", "--n", "7", "--d", "4"])
    assert rc == 0
    lines = dest.read_text().splitlines()
    assert lines[0] == "d_structure,generators,feasible,s,r,s_prime"
    assert len(lines) == 5


def test_cli_entry_point_subprocess():
    res = subprocess.run([sys.executable, "-m", "quotlat.cli", "watson",
                          "--n", "9", "--d", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "1,1,1,1,1,1,1,1,1" in res.stdout
