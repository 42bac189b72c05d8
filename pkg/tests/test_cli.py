import csv
import io
import json

import pytest
from click.testing import CliRunner

from capelli.cli import SUITES, RunConfig, main, run_suite


def invoke(*args):
    return CliRunner().invoke(main, list(args), catch_exceptions=False)


def test_every_criterion_has_a_suite():
    assert sorted(s.criterion for s in SUITES.values()) == list(range(1, 10))


def test_capelli_small_grid_passes_and_lists_eigenvalues():
    res = invoke("verify", "capelli", "--d", "1", "--n", "3", "--r", "1", "--m", "0..2", "--l", "1")
    assert res.exit_code == 0, res.output
    assert "summary: 3 passed, 0 failed" in res.output
    assert "(2): 4*s^2 - 2*s - 6" in res.output
    alias = invoke("verify", "capelli-exact", "--d", "1", "--n", "3", "--r", "1", "--m", "0..2", "--l", "1")
    assert alias.output == res.output


def test_line_bundle_suite_passes():
    res = invoke("verify", "line-bundle", "--p", "1,-1", "--format", "csv")
    assert res.exit_code == 0, res.output
    rows = list(csv.DictReader(io.StringIO(res.output)))
    assert [r["p"] for r in rows] == ["-1", "1"]
    assert all(r["status"] == "pass" for r in rows)


def test_radon_exact_small_grid_json():
    res = invoke("verify", "radon-exact", "--d", "2", "--n", "3", "--format", "json")
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["criterion"] == 3 and doc["summary"]["failed"] == 0
    assert doc["cases"] and all(c["status"] == "pass" for c in doc["cases"])


def test_rank_violation_exits_2():
    res = invoke("verify", "capelli", "--d", "1", "--n", "3", "--r", "2")
    assert res.exit_code == 2
    assert "r <= n - r" in res.output


def test_parity_violation_exits_2():
    res = invoke("verify", "inversion", "--d", "1", "--n", "4", "--r", "1", "--rprime", "2", "--m", "1")
    assert res.exit_code == 2
    assert "not an integer" in res.output


def test_bad_format_exits_2():
    assert invoke("verify", "rank-one", "--format", "xml").exit_code == 2


def test_failure_exits_1_with_identity_anchor():
    res = invoke("verify", "radon-mc", "--d", "2", "--n", "3", "--r", "1", "--rprime", "2", "--mu", "2",
                 "--samples", "2000", "--max-rel-se", "1e-6")
    assert res.exit_code == 1
    assert "[identity:" in res.output and "fail" in res.output


def test_mc_reports_are_byte_identical():
    args = ("verify", "radon-mc", "--d", "2", "--n", "3", "--r", "1", "--rprime", "2", "--mu", "2",
            "--seed", "7", "--samples", "5000", "--format", "json")
    a, b = invoke(*args), invoke(*args)
    assert a.exit_code == 0
    assert a.output == b.output
    case = json.loads(a.output)["cases"][0]
    assert case["exact"] == "1/4"


def test_timings_only_on_request():
    plain = invoke("verify", "rank-one", "--d", "1", "--n", "3", "--m", "1", "--format", "csv")
    timed = invoke("verify", "rank-one", "--d", "1", "--n", "3", "--m", "1", "--format", "csv", "--timings")
    assert "seconds" not in plain.output.splitlines()[0]
    assert "seconds" in timed.output.splitlines()[0]


def test_gamma_table_row():
    res = invoke("tables", "--table", "gamma", "--d", "2", "--n", "3", "--r", "1", "--rprime", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(res.output)))
    row = next(r for r in rows if r["mu"] == "(2)")
    assert row["gamma"] == "1/4" and row["inversion_eigenvalue"] == "4"


def test_c_table_row_formal_s():
    res = invoke("tables", "--table", "c", "--d", "1", "--n", "4", "--r", "1", "--l", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(res.output)))
    row = next(r for r in rows if r["mu"] == "(2)")
    assert row["s"] == "s" and row["c"] == "4*s^2 - 4*s - 8"


def test_c_table_rational_s():
    res = invoke("tables", "--table", "c", "--d", "1", "--n", "4", "--r", "1", "--l", "1", "--s", "1/2", "--format", "json")
    rows = json.loads(res.output)["rows"]
    assert next(r for r in rows if r["mu"] == "(2)")["c"] == "-9"


def test_empty_grid_gives_header_only():
    res = invoke("tables", "--table", "gamma", "--d", "1", "--n", "2", "--r", "2", "--format", "csv")
    assert res.exit_code == 0
    assert res.output.splitlines() == ["d,n,r,rprime,l,mu,gamma,eta_minus_alpha,eta_minus_beta,inversion_eigenvalue"]


def test_tables_written_to_directory(tmp_path):
    res = invoke("tables", "--d", "2", "--n", "3", "--format", "csv", "--out", str(tmp_path))
    assert res.exit_code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["c.csv", "gamma.csv"]
    assert "1/4" in (tmp_path / "gamma.csv").read_text()


def test_run_config_serialization_is_stable():
    a = RunConfig("radon-mc", d=(2,), seed=7, samples=10)
    b = RunConfig("radon-mc", samples=10, seed=7, d=(2,))
    assert a.to_json() == b.to_json()
    text, status = run_suite(RunConfig("rank-one", d=(1,), n=(3,), m=(2,)))
    assert status == 0 and "pass" in text


@pytest.mark.parametrize("fmt", ["markdown", "csv", "json"])
def test_gindikin_suite_formats(fmt):
    res = invoke("verify", "gindikin", "--format", fmt)
    assert res.exit_code == 0
    assert "| fail |" not in res.output and ",fail," not in res.output and '"fail"' not in res.output
