import csv
import json

from zonalkit.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_expand_direct_degree_one(capsys):
    code, out, _ = run_cli(capsys, "expand", "--route", "direct", "--n", "3", "--k", "1")
    assert code == 0
    # 4 <x,y> over four paired coordinates
    assert out.count("4 x") == 4


def test_expand_degree_zero_is_one(capsys):
    code, out, _ = run_cli(capsys, "expand", "--route", "direct", "--n", "5", "--k", "0")
    assert code == 0
    assert out.strip() == "1"


def test_expand_json_format(capsys):
    code, out, _ = run_cli(capsys, "expand", "--route", "ladder", "--n", "2", "--k", "2",
                           "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["nx"] == data["ny"] == 3
    assert all(t["py"] == 0 for t in data["terms"])


def test_expand_invalid_parameters_exit_2(capsys):
    code, _, err = run_cli(capsys, "expand", "--route", "kelvin", "--n", "4", "--k", "2")
    assert code == 2
    assert "odd" in err
    code, _, err = run_cli(capsys, "expand", "--route", "laplacian_odd", "--n", "5",
                           "--k", "1", "--m", "1")
    assert code == 2
    code, _, err = run_cli(capsys, "expand", "--route", "direct", "--n", "3", "--k", "-2")
    assert code == 2


def test_expand_term_budget_guard(capsys):
    code, _, err = run_cli(capsys, "expand", "--route", "laplacian_odd", "--k", "6",
                           "--m", "3", "--max-terms", "1000")
    assert code == 2
    assert "terms" in err


def test_eval_exact_point(capsys):
    code, out, _ = run_cli(capsys, "eval", "--route", "direct", "--n", "2", "--k", "1",
                           "--x", "1,2,3", "--y", "1/2,0,-1")
    assert code == 0
    assert "exact: -15/2" in out


def test_coeff_values(capsys):
    code, out, _ = run_cli(capsys, "coeff", "betaHat", "--m", "1", "--k", "1")
    assert code == 0 and "-72" in out
    code, out, _ = run_cli(capsys, "coeff", "eta", "--m", "0", "--k", "5")
    assert code == 0 and "eta = 1" in out
    code, out, _ = run_cli(capsys, "coeff", "eta", "--m", "1", "--k", "2")
    assert code == 0 and "note:" in out  # stated/observed disagreement surfaced
    code, out, _ = run_cli(capsys, "coeff", "beta", "--m", "1", "--lambda", "1", "--k", "2")
    assert code == 0 and "-80" in out  # -16(k+3) at k=2


def test_coeff_domain_error_exit_2(capsys):
    code, _, err = run_cli(capsys, "coeff", "eta", "--m", "1", "--k", "0")
    assert code == 2
    code, _, err = run_cli(capsys, "coeff", "alpha", "--m", "1")
    assert code == 2


def test_verify_small_suite_exit_codes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "monogenic", "--kmax", "3",
                           "--threads", "1")
    assert code == 0
    assert "pass=4" in out
    # the stated-constant suite fails by design and must exit 1
    code, out, _ = run_cli(capsys, "verify", "--suite", "kelvin", "--kmax", "1",
                           "--threads", "1")
    assert code == 1
    assert "FAIL" in out


def test_verify_json_report_deterministic(tmp_path, capsys):
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    for p in (p1, p2):
        code, _, _ = run_cli(capsys, "verify", "--suite", "poisson", "--seed", "7",
                             "--threads", "1", "--json", str(p))
        assert code == 0
    assert p1.read_bytes() == p2.read_bytes()
    data = json.loads(p1.read_text())
    assert data["passed"] is True
    assert data["seed"] == 7


def test_verify_json_write_error_exit_3(capsys):
    code, _, err = run_cli(capsys, "verify", "--suite", "monogenic", "--kmax", "1",
                           "--threads", "1", "--json", "/nonexistent/dir/report.json")
    assert code == 3


def test_table_zonal_coeffs(tmp_path, capsys):
    out = tmp_path / "z.csv"
    code, _, _ = run_cli(capsys, "table", "zonal_coeffs", "--n", "1", "--kmax", "3",
                         "--out", str(out))
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["n", "k", "xexp", "yexp", "px", "py", "coeff"]
    # k = 1 plane kernel: 2<x,y> -> coefficients 2
    k1 = [r for r in rows[1:] if r[1] == "1"]
    assert {r[6] for r in k1} == {"2"}
    # plane kernel k=2 is 4<x,y>^2 - 2 QxQy; merged coefficients are 2, 8, -2
    k2 = [r for r in rows[1:] if r[1] == "2"]
    assert {r[6] for r in k2} == {"2", "8", "-2"}


def test_table_header_only_for_empty_range(tmp_path, capsys):
    out = tmp_path / "empty.csv"
    code, _, _ = run_cli(capsys, "table", "zonal_coeffs", "--n", "2", "--kmax", "-1",
                         "--out", str(out))
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows == [["n", "k", "xexp", "yexp", "px", "py", "coeff"]]


def test_table_poisson_convergence(tmp_path, capsys):
    out = tmp_path / "p.csv"
    code, _, _ = run_cli(capsys, "table", "poisson_convergence", "--n", "2",
                         "--r", "0.3", "--w", "0.5", "--max-terms", "50",
                         "--out", str(out))
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["terms", "partial_sum", "closed_form", "abs_error"]
    errs = [float(r[3]) for r in rows[1:]]
    assert len(errs) == 50
    assert errs[-1] < 1e-12
    assert errs[-1] <= errs[0]
    # error decay is monotone after the first couple of terms
    tail = errs[2:]
    assert all(a >= b - 1e-18 for a, b in zip(tail, tail[1:]))


def test_table_io_error_exit_3(capsys):
    code, _, err = run_cli(capsys, "table", "zonal_coeffs", "--n", "1", "--kmax", "1",
                           "--out", "/nonexistent/dir/x.csv")
    assert code == 3
