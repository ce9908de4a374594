import math

import numpy as np
import pytest

from mfsinr import cli
from mfsinr import experiments as ex
from mfsinr.charfn import SystemConfig
from mfsinr.inversion import QuadratureSpec
from mfsinr.montecarlo import McSpec
from mfsinr.selftest import check_beta_consistency, check_budget, check_known_inversions, check_special_functions
from mfsinr.sinr_dist import sinr_cdf_exact, sinr_pdf_exact


def read_table(path):
    header, rows = {}, []
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    body = [ln for ln in lines if not ln.startswith("#")]
    for ln in lines:
        if ln.startswith("# ") and "=" in ln:
            k, v = ln[2:].split("=", 1)
            header[k] = v
    cols = body[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in body[1:]])
    return header, cols, data


def test_cdf_roundtrip_is_bit_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["cdf", "--L", "8", "--K", "4", "--pt", "10", "--grid", "0.2:5:6:log",
                     "--samples", "30000", "--seed", "3", "--out", str(a)]) == 0
    assert cli.main(["cdf", "--config", str(a), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    header, cols, data = read_table(a)
    assert header["command"] == "cdf" and header["seed"] == "3"
    assert cols == ["gamma", "exact", "exact_err", "beta_approx", "monte_carlo"]
    assert data[2, 1] == sinr_cdf_exact(data[2, 0], SystemConfig(8, 4, 10.0))


def test_flags_override_config(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(["pdf", "--grid", "0.5:2:3:lin", "--methods", "exact", "--out", str(a)])
    cli.main(["pdf", "--config", str(a), "--L", "16", "--out", str(b)])
    header, _, data = read_table(b)
    assert header["L"] == "16"
    assert data[0, 1] == pytest.approx(sinr_pdf_exact(0.5, SystemConfig(16, 4, 10.0)), rel=1e-12)


def test_db_and_linear_units_agree(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(["outage", "--pt", "20", "--pt-unit", "db", "--methods", "exact,beta_approx", "--out", str(a)])
    cli.main(["outage", "--pt", "100", "--methods", "exact,beta_approx", "--out", str(b)])
    _, ca, da = read_table(a)
    _, cb, db = read_table(b)
    assert ca[0] == "pt_db" and cb[0] == "pt"
    assert da[0, 0] == pytest.approx(20.0) and db[0, 0] == 100.0
    np.testing.assert_allclose(da[:, 1:], db[:, 1:], rtol=1e-12)


@pytest.mark.parametrize("argv", [
    ["cdf"],                                          # no grid
    ["cdf", "--grid", "0.1:1:0:lin"],                 # empty grid
    ["cdf", "--grid", "0:1:5:log"],                   # log grid through zero
    ["cdf", "--grid", "nonsense"],
    ["cdf", "--grid", "0.1:1:3:lin", "--L", "1"],     # invalid system
    ["cdf", "--grid", "0.1:1:3:lin", "--methods", "psychic"],
    ["cdf", "--bogus-flag"],
    ["teleport"],
    ["fig1", "--L-values", "4,x"],
])
def test_usage_errors_exit_1(argv, capsys):
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == cli.EXIT_USAGE
    capsys.readouterr()


def test_budget_failure_exits_2_with_nan(tmp_path, capsys):
    out = tmp_path / "o.csv"
    code = cli.main(["cdf", "--grid", "0.5:2:3:lin", "--methods", "exact", "--max-panels", "5", "--out", str(out)])
    assert code == cli.EXIT_BUDGET
    text = out.read_text()
    assert "# failure:" in text
    _, _, data = read_table(out)
    assert np.all(np.isnan(data[:, 1]))
    assert "BudgetExceededError" in capsys.readouterr().err


def test_fig2_writes_two_files(tmp_path):
    out = tmp_path / "fig2.csv"
    assert cli.main(["fig2", "--samples", "20000", "--L-values", "16,32", "--out", str(out)]) == 0
    _, left, _ = read_table(out)
    header, right, _ = read_table(tmp_path / "fig2_right.csv")
    assert "exact_pt1000" in left and "monte_carlo_pt1" in left and "limit" in left
    assert right == ["x", "monte_carlo_L16", "monte_carlo_L32", "limit"]
    assert header["mc_method"] == "decomposed" and header["L_values"] == "16,32"


def test_fig_commands_small(tmp_path):
    out1, out3 = tmp_path / "f1.csv", tmp_path / "f3.csv"
    assert cli.main(["fig1", "--samples", "20000", "--grid", "0:20:3:lin", "--pt-unit", "db", "--out", str(out1)]) == 0
    _, c1, d1 = read_table(out1)
    assert c1[0] == "pt_db" and "exact_L4" in c1 and "monte_carlo_L8" in c1 and d1.shape[0] == 3
    assert cli.main(["fig3", "--samples", "20000", "--out", str(out3)]) == 0
    _, c3, d3 = read_table(out3)
    assert d3.shape[0] == 41 and "robust_L12" in c3


def test_stdout_output(capsys):
    assert cli.main(["rate", "--samples", "5000"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("# tool=mfsinr") and "monte_carlo_se" in text


def test_parse_grid():
    np.testing.assert_allclose(cli.parse_grid("1:100:3:log"), [1, 10, 100])
    np.testing.assert_allclose(cli.parse_grid("0:1:3:lin"), [0, 0.5, 1])
    with pytest.raises(cli.UsageError):
        cli.parse_grid("0:1:3:cubic")


def test_table_failures_become_nan():
    cfg = SystemConfig(8, 4, 10.0)
    t = ex.outage_table(cfg, 0.8, [1.0, 10.0], ["exact"], quad=QuadratureSpec(max_panels=5))
    assert np.all(np.isnan(t.column("exact"))) and len(t.failures) == 2


def test_histogram_density_tracks_pdf():
    cfg = SystemConfig(8, 4, 10.0)
    t = ex.distribution_table(cfg, [0.8, 1.5], "pdf", ["exact", "monte_carlo"], McSpec(1_000_000, seed=1))
    np.testing.assert_allclose(t.column("monte_carlo"), t.column("exact"), rtol=0.05)


def test_fig_tables_shapes():
    t = ex.fig2_left(p_t_values=(10.0,), x=[0.2, 0.5], methods=("exact", "limit"))
    assert t.columns == ["x", "exact_pt10", "limit"]
    assert np.all(t.column("exact_pt10") <= 1.0)
    assert ex.db_to_linear(30.0) == pytest.approx(1000.0)
    assert ex.sup_distance([1.0, 2.0], [1.5, 2.0]) == 0.5


def test_selftest_checks():
    for check in (check_special_functions(), check_known_inversions(), check_beta_consistency(), check_budget()):
        assert check.passed, check.detail
