import json
import shutil
import subprocess

import pytest

from whsolve import cli
from whsolve.bench import CSV_HEADER, read_csv


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bench_writes_csv_profile_and_plots(tmp_path, capsys):
    csv_path, prof, plots = tmp_path / "r.csv", tmp_path / "p.json", tmp_path / "figs"
    code, out, _ = run(["bench", "--case", "gaussian,laplace", "--method", "wh-sign",
                        "--n", "4096,8192", "--out", str(csv_path), "--profile", str(prof),
                        "--plot-dir", str(plots)], capsys)
    assert code == 0
    assert "gaussian" in out and "laplace" in out
    rows = read_csv(csv_path)
    assert len(rows) == 12 and csv_path.read_text().splitlines()[0] == ",".join(CSV_HEADER)
    assert sorted(json.loads(prof.read_text())) == ["gaussian/wh-sign", "laplace/wh-sign"]
    for name in ("error_vs_n.png", "error_vs_cpu.png"):
        assert (plots / name).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_bench_nonconvergence_exit_code(tmp_path, capsys):
    code, _, _ = run(["bench", "--case", "gaussian", "--method", "voronin", "--n", "1024",
                      "--out", str(tmp_path / "v.csv")], capsys)
    assert code == 2
    assert len(read_csv(tmp_path / "v.csv")) == 3


def test_bench_quadrature_and_options(tmp_path, capsys):
    code, _, _ = run(["bench", "--case", "cauchy", "--method", "quadrature", "--n", "65,129",
                      "--quad-order", "2", "--probes", "0.25,0.75", "--out", str(tmp_path / "q.csv")],
                     capsys)
    assert code == 0
    rows = read_csv(tmp_path / "q.csv")
    assert [r.probe_frac for r in rows] == [0.25, 0.75, 0.25, 0.75]


def test_bench_failed_row_is_marked_and_sweep_continues(tmp_path, capsys):
    # N = 1000 is not a multiple of 4*m_trunc, so that row fails; N = 2048 still runs.
    code, _, _ = run(["bench", "--case", "gaussian", "--method", "wh-sign", "--n", "1000,2048",
                      "--out", str(tmp_path / "e.csv")], capsys)
    assert code == 2
    rows = read_csv(tmp_path / "e.csv")
    assert [r.N for r in rows] == [1000] * 3 + [2048] * 3
    assert all(r.abs_error != r.abs_error for r in rows[:3])
    assert all(r.abs_error < 1e-6 for r in rows[3:])


@pytest.mark.parametrize("argv", [
    [],
    ["bench", "--case", "gaussian", "--method", "wh-sign"],
    ["bench", "--case", "airy", "--method", "wh-sign", "--out", "x.csv"],
    ["bench", "--case", "gaussian", "--method", "spline", "--out", "x.csv"],
    ["solve", "--case", "gaussian", "--quad-order", "7"],
    ["frobnicate"],
])
def test_usage_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 1


def test_laplace_bad_interval_exits_1(capsys):
    code, _, err = run(["verify", "--case", "laplace", "--a", "-1", "--b", "1"], capsys)
    assert code == 1 and "0 < a" in err


def test_unwritable_output_exits_1(tmp_path, capsys):
    code, _, err = run(["bench", "--case", "gaussian", "--method", "wh-sign", "--n", "1024",
                        "--out", str(tmp_path / "no" / "such" / "dir.csv")], capsys)
    assert code == 1 and "cannot write" in err


def test_verify(capsys):
    code, out, _ = run(["verify", "--case", "cauchy", "--a", "-1", "--b", "1"], capsys)
    assert code == 0
    assert float(out.split()[-1]) <= 1e-8


def test_solve_prints_probes_and_plot(tmp_path, capsys):
    fig = tmp_path / "sol.png"
    code, out, err = run(["solve", "--case", "laplace", "--n", "4096", "--plot", str(fig)], capsys)
    assert code == 0 and "iterations" in err
    lines = out.strip().splitlines()
    assert lines[0] == "probe,x,f_numeric,f_analytic,abs_error" and len(lines) == 4
    for line in lines[1:]:
        p, x, num, exact, e = map(float, line.split(","))
        assert abs(num - exact) == pytest.approx(e) and e < 1e-7
    assert fig.read_bytes()[:4] == b"\x89PNG"


@pytest.mark.skipif(shutil.which("whsolve") is None, reason="console script not installed")
def test_console_script(tmp_path):
    res = subprocess.run(["whsolve", "verify", "--case", "gaussian"], capture_output=True, text=True)
    assert res.returncode == 0 and "max residual" in res.stdout
    res = subprocess.run(["whsolve", "bench"], capture_output=True, text=True)
    assert res.returncode == 1
