import json

import numpy as np
import pytest

from lsts import StationaryAR, run_test, simulate
from lsts.cli import bench_cells, main, read_series


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def ar_file(tmp_path):
    path = tmp_path / "ar.csv"
    x = simulate(StationaryAR(coeffs=(0.5,)), 128, seed=7)
    path.write_text("".join(f"{v:.17g}\n" for v in x))
    return path


class TestSimulate:
    def test_byte_identical_repeats(self, capsys):
        code1, out1, _ = run_cli(capsys, "simulate", "--model", "ar1", "--phi", "0.5", "--T", "128", "--seed", "7")
        code2, out2, _ = run_cli(capsys, "simulate", "--model", "ar1", "--phi", "0.5", "--T", "128", "--seed", "7")
        assert code1 == code2 == 0
        assert out1 == out2
        assert len(out1.splitlines()) == 128

    def test_row_count(self, capsys):
        code, out, _ = run_cli(capsys, "simulate", "--model", "alt3", "--T", "256")
        assert code == 0
        assert len(out.splitlines()) == 256

    def test_ma1_autocorrelation(self, capsys):
        code, out, _ = run_cli(capsys, "simulate", "--model", "ma1", "--theta", "0.9", "--T", "10000", "--seed", "4")
        assert code == 0
        x = np.array([float(v) for v in out.split()])
        xc = x - x.mean()
        rho = (xc[:-1] @ xc[1:]) / (xc @ xc)
        assert abs(rho - 0.9 / 1.81) < 0.02

    def test_unknown_model(self, capsys):
        code, _, err = run_cli(capsys, "simulate", "--model", "garch", "--T", "64")
        assert code == 3
        assert "garch" in err

    def test_too_short(self, capsys):
        code, _, err = run_cli(capsys, "simulate", "--model", "ar1", "--T", "4")
        assert code == 3

    def test_output_file(self, tmp_path, capsys):
        out_path = tmp_path / "sim.csv"
        code, out, _ = run_cli(capsys, "simulate", "--model", "alt1", "--T", "64", "-o", str(out_path))
        assert code == 0
        assert out == ""
        assert len(out_path.read_text().splitlines()) == 64


class TestTest:
    def test_stationary_series_text(self, ar_file, capsys):
        code, out, _ = run_cli(capsys, "test", str(ar_file), "--N", "16", "--seed", "3")
        assert code == 0
        assert "statistic" in out and "decision" in out
        assert "N=16 M=8" in out

    def test_round_trip_matches_library(self, ar_file, capsys):
        code, out, _ = run_cli(capsys, "test", str(ar_file), "--N", "16", "--seed", "3", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        x = simulate(StationaryAR(coeffs=(0.5,)), 128, seed=7)
        direct = run_test(x, N=16, B=200, alpha=0.05, seed=3)
        assert payload["results"]["statistic"] == pytest.approx(direct.statistic, rel=1e-12)
        assert payload["results"]["critical_value"] == pytest.approx(direct.critical_value, rel=1e-12)

    def test_short_series(self, tmp_path, capsys):
        path = tmp_path / "short.csv"
        path.write_text("".join(f"{v}\n" for v in range(10)))
        code, _, err = run_cli(capsys, "test", str(path))
        assert code == 3
        assert "too short" in err

    def test_odd_window(self, ar_file, capsys):
        code, _, err = run_cli(capsys, "test", str(ar_file), "--N", "13")
        assert code == 3
        assert "--N" in err and "even" in err

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "test", "/nonexistent/data.csv")
        assert code == 2

    def test_unparseable_file(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("value\n1.0\n2.0\noops\n" + "1.0\n" * 40)
        code, _, err = run_cli(capsys, "test", str(path))
        assert code == 2
        assert "oops" in err

    def test_diff_flag(self, tmp_path, capsys):
        # a pure random walk differences to white noise
        rng = np.random.default_rng(5)
        walk = np.cumsum(rng.standard_normal(257))
        path = tmp_path / "walk.csv"
        path.write_text("".join(f"{v:.17g}\n" for v in walk))
        code, out, _ = run_cli(capsys, "test", str(path), "--diff", "--format", "json", "--seed", "2")
        assert code == 0
        assert json.loads(out)["config"]["T"] == 256

    def test_pre_estimator(self, tmp_path, capsys):
        x = simulate(StationaryAR(coeffs=(0.5,)), 64, seed=9)
        path = tmp_path / "x.csv"
        path.write_text("".join(f"{v:.17g}\n" for v in x))
        code, out, _ = run_cli(capsys, "test", str(path), "--estimator", "pre", "--B", "99", "--format", "json")
        assert code == 0
        assert json.loads(out)["config"]["N"] is None

    def test_stdin_pipe_round_trip(self, ar_file, capsys, monkeypatch):
        import io

        monkeypatch.setattr("sys.stdin", io.StringIO(ar_file.read_text()))
        code, out, _ = run_cli(capsys, "test", "-", "--N", "16", "--seed", "3", "--format", "json")
        assert code == 0
        x = simulate(StationaryAR(coeffs=(0.5,)), 128, seed=7)
        direct = run_test(x, N=16, B=200, alpha=0.05, seed=3)
        assert json.loads(out)["results"]["statistic"] == pytest.approx(direct.statistic, rel=1e-12)


class TestSurface:
    def test_dimensions(self, ar_file, capsys):
        code, out, _ = run_cli(capsys, "surface", str(ar_file), "--N", "16")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 1 + 8  # header + M rows
        assert all(len(line.split(",")) == 1 + 8 for line in lines)  # label + N/2 columns

    def test_zero_variance_input(self, tmp_path, capsys):
        path = tmp_path / "flat.csv"
        path.write_text("1.0\n" * 64)
        code, out, _ = run_cli(capsys, "surface", str(path), "--N", "8")
        assert code == 0
        rows = [line.split(",")[1:] for line in out.strip().splitlines()[1:]]
        assert all(float(v) == 0.0 for row in rows for v in row)

    def test_matches_library_surface(self, ar_file, capsys):
        from lsts import distance_process, local_periodogram, make_grid

        code, out, _ = run_cli(capsys, "surface", str(ar_file), "--N", "16")
        x = simulate(StationaryAR(coeffs=(0.5,)), 128, seed=7)
        proc = distance_process(local_periodogram(x, make_grid(128, 16)))
        first_row = [float(v) for v in out.strip().splitlines()[1].split(",")[1:]]
        assert np.allclose(first_row, proc.values[0], atol=1e-15)

    def test_output_file(self, ar_file, tmp_path, capsys):
        out_path = tmp_path / "surf.csv"
        code, out, _ = run_cli(capsys, "surface", str(ar_file), "--N", "16", "-o", str(out_path))
        assert code == 0
        assert out == ""
        assert len(out_path.read_text().strip().splitlines()) == 9

    def test_column_selection(self, tmp_path, capsys):
        x = simulate(StationaryAR(coeffs=(0.5,)), 64, seed=2)
        path = tmp_path / "wide.csv"
        path.write_text("idx,value\n" + "".join(f"{i},{v:.17g}\n" for i, v in enumerate(x)))
        code, out, _ = run_cli(
            capsys, "test", str(path), "--column", "value", "--N", "8", "--B", "99", "--format", "json"
        )
        assert code == 0
        direct = run_test(x, N=8, B=99, alpha=0.05, seed=0)
        assert json.loads(out)["results"]["statistic"] == pytest.approx(direct.statistic, rel=1e-12)


class TestBench:
    def test_list(self, capsys):
        code, out, _ = run_cli(capsys, "bench", "--list")
        assert code == 0
        assert "T128-N16-ar0.5" in out
        assert "T128-N16-alt2" in out
        assert "T128-pre-alt3" in out
        assert "T256-N16-ma0.9" in out

    def test_reference_values(self):
        cells = bench_cells()
        assert cells["T128-N16-ar0.5"].reference == {0.05: 0.034, 0.10: 0.092}
        assert cells["T128-N16-alt2"].reference[0.05] == 0.396
        assert cells["T128-pre-alt3"].reference[0.05] == 0.036
        assert cells["T128-N16-ar0.5"].default_runs == 500
        assert cells["T128-N16-alt2"].default_runs == 200

    def test_unknown_cell(self, capsys):
        code, _, err = run_cli(capsys, "bench", "--cell", "T999-N2-ar0")
        assert code == 3
        assert "unknown cell" in err

    def test_cell_required(self, capsys):
        code, _, err = run_cli(capsys, "bench")
        assert code == 3

    def test_small_cell_run(self, capsys):
        code, out, _ = run_cli(
            capsys, "bench", "--cell", "T64-N8-ar0.5", "--runs", "50", "--B", "100", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["results"]["reference"]["0.05"] == 0.050
        assert 0.0 <= payload["results"]["rejection_rates"]["0.05"] <= 1.0

    def test_pre_cell_run(self, capsys):
        code, out, _ = run_cli(
            capsys, "bench", "--cell", "T64-pre-alt1", "--runs", "50", "--B", "100", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["config"]["N"] is None
        assert payload["config"]["estimator"] == "pre"
        assert payload["results"]["reference"]["0.05"] == 0.188

    def test_text_report_shows_reference(self, capsys):
        code, out, _ = run_cli(capsys, "bench", "--cell", "T64-N8-ar0", "--runs", "50", "--B", "100")
        assert code == 0
        assert "reference" in out
        assert "0.035" in out  # published 5% rate for this cell


class TestReadSeries:
    def test_header_autodetection(self, tmp_path):
        path = tmp_path / "h.csv"
        path.write_text("price\n1.5\n2.5\n")
        assert np.array_equal(read_series(str(path)), [1.5, 2.5])

    def test_column_by_name(self, tmp_path):
        path = tmp_path / "two.csv"
        path.write_text("a,b\n1,10\n2,20\n")
        assert np.array_equal(read_series(str(path), "b"), [10.0, 20.0])

    def test_column_by_index(self, tmp_path):
        path = tmp_path / "two.csv"
        path.write_text("1,10\n2,20\n")
        assert np.array_equal(read_series(str(path), "1"), [10.0, 20.0])

    def test_envelope_schema_stable(self, ar_file, capsys):
        _, test_out, _ = run_cli(capsys, "test", str(ar_file), "--N", "16", "--format", "json")
        _, bench_out, _ = run_cli(
            capsys, "bench", "--cell", "T64-N8-ar0", "--runs", "50", "--B", "100", "--format", "json"
        )
        for out in (test_out, bench_out):
            payload = json.loads(out)
            assert set(payload) == {"command", "seed", "config", "results", "timing"}
            assert "seconds" in payload["timing"]


class TestHelp:
    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0

    def test_no_subcommand(self, capsys):
        assert main([]) == 3
