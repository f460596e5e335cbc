import subprocess
import sys

import pytest

from barplots import FigureSpec, plot_rmse_vs_runtime, plot_runtime_vs_n, render
from barplots.cli import main

RUNTIME_CSV = (
    "# schema=1\n"
    "method,m,n_points,seed,runtime_seconds,rmse,converged\n"
    "BAR,1,4,0,0.001,,true\n"
    "BAR,1,4,1,0.0012,,true\n"
    "BAR,1,8,0,0.002,,true\n"
    "BAR,1,8,1,0.0021,,true\n"
    "MML,1,4,0,0.01,,true\n"
    "MML,1,4,1,0.011,,true\n"
    "MML,1,8,0,0.05,,true\n"
    "MML,1,8,1,0.052,,false\n"
)

RMSE_CSV = (
    "# schema=1\n"
    "method,m,n_points,seed,runtime_seconds,rmse,converged\n"
    "BAR,1,100,0,0.001,0.8,true\n"
    "BAR,1,100,1,0.0011,0.9,true\n"
    "MML,1,100,0,0.02,0.85,true\n"
    "MML,1,100,1,0.021,1.1,false\n"
)


@pytest.fixture
def runtime_csv(tmp_path):
    path = tmp_path / "runtime.csv"
    path.write_text(RUNTIME_CSV)
    return path


@pytest.fixture
def rmse_csv(tmp_path):
    path = tmp_path / "rmse.csv"
    path.write_text(RMSE_CSV)
    return path


class TestRuntimeFigure:
    def test_renders_file(self, runtime_csv, tmp_path):
        out = tmp_path / "fig.png"
        spec = FigureSpec(input_csv=runtime_csv, kind="runtime_vs_n", output_path=out)
        assert plot_runtime_vs_n(spec) == out
        assert out.exists() and out.stat().st_size > 0

    def test_two_methods_two_legend_lines(self, runtime_csv, tmp_path):
        spec = FigureSpec(input_csv=runtime_csv, kind="runtime_vs_n", output_path=tmp_path / "f.png")
        fig = render(spec)
        labels = [t.get_text() for t in fig.axes[0].get_legend().get_texts()]
        assert labels == ["BAR", "MML"]
        assert fig.axes[0].get_xscale() == "log" and fig.axes[0].get_yscale() == "log"

    def test_single_record_degenerate_line(self, tmp_path):
        path = tmp_path / "one.csv"
        path.write_text(
            "# schema=1\nmethod,m,n_points,seed,runtime_seconds,rmse,converged\n"
            "BAR,1,4,0,0.001,,true\n"
        )
        out = tmp_path / "one.png"
        plot_runtime_vs_n(FigureSpec(input_csv=path, kind="runtime_vs_n", output_path=out))
        assert out.exists() and out.stat().st_size > 0

    def test_empty_csv_no_file_written(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("# schema=1\nmethod,m,n_points,seed,runtime_seconds,rmse,converged\n")
        out = tmp_path / "nothing.png"
        spec = FigureSpec(input_csv=path, kind="runtime_vs_n", output_path=out)
        with pytest.raises(ValueError):
            plot_runtime_vs_n(spec)
        assert not out.exists()

    def test_input_not_mutated(self, runtime_csv, tmp_path):
        before = runtime_csv.read_bytes()
        plot_runtime_vs_n(
            FigureSpec(input_csv=runtime_csv, kind="runtime_vs_n", output_path=tmp_path / "f.png")
        )
        assert runtime_csv.read_bytes() == before

    def test_deterministic_output(self, runtime_csv, tmp_path):
        out_a, out_b = tmp_path / "a.png", tmp_path / "b.png"
        plot_runtime_vs_n(FigureSpec(input_csv=runtime_csv, kind="runtime_vs_n", output_path=out_a))
        plot_runtime_vs_n(FigureSpec(input_csv=runtime_csv, kind="runtime_vs_n", output_path=out_b))
        assert out_a.read_bytes() == out_b.read_bytes()


class TestRmseFigure:
    def test_renders_file(self, rmse_csv, tmp_path):
        out = tmp_path / "fig.png"
        spec = FigureSpec(input_csv=rmse_csv, kind="rmse_vs_runtime", output_path=out)
        assert plot_rmse_vs_runtime(spec) == out
        assert out.exists() and out.stat().st_size > 0

    def test_point_counts_per_method(self, rmse_csv, tmp_path):
        spec = FigureSpec(input_csv=rmse_csv, kind="rmse_vs_runtime", output_path=tmp_path / "f.png")
        fig = render(spec)
        total = sum(len(c.get_offsets()) for c in fig.axes[0].collections)
        assert total == 4

    def test_nonconverged_rendered_hollow(self, rmse_csv, tmp_path):
        spec = FigureSpec(input_csv=rmse_csv, kind="rmse_vs_runtime", output_path=tmp_path / "f.png")
        fig = render(spec)
        hollow = [c for c in fig.axes[0].collections if c.get_facecolor().size == 0]
        assert len(hollow) == 1
        assert len(hollow[0].get_offsets()) == 1

    def test_runtime_only_csv_is_an_error(self, runtime_csv, tmp_path):
        spec = FigureSpec(
            input_csv=runtime_csv, kind="rmse_vs_runtime", output_path=tmp_path / "f.png"
        )
        with pytest.raises(ValueError, match="RMSE"):
            plot_rmse_vs_runtime(spec)


class TestCli:
    def test_renders_both_kinds(self, runtime_csv, rmse_csv, tmp_path):
        out1 = tmp_path / "runtime.png"
        out2 = tmp_path / "rmse.png"
        assert main(["--kind", "runtime_vs_n", "--in", str(runtime_csv), "--out", str(out1)]) == 0
        assert main(["--kind", "rmse_vs_runtime", "--in", str(rmse_csv), "--out", str(out2)]) == 0
        assert out1.stat().st_size > 0 and out2.stat().st_size > 0

    def test_schema_mismatch_nonzero_exit(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("n,runtime\n4,0.1\n")
        out = tmp_path / "fig.png"
        assert main(["--kind", "runtime_vs_n", "--in", str(bad), "--out", str(out)]) == 1
        assert not out.exists()
        assert "error:" in capsys.readouterr().err

    def test_missing_input_nonzero_exit(self, tmp_path):
        assert (
            main(
                [
                    "--kind",
                    "runtime_vs_n",
                    "--in",
                    str(tmp_path / "absent.csv"),
                    "--out",
                    str(tmp_path / "f.png"),
                ]
            )
            == 1
        )

    def test_axis_override(self, runtime_csv, tmp_path):
        out = tmp_path / "lin.png"
        code = main(
            ["--kind", "runtime_vs_n", "--in", str(runtime_csv), "--out", str(out), "--no-log-y"]
        )
        assert code == 0 and out.exists()


class TestEndToEndWithPrimaryCli:
    def test_consumes_bench_csv_from_primary(self, tmp_path):
        bench_csv = tmp_path / "bench.csv"
        run = subprocess.run(
            [
                sys.executable,
                "-m",
                "bargp.cli",
                "bench-runtime",
                "--m",
                "1",
                "--n-list",
                "4,8",
                "--repeats",
                "2",
                "--seed",
                "1",
                "--out",
                str(bench_csv),
            ],
            capture_output=True,
            text=True,
        )
        assert run.returncode in (0, 1), run.stderr
        out = tmp_path / "fig.png"
        assert main(["--kind", "runtime_vs_n", "--in", str(bench_csv), "--out", str(out)]) == 0
        assert out.stat().st_size > 0
