"""Regenerate every figure kind from real experiment output.

Talks to the experiment package only through its command line and the CSV
files it emits, mirroring how the two packages are used together.
"""

import shutil
import subprocess
import sys

import pytest

needs_lab = pytest.mark.skipif(shutil.which("cascade-lab") is None,
                               reason="cascade-lab CLI not installed")


def lab(*args):
    return subprocess.run(["cascade-lab", *args], capture_output=True,
                          text=True, check=True)


def render(kind, inputs, out):
    return subprocess.run(
        [sys.executable, "-m", "cascade_plots.cli", "render",
         "--kind", kind, "--in", *map(str, inputs), "--out", str(out)],
        capture_output=True, text=True)


@needs_lab
def test_figures_from_experiment_csvs(tmp_path):
    fp_dir = tmp_path / "fp"
    lab("fixed-points", "--nu", "0.01", "--out", str(fp_dir))

    sweep_dir = tmp_path / "sweep"
    lab("sweep", "--kind", "nu", "--sweep-nus", "1.0,0.5,0.25",
        "--grid-n", "256", "--t-end", "3.0", "--out", str(sweep_dir))

    delta_dir = tmp_path / "delta"
    lab("sweep", "--kind", "delta", "--nu", "1.0",
        "--sweep-deltas", "1e-1,3e-2", "--grid-n", "512",
        "--out", str(delta_dir))

    shell_dir = tmp_path / "shell"
    lab("shell", "--shell-n", "20", "--shell-nu", "1e-6",
        "--out", str(shell_dir))

    jobs = [
        ("spectrum", [fp_dir / "spectrum.csv"]),
        ("anomaly", [sweep_dir / "anomaly.csv"]),
        ("rates", [sweep_dir / "l2_rates.csv"]),
        ("regularized", [delta_dir / "wdelta_tables.csv"]),
        ("shell", [shell_dir / "shell_spectrum.csv"]),
    ]
    for kind, inputs in jobs:
        out = tmp_path / f"{kind}.png"
        result = render(kind, inputs, out)
        assert result.returncode == 0, result.stderr
        assert out.is_file() and out.stat().st_size > 0
