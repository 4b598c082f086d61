import json
import os

import numpy as np
import pytest

from cascade_lab.cli import main
from cascade_lab.core import FitError
from cascade_lab.harness import (
    EXPERIMENT_KINDS,
    ExperimentConfig,
    fit_convergence_rate,
    read_profile_csv,
    run,
    worker_count,
    write_csv,
)


def read_header(path):
    hdr = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].partition("=")
            hdr[key.strip()] = value.strip()
    return hdr


class TestConfig:
    def test_kind_validation(self):
        with pytest.raises(ValueError):
            ExperimentConfig(kind="bogus")
        assert set(EXPERIMENT_KINDS) >= {"fixed-points", "sweep-nu"}

    def test_from_json_rejects_unknown(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"kind": "viscous", "typo_field": 1}))
        with pytest.raises(ValueError, match="typo_field"):
            ExperimentConfig.from_json(path)

    def test_from_json_roundtrip(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"kind": "viscous", "nu": 0.5, "grid_n": 128}))
        cfg = ExperimentConfig.from_json(path)
        assert cfg.nu == 0.5 and cfg.grid_n == 128

    def test_params_prefers_c(self):
        cfg = ExperimentConfig(alpha=None, c=0.25)
        assert cfg.params().alpha == pytest.approx(5.0 / 3.0 + 0.5)


class TestFitConvergenceRate:
    def test_recovers_synthetic_exponent(self):
        hs = np.geomspace(1e-4, 1e-1, 7)
        fit = fit_convergence_rate([(h, 3.0 * h ** 2) for h in hs])
        assert fit.exponent == pytest.approx(2.0, abs=1e-10)
        assert fit.residual < 1e-10

    def test_requires_enough_points(self):
        with pytest.raises(FitError):
            fit_convergence_rate([(0.1, 0.1), (0.2, 0.2), (0.3, 0.3)])

    def test_requires_positive_values(self):
        with pytest.raises(FitError):
            fit_convergence_rate([(0.1, 0.0), (0.2, 0.1), (0.3, 0.1), (0.4, 0.1)])


class TestCsv:
    def test_header_and_body(self, tmp_path):
        path = write_csv(tmp_path / "x.csv", {"b": 2, "a": 1}, ["u", "v"],
                         [(1.0, True), (0.5, False)])
        text = path.read_text().splitlines()
        assert text[0] == "# a = 1"
        assert text[1] == "# b = 2"
        assert text[2] == "u,v"
        assert text[3] == "1,1"
        assert text[4] == "0.5,0"

    def test_profile_roundtrip(self, tmp_path):
        path = write_csv(tmp_path / "p.csv", {}, ["xi", "w0"],
                         [(0.0, 0.1), (0.5, 1.2), (1.0, 0.4)])
        prof = read_profile_csv(path)
        assert prof(0.5) == pytest.approx(1.2)

    def test_profile_column_check(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError):
            read_profile_csv(path)


class TestWorkerCount:
    def test_env_cap(self, monkeypatch):
        monkeypatch.setenv("CASCADE_LAB_THREADS", "3")
        assert worker_count() == 3
        monkeypatch.setenv("CASCADE_LAB_THREADS", "0")
        assert worker_count() == 1
        monkeypatch.delenv("CASCADE_LAB_THREADS")
        assert worker_count() >= 1


class TestRunners:
    def test_fixed_points_outputs(self, tmp_path):
        cfg = ExperimentConfig(kind="fixed-points", nu=1.0,
                               out_dir=str(tmp_path))
        files = run(cfg)
        names = {f.name for f in files}
        assert names == {"fixed_points.csv", "spectrum.csv"}
        hdr = read_header(tmp_path / "fixed_points.csv")
        assert float(hdr["kappa_d"]) == pytest.approx(4.0)
        shdr = read_header(tmp_path / "spectrum.csv")
        assert float(shdr["slope_inviscid"]) == pytest.approx(-2.0, abs=1e-6)

    def test_determinism_byte_identical(self, tmp_path):
        outs = []
        for sub in ("a", "b"):
            cfg = ExperimentConfig(kind="inviscid", seed=42, grid_n=256,
                                   out_dir=str(tmp_path / sub))
            run(cfg)
            text = (tmp_path / sub / "snapshots.csv").read_text()
            body = "\n".join(l for l in text.splitlines()
                             if not l.startswith("#"))
            outs.append(body)
        # identical config and seed: byte-identical CSV bodies
        assert outs[0] == outs[1]

    def test_inviscid_attraction_report(self, tmp_path):
        cfg = ExperimentConfig(kind="inviscid", seed=7, grid_n=128,
                               out_dir=str(tmp_path))
        run(cfg)
        body = (tmp_path / "attraction_report.csv").read_text().splitlines()
        t, dev, attracted = body[-1].split(",")
        assert float(dev) < 1e-12
        assert attracted == "1"

    def test_viscous_series(self, tmp_path):
        cfg = ExperimentConfig(kind="viscous", nu=1.0, grid_n=256, t_end=3.0,
                               out_dir=str(tmp_path))
        files = run(cfg)
        assert {f.name for f in files} == {"snapshots.csv", "series.csv"}
        hdr = read_header(tmp_path / "series.csv")
        assert float(hdr["avg_dissipation"]) == pytest.approx(1.0, abs=0.1)

    def test_sweep_delta_errors_decrease(self, tmp_path):
        cfg = ExperimentConfig(kind="sweep-delta", nu=1.0, grid_n=512,
                               sweep_deltas=(1e-1, 3e-2), out_dir=str(tmp_path))
        run(cfg)
        body = [l for l in (tmp_path / "wdelta_error.csv").read_text().splitlines()
                if not l.startswith("#")][1:]
        errs = [float(l.split(",")[1]) for l in body]
        assert errs[0] > errs[1] > 0.0

    def test_sweep_nu_rates_header(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CASCADE_LAB_THREADS", "1")
        cfg = ExperimentConfig(kind="sweep-nu", grid_n=128, t_end=1.0,
                               sweep_nus=(1.0, 0.5, 0.25), out_dir=str(tmp_path))
        files = run(cfg)
        assert {f.name for f in files} == {"anomaly.csv", "l2_rates.csv",
                                           "kappa_d.csv"}
        hdr = read_header(tmp_path / "l2_rates.csv")
        assert float(hdr["fitted_exponent"]) == pytest.approx(1.0, abs=0.1)


class TestCli:
    def test_fixed_points_smoke(self, tmp_path, capsys):
        rc = main(["fixed-points", "--nu", "0.1", "--out", str(tmp_path)])
        assert rc == 0
        printed = capsys.readouterr().out.splitlines()
        assert any(p.endswith("fixed_points.csv") for p in printed)

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        cfgfile = tmp_path / "cfg.json"
        cfgfile.write_text(json.dumps({"nu": 1.0, "grid_n": 128}))
        rc = main(["viscous", "--config", str(cfgfile), "--t-end", "1.0",
                   "--out", str(tmp_path / "o")])
        assert rc == 0
        hdr = read_header(tmp_path / "o" / "series.csv")
        assert hdr["t_end"] == "1.0"
        assert hdr["grid_n"] == "128"

    def test_c_flag_selects_parameter(self, tmp_path):
        rc = main(["fixed-points", "--c", "0.5", "--nu", "1.0",
                   "--out", str(tmp_path)])
        assert rc == 0
        hdr = read_header(tmp_path / "fixed_points.csv")
        assert hdr["alpha"] == "None"
        assert hdr["c"] == "0.5"

    def test_error_exit_on_bad_input(self, tmp_path, capsys):
        rc = main(["fixed-points", "--alpha", "3.5", "--out", str(tmp_path)])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_error_exit_on_missing_profile(self, tmp_path, capsys):
        rc = main(["viscous", "--profile", str(tmp_path / "nope.csv"),
                   "--out", str(tmp_path)])
        assert rc == 1

    def test_sweep_kind_flag(self, tmp_path):
        rc = main(["sweep", "--kind", "delta", "--nu", "1.0",
                   "--sweep-deltas", "1e-1,3e-2", "--grid-n", "256",
                   "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "wdelta_error.csv").exists()
