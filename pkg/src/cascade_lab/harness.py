"""Experiment orchestration and flat-file output.

Every experiment writes CSV files whose '#'-prefixed header echoes the full
resolved parameter set and the package version, so every emitted number is
traceable.  Identical configs (and seeds) produce byte-identical CSV bodies.
"""

from __future__ import annotations

import dataclasses
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .core import (FitError, ModelParams, XiGrid, dissipation_wavenumber,
                   fit_power_law, fixed_point_inviscid, fixed_point_viscous,
                   fixed_point_w, l2_distance_fixed_points, params_from_alpha,
                   params_from_c, w_to_a, spectrum)
from .inviscid import InitialProfile, solve_on_grid, verify_attraction
from .leray import (fixed_point_regularized, make_mollifier,
                    evolve_regularized, trace_characteristic)
from .shell import shell_steady_slope, shell_steady_state
from .viscous import (SolverConfig, dissipation_anomaly_sweep, evolve,
                      time_avg_dissipation)

__all__ = [
    "ExperimentConfig",
    "RateFitResult",
    "fit_convergence_rate",
    "run",
    "write_csv",
    "read_profile_csv",
    "worker_count",
    "EXPERIMENT_KINDS",
]

EXPERIMENT_KINDS = ("fixed-points", "inviscid", "viscous", "leray", "shell",
                    "sweep-nu", "sweep-delta")

# closed-form L2 rate sweep defaults (cheap; independent of the simulation sweep)
RATE_NUS = tuple(np.geomspace(1e-6, 1e-2, 13))
ASYMPTOTICS_NUS = (1e-4, 1e-5, 1e-6)


@dataclass(frozen=True)
class RateFitResult:
    """Log-log least-squares fit of error against a small parameter."""

    exponent: float
    intercept: float
    residual: float
    window: tuple


def fit_convergence_rate(pairs: Sequence[tuple]) -> RateFitResult:
    """Fit error ~ C * parameter^exponent from (parameter, error) pairs."""
    pts = [(float(p), float(e)) for p, e in pairs]
    if len(pts) < 4:
        raise FitError(f"need at least 4 pairs, got {len(pts)}")
    if any(p <= 0.0 or e <= 0.0 for p, e in pts):
        raise FitError("parameters and errors must be positive")
    x = np.log([p for p, _ in pts])
    y = np.log([e for _, e in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return RateFitResult(exponent=float(slope), intercept=float(intercept),
                         residual=resid,
                         window=(min(p for p, _ in pts), max(p for p, _ in pts)))


@dataclass
class ExperimentConfig:
    kind: str = "fixed-points"
    alpha: Optional[float] = 2.0
    c: Optional[float] = None
    epsilon: float = 1.0
    nu: float = 1.0
    delta: float = 1e-2
    grid_n: int = 4096
    t_end: float = 10.0
    cfl: float = 0.9
    seed: int = 0
    out_dir: str = "out"
    profile_path: Optional[str] = None
    sweep_nus: Sequence[float] = (1e-1, 1e-2, 1e-3)
    sweep_deltas: Sequence[float] = (1e-1, 1e-2, 1e-3)
    # shell-model knobs
    shell_d: float = 1.0
    shell_nu: float = 1e-8
    shell_n: int = 24

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}; "
                             f"choose one of {EXPERIMENT_KINDS}")

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            data = json.load(fh)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    def params(self) -> ModelParams:
        if self.c is not None:
            return params_from_c(self.c, epsilon=self.epsilon, nu=self.nu)
        return params_from_alpha(self.alpha, epsilon=self.epsilon, nu=self.nu)

    def header(self) -> dict:
        d = dataclasses.asdict(self)
        d["sweep_nus"] = list(self.sweep_nus)
        d["sweep_deltas"] = list(self.sweep_deltas)
        d["version"] = __version__
        return d


def worker_count() -> int:
    cap = os.environ.get("CASCADE_LAB_THREADS")
    if cap is not None:
        return max(1, int(cap))
    return max(1, os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# flat-file I/O

def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def write_csv(path, header: dict, columns: Sequence[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        for key in sorted(header):
            fh.write(f"# {key} = {header[key]}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")
    return path


def read_profile_csv(path) -> InitialProfile:
    """Two-column CSV (xi, w0) defining a piecewise-linear initial profile.

    '#'-comment lines and an optional column-name row are skipped.
    """
    with open(path) as fh:
        lines = [l.strip() for l in fh
                 if l.strip() and not l.lstrip().startswith("#")]
    if lines and not lines[0][0].isdigit() and lines[0][0] not in "+-.":
        lines = lines[1:]
    if not lines:
        raise ValueError(f"profile file {path} has no data rows")
    data = np.array([[float(x) for x in l.split(",")] for l in lines])
    if data.shape[1] != 2:
        raise ValueError(f"profile file {path} must have exactly 2 columns")
    return InitialProfile(data[:, 0], data[:, 1])


def _initial_profile(config: ExperimentConfig) -> InitialProfile:
    if config.profile_path:
        return read_profile_csv(config.profile_path)
    return InitialProfile.constant(0.0)


# ---------------------------------------------------------------------------
# experiments

def _run_fixed_points(config: ExperimentConfig, out: Path) -> List[Path]:
    p = config.params()
    hdr = config.header()
    if p.viscous:
        kd, xid = dissipation_wavenumber(p)
        hdr["kappa_d"] = _fmt(kd)
        hdr["xi_d"] = _fmt(xid)
        kmax = 10.0 * kd
    else:
        kd, kmax = None, 1e4
    kappas = np.geomspace(1.0, kmax, 512)
    a0 = fixed_point_inviscid(p, kappas)
    anu = fixed_point_viscous(p, kappas) if p.viscous else np.full_like(kappas, np.nan)
    xis = kappas ** (-1.0 / p.gamma)
    wfix = fixed_point_w(p, xis) if p.viscous else np.ones_like(xis)
    files = [write_csv(out / "fixed_points.csv", hdr,
                       ["kappa", "xi", "a_inviscid", "a_viscous", "w_fixed"],
                       zip(kappas, xis, a0, anu, wfix))]

    # spectra with power-law fits embedded in the header
    E0 = a0 ** 2
    shdr = dict(hdr)
    slope0, _ = fit_power_law(np.column_stack((kappas, E0)), 1.0, 100.0)
    shdr["slope_inviscid"] = _fmt(slope0)
    cols = ["kappa", "E_inviscid"]
    arrays = [kappas, E0]
    if p.viscous:
        Enu = anu ** 2
        if kd is not None and kd > 100.0:
            pos = np.column_stack((kappas, Enu))
            slope_nu, _ = fit_power_law(pos[pos[:, 1] > 0], 1.0, kd / 10.0)
            shdr["slope_viscous"] = _fmt(slope_nu)
        cols.append("E_viscous")
        arrays.append(Enu)
    files.append(write_csv(out / "spectrum.csv", shdr, cols, zip(*arrays)))
    return files


def _run_inviscid(config: ExperimentConfig, out: Path) -> List[Path]:
    p = config.params()
    if config.profile_path:
        prof = read_profile_csv(config.profile_path)
    elif config.seed:
        prof = InitialProfile.random(np.random.default_rng(config.seed))
    else:
        prof = InitialProfile.constant(0.0)
    grid = XiGrid(config.grid_n)
    rows = []
    for t in (0.25, 0.5, 1.0, 1.5, 2.05):
        fld = solve_on_grid(prof, grid, t)
        rows.extend(zip([t] * grid.n, grid.centers, fld.values))
    files = [write_csv(out / "snapshots.csv", config.header(),
                       ["t", "xi", "w"], rows)]
    report = verify_attraction(prof, p, n=config.grid_n)
    hdr = config.header()
    hdr["physical_time_bound"] = _fmt(report.physical_time_bound)
    files.append(write_csv(out / "attraction_report.csv", hdr,
                           ["t_rescaled", "max_deviation", "attracted"],
                           [(report.t_rescaled, report.max_deviation,
                             report.attracted)]))
    return files


def _series_rows(traj, stride: int):
    idx = np.arange(traj.series_times.size)
    keep = (idx % stride == 0) | (idx == idx[-1])
    return zip(traj.series_times[keep], traj.energy_series[keep],
               traj.dissipation_series[keep])


def _run_viscous(config: ExperimentConfig, out: Path) -> List[Path]:
    p = config.params()
    snap_times = [t for t in (1.0, 2.0, 5.0, config.t_end) if t <= config.t_end]
    sc = SolverConfig(cfl=config.cfl, n=config.grid_n, t_end=config.t_end,
                      snapshot_times=snap_times)
    traj = evolve(_initial_profile(config), p, sc)
    rows = []
    for snap in traj.snapshots:
        rows.extend(zip([snap.time] * snap.grid.n, snap.grid.centers, snap.values))
    hdr = config.header()
    hdr["avg_dissipation"] = _fmt(
        time_avg_dissipation(traj, p, t_start=min(2.0, config.t_end / 2.0)))
    files = [write_csv(out / "snapshots.csv", hdr, ["t", "xi", "w"], rows)]
    stride = max(1, traj.series_times.size // 4000)
    files.append(write_csv(out / "series.csv", hdr,
                           ["t", "energy", "dissipation"],
                           _series_rows(traj, stride)))
    return files


def _run_leray(config: ExperimentConfig, out: Path) -> List[Path]:
    p = config.params()
    mol = make_mollifier(config.delta)
    grid = XiGrid(config.grid_n)
    fp = fixed_point_regularized(p, mol, grid)
    xi, wd = fp.table
    hdr = config.header()
    files = [write_csv(out / "wdelta.csv", hdr, ["xi", "w"], zip(xi, wd))]
    sc = SolverConfig(cfl=config.cfl, n=config.grid_n, t_end=config.t_end)
    traj = evolve_regularized(InitialProfile.constant(1.0), p, mol, sc,
                              history_stride=5)
    rows = []
    for start in (1.0, 0.8, 0.6, 0.4):
        ch = trace_characteristic(traj, start)
        rows.extend(zip([start] * ch.times.size, ch.times, ch.positions,
                        ch.carried_values))
    files.append(write_csv(out / "characteristics.csv", hdr,
                           ["start_xi", "t", "eta", "w_along"], rows))
    return files


def _run_shell(config: ExperimentConfig, out: Path) -> List[Path]:
    state = shell_steady_state(d=config.shell_d, nu=config.shell_nu,
                               N=config.shell_n, t_end=config.t_end * 10.0)
    hdr = config.header()
    j_d = int(np.floor(min(
        state.N - 1,
        np.log2(1.0 / config.shell_nu) / (2.0 - 2.0 * config.shell_d / 3.0))))
    j_lo, j_hi = 2, max(6, j_d - 3)
    fit = shell_steady_slope(state, j_lo, j_hi)
    hdr["inertial_slope"] = _fmt(fit.slope)
    hdr["fit_window"] = f"{j_lo}:{j_hi}"
    j = np.arange(state.N + 1)
    rows = zip(j, state.a, 2.0 ** j, state.a ** 2 / 2.0 ** j)
    return [write_csv(out / "shell_spectrum.csv", hdr,
                      ["j", "a", "kappa", "energy_density"], rows)]


def _anomaly_one(args):
    alpha, epsilon, nu, n, cfl, t_end = args
    p = params_from_alpha(alpha, epsilon=epsilon, nu=nu)
    sc = SolverConfig(cfl=cfl, n=n, t_end=t_end)
    rows = dissipation_anomaly_sweep(p, [nu], sc)
    return rows[0]


def _run_sweep_nu(config: ExperimentConfig, out: Path) -> List[Path]:
    p0 = config.params()
    jobs = [(p0.alpha, p0.epsilon, float(nu), config.grid_n, config.cfl,
             config.t_end) for nu in config.sweep_nus]
    workers = min(worker_count(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_anomaly_one, jobs))
    else:
        results = [_anomaly_one(j) for j in jobs]
    hdr = config.header()
    files = [write_csv(out / "anomaly.csv", hdr,
                       ["nu", "avg_dissipation", "kappa_d", "resolved"],
                       [(r.nu, r.avg_dissipation, r.kappa_d, r.resolved)
                        for r in results])]

    # closed-form L2 convergence rates
    dists = [(nu, l2_distance_fixed_points(
        params_from_alpha(p0.alpha, epsilon=p0.epsilon, nu=nu)))
        for nu in RATE_NUS]
    fit = fit_convergence_rate(dists)
    rhdr = config.header()
    rhdr["fitted_exponent"] = _fmt(fit.exponent)
    rhdr["fit_residual"] = _fmt(fit.residual)
    files.append(write_csv(out / "l2_rates.csv", rhdr,
                           ["nu", "sq_distance"], dists))

    # kappa_d small-viscosity asymptotics
    arows = []
    for nu in ASYMPTOTICS_NUS:
        pp = params_from_alpha(p0.alpha, epsilon=p0.epsilon, nu=nu)
        kd, _ = dissipation_wavenumber(pp)
        classical = (pp.epsilon / nu ** 3) ** (1.0 / (1.0 + pp.D))
        arows.append((nu, kd, kd / classical))
    files.append(write_csv(out / "kappa_d.csv", config.header(),
                           ["nu", "kappa_d", "ratio_to_classical"], arows))
    return files


def _run_sweep_delta(config: ExperimentConfig, out: Path) -> List[Path]:
    p = config.params()
    if not p.viscous:
        raise ValueError("sweep-delta needs nu > 0")
    err_rows = []
    table_rows = []
    for delta in config.sweep_deltas:
        n = max(config.grid_n, int(8 / delta))
        grid = XiGrid(n)
        fp = fixed_point_regularized(p, make_mollifier(delta), grid)
        xi, wd = fp.table
        wexact = fixed_point_w(p, xi)
        window = xi >= 0.3
        err = float(np.max(np.abs(wd[window] - wexact[window])))
        err_rows.append((delta, err))
        keep = np.linspace(0, n - 1, min(n, 512)).astype(int)
        table_rows.extend(zip([delta] * keep.size, xi[keep], wd[keep]))
    hdr = config.header()
    files = [write_csv(out / "wdelta_error.csv", hdr,
                       ["delta", "sup_error_03_1"], err_rows)]
    files.append(write_csv(out / "wdelta_tables.csv", hdr,
                           ["delta", "xi", "w"], table_rows))
    return files


_RUNNERS = {
    "fixed-points": _run_fixed_points,
    "inviscid": _run_inviscid,
    "viscous": _run_viscous,
    "leray": _run_leray,
    "shell": _run_shell,
    "sweep-nu": _run_sweep_nu,
    "sweep-delta": _run_sweep_delta,
}


def run(config: ExperimentConfig) -> List[Path]:
    """Run one experiment; returns the list of emitted files."""
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return _RUNNERS[config.kind](config, out)
