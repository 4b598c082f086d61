import numpy as np
import pytest

from cascade_lab.core import XiGrid, WField, fixed_point_w, params_from_alpha
from cascade_lab.inviscid import InitialProfile, hopf_potential, lax_oleinik_eval
from cascade_lab.viscous import (
    SolverConfig,
    StabilityError,
    cfl_dt,
    dissipation_anomaly_sweep,
    evolve,
    godunov_step,
    time_avg_dissipation,
)


def uniform_field(n, value, time=0.0):
    grid = XiGrid(n)
    return WField(grid, np.full(n, float(value)), time=time)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            SolverConfig(cfl=1.5)
        with pytest.raises(ValueError):
            SolverConfig(n=4)
        with pytest.raises(ValueError):
            SolverConfig(n=100, xi_min_clamp=1e-4)

    def test_default_clamp(self):
        sc = SolverConfig(n=100)
        assert sc.clamp == pytest.approx(0.005)


class TestCflDt:
    def test_unit_state(self):
        sc = SolverConfig(n=100, cfl=0.9)
        assert cfl_dt(uniform_field(100, 1.0), sc) == pytest.approx(0.009)

    def test_speed_floor(self):
        # boundary inflow keeps the wave speed at least 1 even for w == 0
        sc = SolverConfig(n=100, cfl=0.9)
        assert cfl_dt(uniform_field(100, 0.0), sc) == pytest.approx(0.009)

    def test_refinement_halves_dt(self):
        a = cfl_dt(uniform_field(100, 1.0), SolverConfig(n=100))
        b = cfl_dt(uniform_field(200, 1.0), SolverConfig(n=200))
        assert b == pytest.approx(a / 2.0)


class TestGodunovStep:
    def test_constant_state_unchanged(self):
        p = params_from_alpha(2.0, nu=0.0)
        w = uniform_field(64, 1.0)
        out = godunov_step(w, p, 0.005)
        assert np.allclose(out.values, 1.0)

    def test_interface_flux_upwinds_from_right(self):
        # left state 0, right state 1: flux -1/2 raises the left cell
        p = params_from_alpha(2.0, nu=0.0)
        grid = XiGrid(64)
        vals = np.where(grid.centers < 0.5, 0.0, 1.0)
        dt = 0.005
        out = godunov_step(WField(grid, vals), p, dt)
        i = np.searchsorted(grid.centers, 0.5) - 1
        assert out.values[i] == pytest.approx(dt / (2.0 * grid.dxi))

    def test_cfl_violation_raises(self):
        p = params_from_alpha(2.0, nu=0.0)
        with pytest.raises(StabilityError):
            godunov_step(uniform_field(64, 2.0), p, 0.05)

    def test_steady_state_residual(self):
        p = params_from_alpha(2.0, nu=1.0)
        grid = XiGrid(1024)
        w = WField(grid, fixed_point_w(p, grid.centers))
        sc = SolverConfig(n=1024)
        out = godunov_step(w, p, cfl_dt(w, sc), sc)
        assert np.max(np.abs(out.values - w.values)) < 5.0 * grid.dxi

    def test_positivity(self):
        rng = np.random.default_rng(7)
        p = params_from_alpha(7.0 / 3.0, nu=0.5)
        grid = XiGrid(128)
        w = WField(grid, rng.uniform(0.0, 2.0, grid.n))
        sc = SolverConfig(n=128)
        for _ in range(50):
            w = godunov_step(w, p, cfl_dt(w, sc) / 2.0, sc)
        assert np.all(w.values >= 0.0)


class TestEvolve:
    def test_steady_state_preserved(self):
        p = params_from_alpha(2.0, nu=1.0)
        grid = XiGrid(1024)
        w0 = WField(grid, fixed_point_w(p, grid.centers))
        sc = SolverConfig(n=1024, t_end=2.0)
        traj = evolve(w0, p, sc, series_stride=20)
        W = fixed_point_w(p, grid.centers)
        # drift is concentrated at the kink at xi_d, where the corner smears
        assert np.max(np.abs(traj.snapshots[-1].values - W)) < 10.0 * grid.dxi

    def test_convergence_to_attractor(self):
        p = params_from_alpha(2.0, nu=1.0)
        sc = SolverConfig(n=4096, t_end=10.0)
        traj = evolve(InitialProfile.constant(0.0), p, sc, series_stride=50)
        W = fixed_point_w(p, XiGrid(4096).centers)
        assert np.max(np.abs(traj.snapshots[-1].values - W)) < 1e-2

    def test_discrete_maximum_principle(self):
        p = params_from_alpha(2.0, nu=0.1)
        rng = np.random.default_rng(3)
        prof = InitialProfile.random(rng)
        sc = SolverConfig(n=512, t_end=1.0, snapshot_times=(0.25, 0.5, 0.75))
        traj = evolve(prof, p, sc, series_stride=10)
        bound = max(float(np.max(prof.values)), 1.0) + 1e-12
        for snap in traj.snapshots:
            assert float(np.max(snap.values)) <= bound

    def test_total_variation_diminishing_mu0(self):
        p = params_from_alpha(2.0, nu=0.0)
        prof = InitialProfile.ramp()
        sc = SolverConfig(n=256, t_end=1.5, snapshot_times=(0.5, 1.0))
        traj = evolve(prof, p, sc, series_stride=10)

        def tv(values):
            full = np.concatenate((values, [1.0]))
            return float(np.sum(np.abs(np.diff(full))))

        tvs = [tv(s.values) for s in traj.snapshots]
        assert all(b <= a + 1e-12 for a, b in zip(tvs, tvs[1:]))
        assert tvs[0] <= tv(prof(XiGrid(256).centers)) + 1e-12

    def test_oracle_equivalence_refinement(self):
        # mu = 0: the exact variational solution is the oracle
        p = params_from_alpha(2.0, nu=0.0)
        prof = InitialProfile.constant(0.0)
        pot = hopf_potential(prof)
        errors = {}
        for n in (256, 512, 1024):
            sc = SolverConfig(n=n, t_end=1.0)
            traj = evolve(prof, p, sc, series_stride=100)
            grid = XiGrid(n)
            exact = np.array([lax_oleinik_eval(pot, xi, 1.0)
                              for xi in grid.centers])
            errors[n] = float(np.mean(np.abs(traj.snapshots[-1].values - exact)))
        order = np.polyfit(np.log([256, 512, 1024]),
                           np.log([errors[256], errors[512], errors[1024]]), 1)[0]
        assert -order >= 0.8

    def test_energy_inequality(self):
        p = params_from_alpha(2.0, nu=0.5)
        sc = SolverConfig(n=1024, t_end=4.0)
        traj = evolve(InitialProfile.constant(0.0), p, sc, series_stride=5)
        T = traj.series_times[-1] - traj.series_times[0]
        # rescaled time: d/dt carries a factor 3 eps^(1/3)/gamma to physical
        rate = 3.0 * p.epsilon ** (1.0 / 3.0) / p.gamma
        lhs = (traj.energy_series[-1] - traj.energy_series[0]) / (2.0 * T) * rate
        avg_diss = time_avg_dissipation(traj, p)
        assert lhs <= p.epsilon - avg_diss + 0.05

    def test_lyapunov_monotone(self):
        p = params_from_alpha(2.0, nu=0.3)
        rng = np.random.default_rng(11)
        prof = InitialProfile.random(rng)
        sc = SolverConfig(n=512, t_end=2.0,
                          snapshot_times=tuple(np.linspace(0.2, 1.8, 9)))
        traj = evolve(prof, p, sc, series_stride=10)
        grid = XiGrid(512)
        vals = [float(np.sum(grid.centers ** 2 * s.values ** 2) * grid.dxi)
                for s in traj.snapshots]
        assert all(b <= a + 1e-10 for a, b in zip(vals, vals[1:]))


class TestDissipation:
    def test_average_at_fixed_point(self):
        p = params_from_alpha(2.0, nu=1.0)
        grid = XiGrid(8192)
        w0 = WField(grid, fixed_point_w(p, grid.centers))
        sc = SolverConfig(n=8192, t_end=0.05)
        traj = evolve(w0, p, sc, series_stride=5)
        assert time_avg_dissipation(traj, p) == pytest.approx(1.0, abs=0.02)

    def test_zero_state(self):
        p = params_from_alpha(2.0, nu=1.0)
        grid = XiGrid(256)
        w = WField(grid, np.zeros(grid.n))
        sc = SolverConfig(n=256, t_end=0.01)
        # dissipation of the zero state is zero at t = 0
        traj = evolve(w, p, sc, series_stride=1)
        assert traj.dissipation_series[0] == 0.0

    def test_requires_two_samples(self):
        p = params_from_alpha(2.0, nu=1.0)
        from cascade_lab.viscous import Trajectory
        traj = Trajectory(params=p, series_times=np.array([0.0]),
                          dissipation_series=np.array([0.0]))
        with pytest.raises(ValueError):
            time_avg_dissipation(traj, p)

    def test_sweep_rows_and_flags(self):
        p = params_from_alpha(2.0, nu=1.0)
        sc = SolverConfig(n=512, t_end=4.0)
        rows = dissipation_anomaly_sweep(p, [1.0, 0.1], sc, series_stride=20)
        assert [r.nu for r in rows] == [1.0, 0.1]
        assert rows[0].kappa_d == pytest.approx(4.0)
        assert rows[0].resolved  # xi_d = 1/4 on 512 cells
        assert not dissipation_anomaly_sweep(
            p, [1e-3], SolverConfig(n=64, t_end=1.0), series_stride=1)[0].resolved

    def test_sweep_rejects_nonpositive_nu(self):
        p = params_from_alpha(2.0, nu=1.0)
        with pytest.raises(ValueError):
            dissipation_anomaly_sweep(p, [0.0], SolverConfig(n=64, t_end=1.0))
