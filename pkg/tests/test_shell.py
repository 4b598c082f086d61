import numpy as np
import pytest

from cascade_lab.shell import (
    ShellState,
    dissipation_shell_estimate,
    shell_evolve,
    shell_rhs,
    shell_steady_slope,
    shell_steady_state,
    stiffness_dt_cap,
)


class TestState:
    def test_validation(self):
        with pytest.raises(ValueError):
            ShellState(a=np.ones(5))
        with pytest.raises(ValueError):
            ShellState(a=np.ones(12), nu=-1.0)

    def test_energy(self):
        st = ShellState(a=np.full(10, 2.0))
        assert st.energy == pytest.approx(40.0)
        assert st.N == 9


class TestRhs:
    def test_hand_values_unit_amplitudes(self):
        # a_j = 1, d = 1, nu = 0: rhs_0 = -1, rhs_j = -2^(j-1) inside,
        # rhs_N = 2^(N-1) from the open right closure
        st = ShellState(a=np.ones(10), d=1.0, nu=0.0)
        rhs = shell_rhs(st)
        assert rhs[0] == pytest.approx(-1.0)
        for j in range(1, 9):
            assert rhs[j] == pytest.approx(-(2.0 ** (j - 1)))
        assert rhs[9] == pytest.approx(2.0 ** 8)

    def test_pinned_zeroes_first_component(self):
        st = ShellState(a=np.ones(10), d=1.0, nu=0.0)
        assert shell_rhs(st, pinned=True)[0] == 0.0

    def test_energy_flux_telescopes(self):
        # inviscid, unforced: sum a_j rhs_j = boundary term only
        rng = np.random.default_rng(2)
        a = rng.uniform(0.1, 1.0, 16)
        st = ShellState(a=a, d=1.5, nu=0.0)
        rhs = shell_rhs(st)
        boundary = -(2.0 ** (st.d * 15)) * a[15] ** 2 * 0.0  # a_{N+1} = 0
        assert float(np.dot(a, rhs)) == pytest.approx(boundary, abs=1e-9)

    def test_power_law_ansatz_is_steady_inside(self):
        # a_j = 2^(-dj/3) balances the flux exactly on interior shells
        for d in (1.0, 2.0, 3.0):
            j = np.arange(20, dtype=float)
            st = ShellState(a=2.0 ** (-d * j / 3.0), d=d, nu=0.0)
            rhs = shell_rhs(st, pinned=True)
            # roundoff scales with the cancelling flux terms ~ 2^(dj/3)
            scale = 2.0 ** (d * j[1:-1] / 3.0)
            assert np.max(np.abs(rhs[1:-1]) / scale) < 1e-12

    def test_viscous_term(self):
        st = ShellState(a=np.ones(10), d=1.0, nu=1e-3)
        st0 = ShellState(a=np.ones(10), d=1.0, nu=0.0)
        diff = shell_rhs(st) - shell_rhs(st0)
        assert diff[4] == pytest.approx(-1e-3 * 4.0 ** 4)


class TestEvolve:
    def test_inviscid_energy_conserved(self):
        rng = np.random.default_rng(9)
        st = ShellState(a=rng.uniform(0.0, 0.5, 12), d=1.0, nu=0.0)
        traj = shell_evolve(st, t_end=10.0, dt=5e-5, record_every=2000)
        energies = np.sum(traj.states ** 2, axis=1)
        assert np.max(np.abs(energies - st.energy)) < 1e-10

    def test_rk4_order_in_energy_drift(self):
        rng = np.random.default_rng(9)
        st = ShellState(a=rng.uniform(0.0, 0.5, 12), d=1.0, nu=0.0)
        drifts = []
        for dt in (4e-4, 2e-4):
            traj = shell_evolve(st, t_end=2.0, dt=dt, record_every=10 ** 9)
            drifts.append(abs(traj.final().energy - st.energy))
        ratio = drifts[0] / drifts[1]
        assert 8.0 < ratio < 80.0  # nominally 2^4 = 16 for a 4th-order scheme

    def test_viscous_unforced_decays(self):
        st = ShellState(a=np.ones(10), d=1.0, nu=1e-4)
        traj = shell_evolve(st, t_end=1.0, dt=1e-4, record_every=1000)
        energies = np.sum(traj.states ** 2, axis=1)
        assert np.all(np.diff(energies) < 0.0)

    def test_pinning_holds(self):
        st = ShellState(a=np.zeros(10), d=1.0, nu=1e-4)
        traj = shell_evolve(st, t_end=0.5, dt=1e-4, pin_a0=1.0)
        assert np.all(traj.states[:, 0] == 1.0)
        assert traj.final().a[1] > 0.0

    def test_stiffness_guard(self):
        st = ShellState(a=np.ones(12), d=1.0, nu=1.0)
        assert stiffness_dt_cap(st) == pytest.approx(2.5 / 4.0 ** 11)
        with pytest.raises(ValueError):
            shell_evolve(st, t_end=1.0, dt=1e-3)
        assert stiffness_dt_cap(ShellState(a=np.ones(12), nu=0.0)) == np.inf

    def test_rejects_bad_horizon(self):
        with pytest.raises(ValueError):
            shell_evolve(ShellState(a=np.ones(10)), t_end=0.0)


class TestSteadyState:
    def test_dissipation_shell_estimate(self):
        assert dissipation_shell_estimate(1.0, 1e-8) == pytest.approx(
            np.log2(1e8) / (4.0 / 3.0))
        assert dissipation_shell_estimate(1.0, 0.0) == np.inf

    def test_inertial_slope(self):
        st = shell_steady_state(d=1.0, nu=1e-8, N=24)
        j_d = dissipation_shell_estimate(1.0, 1e-8)
        fit = shell_steady_slope(st, 2, int(j_d) - 3)
        assert fit.slope == pytest.approx(-1.0 / 3.0, abs=0.05)
        assert not fit.flagged

    def test_slope_flagging(self):
        st = shell_steady_state(d=1.0, nu=1e-8, N=24, t_end=50.0)
        assert shell_steady_slope(st, 0, 8).flagged
        assert shell_steady_slope(st, 2, 22).flagged

    def test_fit_window_validation(self):
        st = ShellState(a=np.ones(12))
        with pytest.raises(ValueError):
            shell_steady_slope(st, 3, 5)
        bad = ShellState(a=np.concatenate((np.ones(10), [0.0, 1.0])))
        with pytest.raises(ValueError):
            shell_steady_slope(bad, 6, 11)
