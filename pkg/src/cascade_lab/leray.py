"""Leray-type regularized dynamics.

The transport velocity is a one-sided mollification v_delta = w * phi_delta
with supp phi_delta = (-delta, 0), so v_delta(xi) averages w over the window
(xi, xi + delta) looking strictly rightward.  That one-sidedness makes the
regularized fixed point computable by a single right-to-left marching sweep,
and makes the time evolution a linear upwind transport with frozen-per-step
velocity plus the exact exponential damping factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .core import FixedPoint, ModelParams, XiGrid, WField
from .inviscid import InitialProfile
from .viscous import SolverConfig, StabilityError

__all__ = [
    "Mollifier",
    "Characteristic",
    "RegularizedTrajectory",
    "make_mollifier",
    "mollify",
    "fixed_point_regularized",
    "evolve_regularized",
    "trace_characteristic",
    "V_MIN",
    "MIN_CELLS_PER_DELTA",
]

V_MIN = 1e-14
MIN_CELLS_PER_DELTA = 4


def _bump(s: np.ndarray) -> np.ndarray:
    """Unnormalized smooth bump on (-1, 0): exp(1 / ((2s+1)^2 - 1))."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = (s > -1.0) & (s < 0.0)
    u = (2.0 * s[inside] + 1.0) ** 2 - 1.0  # in [-1, 0)
    out[inside] = np.exp(1.0 / u)
    return out


@dataclass(frozen=True)
class Mollifier:
    """One-sided mollifier phi_delta(y) = phi(y/delta)/delta, supp (-delta, 0)."""

    delta: float
    nodes: np.ndarray    # quadrature nodes in (-delta, 0)
    weights: np.ndarray  # phi_delta at the nodes times the node spacing; sums to 1

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        z = self.normalization
        return z * _bump(y / self.delta) / self.delta

    @property
    def normalization(self) -> float:
        # Z such that the quadrature of Z * bump equals 1 exactly
        dy = self.nodes[1] - self.nodes[0]
        raw = float(np.sum(_bump(self.nodes / self.delta) / self.delta) * dy)
        return 1.0 / raw

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    @property
    def first_moment(self) -> float:
        """m1 = int (-y) phi_delta(y) dy = delta * m1[phi], in (0, delta)."""
        return float(np.sum(-self.nodes * self.weights))


def make_mollifier(delta: float, n_quad: int = 512) -> Mollifier:
    """Tabulated mollifier of width delta, normalized to unit mass."""
    if delta <= 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    dy = delta / n_quad
    nodes = -delta + (np.arange(n_quad) + 0.5) * dy
    raw = _bump(nodes / delta) / delta * dy
    weights = raw / raw.sum()
    return Mollifier(delta=delta, nodes=nodes, weights=weights)


def _grid_weights(mol: Mollifier, dxi: float) -> np.ndarray:
    """Normalized weights c_j, j = 1..m, for v_i = sum_j c_j w_{i+j}.

    c_j samples phi_delta at offset -(j - 1/2) dxi; normalization to unit sum
    makes mollification preserve constants exactly.
    """
    m = int(round(mol.delta / dxi))
    if m < MIN_CELLS_PER_DELTA:
        raise ValueError(
            f"delta = {mol.delta} spans only {m} cells; need >= {MIN_CELLS_PER_DELTA}")
    s = (np.arange(1, m + 1) - 0.5) * dxi
    c = _bump(-s / mol.delta)
    return c / c.sum()


def mollify(w: WField, mol: Mollifier) -> np.ndarray:
    """v_delta = w * phi_delta on the grid; w is extended by 1 beyond xi = 1."""
    c = _grid_weights(mol, w.grid.dxi)
    m = c.size
    ext = np.concatenate((w.values, np.ones(m)))
    v = np.zeros(w.grid.n)
    for j in range(1, m + 1):
        v += c[j - 1] * ext[j:j + w.grid.n]
    return v


def fixed_point_regularized(params: ModelParams, mol: Mollifier,
                            grid: XiGrid) -> FixedPoint:
    """Tabulated fixed point W_delta of the regularized equation.

    Solves v_delta W' = mu xi^(-2 gamma) W by marching right to left from
    W(1) = 1; the convolution window looks strictly rightward, so every
    velocity value only uses already-computed entries.  Where v_delta drops
    below V_MIN the remaining values are set to 0 (the true fixed point is
    positive but decays faster than floating point can represent).
    """
    if params.mu <= 0.0:
        raise ValueError("regularized fixed point needs mu > 0")
    dxi = grid.dxi
    c = _grid_weights(mol, dxi)
    m = c.size
    n = grid.n
    xi = grid.centers
    W = np.ones(n + m)  # trailing ghost values: extension by 1 beyond xi = 1
    g2 = 2.0 * params.gamma

    def vel(i):
        return float(np.dot(c, W[i + 1:i + 1 + m]))

    # first half-cell: from xi = 1 down to the last cell center
    v_prev = 1.0
    cut = None
    for i in range(n - 1, -1, -1):
        v_i = vel(i)
        if v_i < V_MIN:
            W[:i + 1] = 0.0
            cut = i
            break
        if i == n - 1:
            # half step from the boundary xi = 1
            xi_mid = 0.5 * (1.0 + xi[i])
            W[i] = np.exp(-params.mu * xi_mid ** (-g2) * (1.0 - xi[i]) / v_i)
        else:
            xi_mid = 0.5 * (xi[i] + xi[i + 1])
            v_mid = 0.5 * (v_i + v_prev)
            W[i] = W[i + 1] * np.exp(-params.mu * xi_mid ** (-g2) * dxi / v_mid)
        v_prev = v_i
    table = (xi.copy(), W[:n].copy())
    from .core import dissipation_wavenumber
    kd, xid = (None, None)
    if params.nu > 0.0:
        kd, xid = dissipation_wavenumber(params)
    fp = FixedPoint(kind="RegularizedWdelta", params=params,
                    kappa_d=kd, xi_d=xid, table=table)
    object.__setattr__(fp, "cutoff_index", cut)
    return fp


@dataclass
class RegularizedTrajectory:
    """Time evolution of the regularized equation with stored velocity history."""

    params: ModelParams
    mollifier: Mollifier
    grid: XiGrid
    snapshots: List[WField] = field(default_factory=list)
    history_times: np.ndarray = field(default_factory=lambda: np.empty(0))
    w_history: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))

    def velocity_at(self, k: int) -> np.ndarray:
        """Mollified velocity of the k-th stored state."""
        c = _grid_weights(self.mollifier, self.grid.dxi)
        m = c.size
        ext = np.concatenate((self.w_history[k], np.ones(m)))
        v = np.zeros(self.grid.n)
        for j in range(1, m + 1):
            v += c[j - 1] * ext[j:j + self.grid.n]
        return v


def evolve_regularized(initial, params: ModelParams, mol: Mollifier,
                       config: SolverConfig,
                       history_stride: int = 1) -> RegularizedTrajectory:
    """Upwind transport with frozen-per-step mollified velocity.

    w_t = v_delta w_xi - mu xi^(-2 gamma) w, with w extended by 1 beyond
    xi = 1 and outflow at xi = 0.  The (w, v) history is stored every
    history_stride accepted steps for characteristic tracing.
    """
    grid = XiGrid(config.n)
    if isinstance(initial, WField):
        w = initial.values.copy()
        t = initial.time
    else:
        prof = initial if isinstance(initial, InitialProfile) else InitialProfile.constant(float(initial))
        w = prof(grid.centers).astype(float)
        t = 0.0
    dxi = grid.dxi
    c = _grid_weights(mol, dxi)
    m = c.size
    xi_weight = np.maximum(grid.centers, config.clamp) ** (-2.0 * params.gamma)

    events = sorted(set(float(s) for s in config.snapshot_times
                        if t < s <= config.t_end) | {config.t_end})
    traj = RegularizedTrajectory(params=params, mollifier=mol, grid=grid)
    times, ws = [], []

    def velocity(wv):
        ext = np.concatenate((wv, np.ones(m)))
        v = np.zeros(grid.n)
        for j in range(1, m + 1):
            v += c[j - 1] * ext[j:j + grid.n]
        return v

    step = 0
    times.append(t); ws.append(w.copy())
    snap_req = set(float(s) for s in config.snapshot_times)
    for t_next in events:
        while t < t_next - 1e-13:
            v = velocity(w)
            vmax = max(float(np.max(v)), 1e-12)
            dt = min(config.cfl * dxi / max(vmax, 1.0), t_next - t)
            if dt * vmax / dxi > 1.0 + 1e-12:
                raise StabilityError("regularized CFL violated")
            ext = np.append(w, 1.0)
            w = w + dt * v * (ext[1:] - w) / dxi
            if params.mu > 0.0:
                w *= np.exp(-params.mu * xi_weight * dt)
            np.maximum(w, 0.0, out=w)
            t += dt
            step += 1
            if step % history_stride == 0:
                times.append(t); ws.append(w.copy())
        t = t_next
        if t_next in snap_req or t_next == config.t_end:
            traj.snapshots.append(WField(grid=grid, values=w.copy(), time=t))
    if times[-1] != t:
        times.append(t); ws.append(w.copy())
    traj.history_times = np.asarray(times)
    traj.w_history = np.asarray(ws)
    return traj


@dataclass(frozen=True)
class Characteristic:
    """A traced characteristic curve and the damping ODE value carried along it."""

    start_xi: float
    times: np.ndarray
    positions: np.ndarray
    carried_values: np.ndarray
    field_values: np.ndarray  # interpolated w(eta(t), t), for verification


def _interp_field(xi: np.ndarray, fvals: np.ndarray, x: float) -> float:
    return float(np.interp(x, xi, fvals))


def trace_characteristic(traj: RegularizedTrajectory, start_xi: float,
                         clamp: Optional[float] = None) -> Characteristic:
    """Integrate d eta/dt = -v_delta(eta, t) through the stored history.

    Explicit midpoint in time on the history grid; the carried value solves
    d w/dt = -mu eta^(-2 gamma) w with the exact per-step exponential factor
    evaluated at the midpoint position.
    """
    if not (0.0 < start_xi <= 1.0):
        raise ValueError(f"start_xi must lie in (0, 1], got {start_xi}")
    p = traj.params
    xi = traj.grid.centers
    if clamp is None:
        clamp = 0.5 * traj.grid.dxi
    g2 = 2.0 * p.gamma
    tt = traj.history_times
    eta = start_xi
    wc = _interp_field(xi, traj.w_history[0], start_xi)
    etas = [eta]
    carried = [wc]
    fields = [wc]
    for k in range(tt.size - 1):
        h = tt[k + 1] - tt[k]
        vk = traj.velocity_at(k)
        e_mid = eta - 0.5 * h * _interp_field(xi, vk, eta)
        e_mid = max(e_mid, 0.0)
        eta = max(eta - h * _interp_field(xi, vk, e_mid), 0.0)
        wc *= np.exp(-p.mu * max(e_mid, clamp) ** (-g2) * h)
        etas.append(eta)
        carried.append(wc)
        fields.append(_interp_field(xi, traj.w_history[k + 1], eta))
    return Characteristic(start_xi=start_xi, times=tt.copy(),
                          positions=np.asarray(etas),
                          carried_values=np.asarray(carried),
                          field_values=np.asarray(fields))
