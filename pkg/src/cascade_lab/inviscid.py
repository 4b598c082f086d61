"""Exact inviscid dynamics via the Lax-Oleinik variational formula.

The rescaled inviscid equation w_t = w w_xi on (0, 1) with w(1) = 1 is
extended to the whole line (0 to the left, 1 to the right) and solved in
closed form: for piecewise-linear initial data the variational potential is
piecewise quadratic, so the global minimizer is found exactly by comparing
per-piece stationary points and breakpoints.  No time stepping is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ModelParams, XiGrid, WField, rescaled_to_physical_time

__all__ = [
    "InitialProfile",
    "ExtendedProfile",
    "HopfPotential",
    "extend_profile",
    "hopf_potential",
    "lax_oleinik_minimizer",
    "lax_oleinik_eval",
    "solve_on_grid",
    "verify_attraction",
    "AttractionReport",
]

ATTRACTION_TIME_RESCALED = 2.0


@dataclass(frozen=True)
class InitialProfile:
    """Piecewise-linear initial datum w0 >= 0 on [0, 1]."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.breakpoints, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "breakpoints", x)
        object.__setattr__(self, "values", v)
        if x.ndim != 1 or x.shape != v.shape or x.size < 2:
            raise ValueError("breakpoints and values must be congruent 1d arrays")
        if abs(x[0]) > 1e-14 or abs(x[-1] - 1.0) > 1e-14:
            raise ValueError("breakpoints must span [0, 1]")
        if np.any(np.diff(x) <= 0.0):
            raise ValueError("breakpoints must be strictly increasing")
        if np.any(v < 0.0):
            raise ValueError("initial profile must be nonnegative")

    @classmethod
    def constant(cls, value: float) -> "InitialProfile":
        return cls(np.array([0.0, 1.0]), np.array([value, value]))

    @classmethod
    def ramp(cls) -> "InitialProfile":
        return cls(np.array([0.0, 1.0]), np.array([0.0, 1.0]))

    @classmethod
    def random(cls, rng: np.random.Generator, n_knots: int = 6,
               vmax: float = 2.0) -> "InitialProfile":
        """Seeded piecewise-linear profile with values in [0, vmax]."""
        interior = np.sort(rng.uniform(0.05, 0.95, size=max(n_knots - 2, 0)))
        x = np.concatenate(([0.0], interior, [1.0]))
        v = rng.uniform(0.0, vmax, size=x.size)
        return cls(x, v)

    def __call__(self, xi):
        return np.interp(xi, self.breakpoints, self.values)


@dataclass(frozen=True)
class ExtendedProfile:
    """Whole-line extension of an initial profile: 0 left of 0, 1 right of 1."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        inner = np.interp(y, self.breakpoints, self.values)
        return np.where(y < 0.0, 0.0, np.where(y > 1.0, 1.0, inner))[()]


def extend_profile(profile: InitialProfile) -> ExtendedProfile:
    """Extend the datum to the real line by 0 on the left and 1 on the right."""
    return ExtendedProfile(profile.breakpoints.copy(), profile.values.copy())


@dataclass(frozen=True)
class HopfPotential:
    """Piecewise-quadratic antiderivative h(y) of the extended initial datum.

    Stored per piece between knots: h(y) = h_k + v_k (y - y_k)
    + s_k (y - y_k)^2 / 2 on [y_k, y_{k+1}], with h == 0 for y <= 0 and
    h(y) = h(1) + (y - 1) for y >= 1.
    """

    knots: np.ndarray       # y_0 = 0 < ... < y_m = 1
    h_at_knots: np.ndarray  # h(y_k), h(0) = 0
    left_values: np.ndarray  # datum value at the left end of each piece
    slopes: np.ndarray       # datum slope on each piece

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        out = np.empty_like(y)
        below = y <= 0.0
        above = y >= 1.0
        mid = ~(below | above)
        out[below] = 0.0
        out[above] = self.h_at_knots[-1] + (y[above] - 1.0)
        if np.any(mid):
            idx = np.clip(np.searchsorted(self.knots, y[mid], side="right") - 1,
                          0, self.knots.size - 2)
            dy = y[mid] - self.knots[idx]
            out[mid] = (self.h_at_knots[idx] + self.left_values[idx] * dy
                        + 0.5 * self.slopes[idx] * dy * dy)
        return out[()]

    @property
    def total_mass(self) -> float:
        """h(1) = int_0^1 w0."""
        return float(self.h_at_knots[-1])


def hopf_potential(profile: InitialProfile) -> HopfPotential:
    """Exact piecewise-quadratic antiderivative of the extended datum."""
    ext = profile if isinstance(profile, ExtendedProfile) else extend_profile(profile)
    x, v = ext.breakpoints, ext.values
    dx = np.diff(x)
    slopes = np.diff(v) / dx
    piece_mass = 0.5 * (v[:-1] + v[1:]) * dx
    h = np.concatenate(([0.0], np.cumsum(piece_mass)))
    return HopfPotential(knots=x, h_at_knots=h, left_values=v[:-1], slopes=slopes)


def _candidates(pot: HopfPotential, xi: float, t: float) -> np.ndarray:
    """Candidate minimizers of f(y) = (xi - y)^2 / (2t) - h(y).

    f is piecewise quadratic, so the global minimum is attained at a knot or
    at an interior stationary point of a convex piece.
    """
    cands = [pot.knots]
    # right tail: h' = 1, stationary at y = xi + t
    if xi + t >= 1.0:
        cands.append(np.array([xi + t]))
    # left tail: h' = 0, stationary at y = xi (only relevant if xi <= 0)
    if xi <= 0.0:
        cands.append(np.array([xi]))
    # interior pieces: f'' = 1/t - s_k, interior stationary point when convex
    s = pot.slopes
    v = pot.left_values
    yk = pot.knots[:-1]
    yk1 = pot.knots[1:]
    curv = 1.0 / t - s
    with np.errstate(divide="ignore", invalid="ignore"):
        ystar = (xi / t + v - s * yk) / curv
    ok = (curv > 0.0) & (ystar > yk) & (ystar < yk1)
    if np.any(ok):
        cands.append(ystar[ok])
    return np.concatenate(cands)


def lax_oleinik_minimizer(pot: HopfPotential, xi: float, t: float) -> float:
    """Smallest global minimizer y* of (xi - y)^2 / (2t) - h(y)."""
    if t <= 0.0:
        raise ValueError(f"t must be positive, got {t}")
    y = np.sort(_candidates(pot, xi, t))
    f = (xi - y) ** 2 / (2.0 * t) - pot(y)
    fmin = float(np.min(f))
    scale = max(1.0, abs(fmin), float(np.max(np.abs(y))) ** 2 / (2.0 * t))
    tied = f <= fmin + 1e-12 * scale
    return float(y[tied][0])


def lax_oleinik_eval(pot: HopfPotential, xi: float, t: float) -> float:
    """Entropy solution value w(xi, t) = (y*(xi, t) - xi) / t."""
    y_star = lax_oleinik_minimizer(pot, xi, t)
    return max((y_star - xi) / t, 0.0)


def solve_on_grid(profile: InitialProfile, grid: XiGrid, t: float) -> WField:
    """Evaluate the exact solution at every cell center of a uniform grid."""
    pot = hopf_potential(profile)
    w = np.array([lax_oleinik_eval(pot, xi, t) for xi in grid.centers])
    return WField(grid=grid, values=w, time=t)


@dataclass(frozen=True)
class AttractionReport:
    """Deviation from the global attractor at a fixed rescaled time."""

    t_rescaled: float
    max_deviation: float
    physical_time_bound: float  # (2/3) eps^(-1/3) gamma
    attracted: bool


def verify_attraction(profile: InitialProfile, params: ModelParams,
                      n: int = 4096, margin: float = 0.05,
                      tol: float = 1e-12) -> AttractionReport:
    """Check that w(., 2 + margin) == 1 on the full grid.

    Every admissible solution reaches the inviscid fixed point by rescaled
    time 2, i.e. by physical time (2/3) eps^(-1/3) gamma.
    """
    t = ATTRACTION_TIME_RESCALED + margin
    field = solve_on_grid(profile, XiGrid(n), t)
    dev = float(np.max(np.abs(field.values - 1.0)))
    bound = rescaled_to_physical_time(ATTRACTION_TIME_RESCALED, params)
    return AttractionReport(t_rescaled=t, max_deviation=dev,
                            physical_time_bound=bound, attracted=dev < tol)
