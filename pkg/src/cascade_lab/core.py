"""Parameter algebra, coordinate transforms, fixed points, and diagnostics.

The model lives in two coordinate systems:

* physical: energy density amplitude a(kappa, t) on kappa >= 1, with
  boundary value a(1) = epsilon^(1/3),
* rescaled: w(xi, t) on 0 < xi < 1 with w(1) = 1, where
  xi = kappa^(-1/gamma) and w = epsilon^(-1/3) xi^(-gamma*alpha/2) a.

All solvers evolve w on a uniform cell-centered grid over [0, 1]; the
physical view is computed on demand.  Everything in this module is a pure
function over immutable value objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "ParameterDomainError",
    "InconsistentFieldError",
    "DivergentIntegralError",
    "InviscidLimitError",
    "FitError",
    "ModelParams",
    "XiGrid",
    "WField",
    "AFieldView",
    "FixedPoint",
    "params_from_c",
    "params_from_alpha",
    "kappa_to_xi",
    "xi_to_kappa",
    "rescaled_to_physical_time",
    "physical_to_rescaled_time",
    "a_to_w",
    "w_to_a",
    "fixed_point_inviscid",
    "fixed_point_viscous",
    "dissipation_wavenumber",
    "fixed_point_w",
    "energy",
    "enstrophy",
    "l2_distance_fixed_points",
    "flux_profile",
    "spectrum",
    "fit_power_law",
]

BOUNDARY_TOL = 1e-9


class ParameterDomainError(ValueError):
    """A model parameter is outside its admissible range."""


class InconsistentFieldError(ValueError):
    """A field violates its boundary condition or sign constraint."""


class DivergentIntegralError(ValueError):
    """The requested integral diverges and needs a finite truncation."""


class InviscidLimitError(ValueError):
    """Operation requires nu > 0; the inviscid case has its own closed form."""


class FitError(ValueError):
    """Power-law fit window is empty, degenerate, or contains bad values."""


@dataclass(frozen=True)
class ModelParams:
    """Consistent parameter tuple (c, alpha, gamma, D, epsilon, nu, mu).

    alpha = 5/3 + 2c, D = 3 - 6c, gamma = 1/(alpha - 1),
    mu = (1/3) nu epsilon^(-1/3) gamma.
    """

    c: float
    alpha: float
    gamma: float
    D: float
    epsilon: float
    nu: float
    mu: float

    def __post_init__(self):
        if not (0.0 <= self.c <= 0.5):
            raise ParameterDomainError(f"c = {self.c} outside [0, 1/2]")
        if self.epsilon <= 0.0:
            raise ParameterDomainError(f"epsilon = {self.epsilon} must be positive")
        if self.nu < 0.0:
            raise ParameterDomainError(f"nu = {self.nu} must be nonnegative")

    @property
    def viscous(self) -> bool:
        return self.nu > 0.0


def _build_params(alpha: float, epsilon: float, nu: float) -> ModelParams:
    # clamp boundary roundoff (5/3 + 2*0.5 lands one ulp above 8/3), then
    # renormalize c from alpha so the c <-> alpha round trip is exact
    alpha = min(max(alpha, 5.0 / 3.0), 8.0 / 3.0)
    c = min(max((alpha - 5.0 / 3.0) / 2.0, 0.0), 0.5)
    gamma = 1.0 / (alpha - 1.0)
    D = 3.0 - 6.0 * c
    mu = nu * epsilon ** (-1.0 / 3.0) * gamma / 3.0
    return ModelParams(c=c, alpha=alpha, gamma=gamma, D=D,
                       epsilon=epsilon, nu=nu, mu=mu)


def params_from_c(c: float, epsilon: float = 1.0, nu: float = 0.0) -> ModelParams:
    """Build the full parameter tuple from the intermittency exponent c."""
    if not (0.0 <= c <= 0.5):
        raise ParameterDomainError(f"c = {c} outside [0, 1/2]")
    if epsilon <= 0.0:
        raise ParameterDomainError(f"epsilon = {epsilon} must be positive")
    if nu < 0.0:
        raise ParameterDomainError(f"nu = {nu} must be nonnegative")
    return _build_params(5.0 / 3.0 + 2.0 * c, epsilon, nu)


def params_from_alpha(alpha: float, epsilon: float = 1.0, nu: float = 0.0) -> ModelParams:
    """Build the parameter tuple from the spectrum exponent alpha in [5/3, 8/3]."""
    if not (5.0 / 3.0 - 1e-14 <= alpha <= 8.0 / 3.0 + 1e-14):
        raise ParameterDomainError(f"alpha = {alpha} outside [5/3, 8/3]")
    if epsilon <= 0.0:
        raise ParameterDomainError(f"epsilon = {epsilon} must be positive")
    if nu < 0.0:
        raise ParameterDomainError(f"nu = {nu} must be nonnegative")
    return _build_params(alpha, epsilon, nu)


# ---------------------------------------------------------------------------
# grids and fields

@dataclass(frozen=True)
class XiGrid:
    """Uniform cell-centered grid on [0, 1]: xi_i = (i + 1/2) / n."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ParameterDomainError(f"grid needs at least 2 cells, got {self.n}")

    @property
    def dxi(self) -> float:
        return 1.0 / self.n

    @property
    def centers(self) -> np.ndarray:
        return (np.arange(self.n) + 0.5) / self.n


@dataclass(frozen=True)
class WField:
    """Rescaled solution w at the cell centers of a uniform grid, at one time."""

    grid: XiGrid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.shape != (self.grid.n,):
            raise InconsistentFieldError(
                f"values shape {v.shape} does not match grid n = {self.grid.n}")
        if np.any(v < 0.0):
            raise InconsistentFieldError("w must be nonnegative")


@dataclass(frozen=True)
class AFieldView:
    """Physical-variable view a(kappa) on kappa >= 1, kappa_0 = 1 pinned."""

    kappas: np.ndarray
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        k = np.asarray(self.kappas, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "kappas", k)
        object.__setattr__(self, "values", v)
        if k.shape != v.shape or k.ndim != 1:
            raise InconsistentFieldError("kappas and values must be 1d and congruent")
        if abs(k[0] - 1.0) > BOUNDARY_TOL:
            raise InconsistentFieldError(f"first wavenumber must be 1, got {k[0]}")
        if np.any(np.diff(k) <= 0.0):
            raise InconsistentFieldError("kappas must be strictly increasing")
        if np.any(v < 0.0):
            raise InconsistentFieldError("a must be nonnegative")


@dataclass(frozen=True)
class FixedPoint:
    """Steady state record; closed-form kinds evaluate anywhere without a table.

    kind is one of 'InviscidA0', 'ViscousAnu', 'RescaledW', 'RegularizedWdelta'.
    """

    kind: str
    params: ModelParams
    kappa_d: Optional[float] = None
    xi_d: Optional[float] = None
    table: Optional[tuple] = None  # (xi array, w array) for RegularizedWdelta

    def __call__(self, x):
        if self.kind == "InviscidA0":
            return fixed_point_inviscid(self.params, x)
        if self.kind == "ViscousAnu":
            return fixed_point_viscous(self.params, x)
        if self.kind == "RescaledW":
            return fixed_point_w(self.params, x)
        if self.kind == "RegularizedWdelta":
            xi, w = self.table
            return np.interp(x, xi, w)
        raise ValueError(f"unknown fixed point kind {self.kind!r}")


def inviscid_fixed_point(params: ModelParams) -> FixedPoint:
    return FixedPoint(kind="InviscidA0", params=params)


def viscous_fixed_point(params: ModelParams) -> FixedPoint:
    kd, xid = dissipation_wavenumber(params)
    return FixedPoint(kind="ViscousAnu", params=params, kappa_d=kd, xi_d=xid)


def rescaled_fixed_point(params: ModelParams) -> FixedPoint:
    kd, xid = dissipation_wavenumber(params)
    return FixedPoint(kind="RescaledW", params=params, kappa_d=kd, xi_d=xid)


# ---------------------------------------------------------------------------
# coordinate and field transforms

def kappa_to_xi(kappa, params: ModelParams):
    """xi = kappa^(-1/gamma); maps [1, inf) onto (0, 1]."""
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa < 1.0):
        raise ParameterDomainError("kappa must be >= 1")
    return kappa ** (-1.0 / params.gamma)


def xi_to_kappa(xi, params: ModelParams):
    """kappa = xi^(-gamma); inverse of kappa_to_xi."""
    xi = np.asarray(xi, dtype=float)
    if np.any(xi <= 0.0) or np.any(xi > 1.0):
        raise ParameterDomainError("xi must lie in (0, 1]")
    return xi ** (-params.gamma)


def rescaled_to_physical_time(t_rescaled: float, params: ModelParams) -> float:
    return t_rescaled * params.gamma * params.epsilon ** (-1.0 / 3.0) / 3.0


def physical_to_rescaled_time(t_physical: float, params: ModelParams) -> float:
    return 3.0 * t_physical * params.epsilon ** (1.0 / 3.0) / params.gamma


def w_to_a(field: WField, params: ModelParams) -> AFieldView:
    """Physical view of a rescaled field.

    Wavenumbers are the mapped cell centers in increasing kappa order, with
    the boundary point (kappa = 1, a = epsilon^(1/3)) prepended.
    """
    xi = field.grid.centers
    eps3 = params.epsilon ** (1.0 / 3.0)
    a = eps3 * xi ** (params.gamma * params.alpha / 2.0) * field.values
    kap = xi_to_kappa(xi, params)
    kappas = np.concatenate(([1.0], kap[::-1]))
    values = np.concatenate(([eps3], a[::-1]))
    return AFieldView(kappas=kappas, values=values,
                      time=rescaled_to_physical_time(field.time, params))


def a_to_w(view: AFieldView, params: ModelParams) -> WField:
    """Rescaled field from a physical view produced on a uniform xi grid.

    The leading (kappa = 1) boundary sample must equal epsilon^(1/3); the
    remaining wavenumbers must map back onto uniform cell centers.
    """
    eps3 = params.epsilon ** (1.0 / 3.0)
    if abs(view.values[0] - eps3) > BOUNDARY_TOL * max(1.0, eps3):
        raise InconsistentFieldError(
            f"a(1) = {view.values[0]} but boundary condition requires {eps3}")
    kap = view.kappas[1:]
    xi = kappa_to_xi(kap, params)[::-1]
    n = xi.size
    grid = XiGrid(n)
    if not np.allclose(xi, grid.centers, rtol=0.0, atol=1e-9 / n):
        raise InconsistentFieldError(
            "wavenumbers do not map onto a uniform cell-centered xi grid")
    a = view.values[1:][::-1]
    w = a / eps3 * xi ** (-params.gamma * params.alpha / 2.0)
    return WField(grid=grid, values=w,
                  time=physical_to_rescaled_time(view.time, params))


# ---------------------------------------------------------------------------
# closed-form fixed points

def fixed_point_inviscid(params: ModelParams, kappa):
    """A0(kappa) = epsilon^(1/3) kappa^(-alpha/2)."""
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa < 1.0):
        raise ParameterDomainError("kappa must be >= 1")
    return params.epsilon ** (1.0 / 3.0) * kappa ** (-params.alpha / 2.0)


def fixed_point_viscous(params: ModelParams, kappa):
    """Viscous steady state: inertial branch up to kappa_d, zero beyond."""
    if not params.viscous:
        raise InviscidLimitError("nu = 0: use fixed_point_inviscid")
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa < 1.0):
        raise ParameterDomainError("kappa must be >= 1")
    a3 = 3.0 - params.alpha
    kd, _ = dissipation_wavenumber(params)
    eps3 = params.epsilon ** (1.0 / 3.0)
    branch = kappa ** (-params.alpha / 2.0) * (
        eps3 + params.nu / (3.0 * a3) * (1.0 - kappa ** a3))
    return np.where(kappa <= kd, np.maximum(branch, 0.0), 0.0)[()]


def dissipation_wavenumber(params: ModelParams):
    """(kappa_d, xi_d): the explicit dissipation cutoff of the viscous model.

    kappa_d = [1 + 3(3-alpha) eps^(1/3)/nu]^(1/(3-alpha)) and
    xi_d = [1 + (2 gamma - 1)/mu]^(1/(1-2 gamma)); the two satisfy
    kappa_d = xi_d^(-gamma) identically.
    """
    if not params.viscous:
        raise InviscidLimitError("nu = 0: the dissipation cutoff is at infinity")
    a3 = 3.0 - params.alpha
    eps3 = params.epsilon ** (1.0 / 3.0)
    kd = (1.0 + 3.0 * a3 * eps3 / params.nu) ** (1.0 / a3)
    g2 = 2.0 * params.gamma - 1.0
    xid = (1.0 + g2 / params.mu) ** (1.0 / (-g2))
    return kd, xid


def fixed_point_w(params: ModelParams, xi):
    """Rescaled steady state W: W(1) = 1, vanishing at and below xi_d."""
    if not params.viscous:
        raise InviscidLimitError("nu = 0: the rescaled fixed point is w == 1")
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0.0) or np.any(xi > 1.0):
        raise ParameterDomainError("xi must lie in [0, 1]")
    g2 = 2.0 * params.gamma - 1.0
    _, xid = dissipation_wavenumber(params)
    with np.errstate(divide="ignore"):
        branch = 1.0 + params.mu / g2 * (1.0 - xi ** (-g2))
    return np.where(xi > xid, np.maximum(branch, 0.0), 0.0)[()]


# ---------------------------------------------------------------------------
# norms

def _w_values_on_grid(field, params: ModelParams):
    if isinstance(field, WField):
        return field.grid, field.values
    if isinstance(field, AFieldView):
        wf = a_to_w(field, params)
        return wf.grid, wf.values
    raise TypeError(f"expected WField or AFieldView, got {type(field)!r}")


def energy(field, params: ModelParams, kappa_max: Optional[float] = None) -> float:
    """Squared energy norm int_1^inf a^2 dkappa.

    Fields are integrated by the midpoint rule in xi space via the exact
    identity |a|^2 = gamma eps^(2/3) int_0^1 w^2 dxi.  Closed-form fixed
    points use exact antiderivatives.
    """
    if isinstance(field, FixedPoint):
        return _fixed_point_energy(field, kappa_max)
    grid, w = _w_values_on_grid(field, params)
    xi = grid.centers
    if kappa_max is not None:
        w = np.where(xi >= kappa_max ** (-1.0 / params.gamma), w, 0.0)
    return params.gamma * params.epsilon ** (2.0 / 3.0) * grid.dxi * float(np.sum(w * w))


def enstrophy(field, params: ModelParams, kappa_max: Optional[float] = None) -> float:
    """Squared enstrophy norm int_1^inf kappa^2 a^2 dkappa.

    In xi space this is gamma eps^(2/3) int_0^1 xi^(-2 gamma) w^2 dxi; the
    singular weight is only ever evaluated at cell centers.  For the
    inviscid fixed point the integral diverges and a finite kappa_max is
    mandatory.
    """
    if isinstance(field, FixedPoint):
        return _fixed_point_enstrophy(field, kappa_max)
    grid, w = _w_values_on_grid(field, params)
    xi = grid.centers
    if kappa_max is not None:
        w = np.where(xi >= kappa_max ** (-1.0 / params.gamma), w, 0.0)
    weight = xi ** (-2.0 * params.gamma)
    return params.gamma * params.epsilon ** (2.0 / 3.0) * grid.dxi * float(
        np.sum(weight * w * w))


def _power_integral(p: float, lo: float, hi: float) -> float:
    """int_lo^hi kappa^p dkappa, hi may be inf when p < -1."""
    if math.isinf(hi):
        if p >= -1.0:
            raise DivergentIntegralError(f"kappa^{p} is not integrable at infinity")
        return -lo ** (p + 1.0) / (p + 1.0)
    if abs(p + 1.0) < 1e-13:
        return math.log(hi / lo)
    return (hi ** (p + 1.0) - lo ** (p + 1.0)) / (p + 1.0)


def _fixed_point_energy(fp: FixedPoint, kappa_max: Optional[float]) -> float:
    p = fp.params
    eps23 = p.epsilon ** (2.0 / 3.0)
    if fp.kind == "InviscidA0":
        hi = math.inf if kappa_max is None else kappa_max
        return eps23 * _power_integral(-p.alpha, 1.0, hi)
    if fp.kind == "ViscousAnu":
        hi = fp.kappa_d if kappa_max is None else min(kappa_max, fp.kappa_d)
        return _anu_moment_integral(p, 0.0, 1.0, hi)
    raise TypeError(f"no closed-form energy for kind {fp.kind!r}")


def _fixed_point_enstrophy(fp: FixedPoint, kappa_max: Optional[float]) -> float:
    p = fp.params
    if fp.kind == "InviscidA0":
        if kappa_max is None:
            raise DivergentIntegralError(
                "enstrophy of the inviscid fixed point diverges; pass kappa_max")
        return p.epsilon ** (2.0 / 3.0) * _power_integral(2.0 - p.alpha, 1.0, kappa_max)
    if fp.kind == "ViscousAnu":
        hi = fp.kappa_d if kappa_max is None else min(kappa_max, fp.kappa_d)
        return _anu_moment_integral(p, 2.0, 1.0, hi)
    raise TypeError(f"no closed-form enstrophy for kind {fp.kind!r}")


def _anu_moment_integral(p: ModelParams, moment: float, lo: float, hi: float) -> float:
    """int_lo^hi kappa^moment Anu(kappa)^2 dkappa by exact antiderivatives.

    Anu^2 = kappa^(-alpha) (E + B - B kappa^(3-alpha))^2 with
    E = eps^(1/3), B = nu/(3(3-alpha)); expanding gives three power terms.
    """
    a3 = 3.0 - p.alpha
    E = p.epsilon ** (1.0 / 3.0)
    B = p.nu / (3.0 * a3)
    c0 = (E + B) ** 2
    c1 = -2.0 * (E + B) * B
    c2 = B * B
    base = moment - p.alpha
    return (c0 * _power_integral(base, lo, hi)
            + c1 * _power_integral(base + a3, lo, hi)
            + c2 * _power_integral(base + 2.0 * a3, lo, hi))


def l2_distance_fixed_points(params: ModelParams) -> float:
    """Squared L2([1, inf)) distance between the viscous and inviscid fixed points.

    Exact piecewise quadrature: the tail eps^(2/3) int_{kd}^inf kappa^-alpha
    plus the inertial-range mismatch
    (nu^2 / 9(3-alpha)^2) int_1^{kd} kappa^-alpha (1 - kappa^(3-alpha))^2.
    """
    if not params.viscous:
        return 0.0
    a3 = 3.0 - params.alpha
    kd, _ = dissipation_wavenumber(params)
    tail = params.epsilon ** (2.0 / 3.0) * _power_integral(-params.alpha, kd, math.inf)
    pref = params.nu ** 2 / (9.0 * a3 * a3)
    # (1 - k^a3)^2 = 1 - 2 k^a3 + k^(2 a3)
    inner = (_power_integral(-params.alpha, 1.0, kd)
             - 2.0 * _power_integral(-params.alpha + a3, 1.0, kd)
             + _power_integral(-params.alpha + 2.0 * a3, 1.0, kd))
    return tail + pref * inner


# ---------------------------------------------------------------------------
# diagnostics

def flux_profile(view: AFieldView, params: ModelParams) -> np.ndarray:
    """Energy flux Pi(kappa) = kappa^(3c + 5/2) a^3, evaluated pointwise."""
    return view.kappas ** (3.0 * params.c + 2.5) * view.values ** 3


def spectrum(view: AFieldView) -> np.ndarray:
    """Energy spectrum E(kappa) = a(kappa)^2 as a (kappa, E) table."""
    return np.column_stack((view.kappas, view.values ** 2))


def fit_power_law(table: np.ndarray, kappa_lo: float, kappa_hi: float):
    """Least-squares slope of log E against log kappa inside [kappa_lo, kappa_hi].

    Returns (slope, intercept).  Refuses windows with fewer than 4 points or
    nonpositive spectrum values.
    """
    table = np.asarray(table, dtype=float)
    k = table[:, 0]
    E = table[:, 1]
    mask = (k >= kappa_lo) & (k <= kappa_hi)
    if int(np.sum(mask)) < 4:
        raise FitError(
            f"need at least 4 points in [{kappa_lo}, {kappa_hi}], got {int(np.sum(mask))}")
    if np.any(E[mask] <= 0.0):
        raise FitError("spectrum values in the fit window must be positive")
    slope, intercept = np.polyfit(np.log(k[mask]), np.log(E[mask]), 1)
    return float(slope), float(intercept)
