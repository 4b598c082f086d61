"""Numerical laboratory for a continuous model of the turbulent energy cascade.

A damped Burgers equation in frequency space: exact inviscid solutions via
the variational (Hopf/Lax-Oleinik) formula, closed-form viscous fixed points
with an explicit dissipation cutoff, a shock-capturing finite-volume solver,
a one-sided Leray regularization, and a dyadic shell-model comparator.
"""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    AFieldView,
    FixedPoint,
    ModelParams,
    WField,
    XiGrid,
    a_to_w,
    dissipation_wavenumber,
    energy,
    enstrophy,
    fit_power_law,
    fixed_point_inviscid,
    fixed_point_viscous,
    fixed_point_w,
    flux_profile,
    inviscid_fixed_point,
    kappa_to_xi,
    l2_distance_fixed_points,
    params_from_alpha,
    params_from_c,
    rescaled_fixed_point,
    spectrum,
    viscous_fixed_point,
    w_to_a,
    xi_to_kappa,
)
from .inviscid import (  # noqa: F401
    InitialProfile,
    HopfPotential,
    extend_profile,
    hopf_potential,
    lax_oleinik_eval,
    lax_oleinik_minimizer,
    solve_on_grid,
    verify_attraction,
)
from .viscous import (  # noqa: F401
    SolverConfig,
    Trajectory,
    cfl_dt,
    dissipation_anomaly_sweep,
    evolve,
    godunov_step,
    time_avg_dissipation,
)
from .leray import (  # noqa: F401
    Characteristic,
    Mollifier,
    evolve_regularized,
    fixed_point_regularized,
    make_mollifier,
    mollify,
    trace_characteristic,
)
from .shell import (  # noqa: F401
    ShellState,
    shell_evolve,
    shell_rhs,
    shell_steady_slope,
    shell_steady_state,
)
