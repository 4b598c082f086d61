"""Vanishing-viscosity behavior: anomaly, convergence rates, cutoff scaling.

Three views of the nu -> 0 limit: the long-time averaged dissipation stays
pinned near the input rate eps (the anomaly), the viscous fixed point
converges to the inviscid one in L2 at an alpha-dependent rate, and the
dissipation wavenumber kappa_d follows its closed-form asymptotics.
"""
import numpy as np

import cascade_lab as cl
from cascade_lab.harness import fit_convergence_rate
from cascade_lab.viscous import SolverConfig, dissipation_anomaly_sweep

p = cl.params_from_alpha(2.0, nu=1.0)

# a quick anomaly sweep (the acceptance suite runs the fully resolved one)
rows = dissipation_anomaly_sweep(p, [1.0, 0.3, 0.1],
                                 SolverConfig(n=1024, t_end=5.0),
                                 series_stride=10)
for r in rows:
    tag = "" if r.resolved else "  [under-resolved]"
    print(f"nu={r.nu:<5g} kappa_d={r.kappa_d:8.1f} "
          f"avg dissipation = {r.avg_dissipation:.4f}{tag}")

# L2 distance ||A^nu - A^0||^2 ~ nu^min(2, (alpha-1)/(3-alpha))
print()
for alpha in (2.0, 2.5):
    nus = np.geomspace(1e-6, 1e-2, 13)
    pairs = [(nu, cl.l2_distance_fixed_points(cl.params_from_alpha(alpha, nu=nu)))
             for nu in nus]
    fit = fit_convergence_rate(pairs)
    print(f"alpha={alpha}: squared-distance exponent {fit.exponent:.4f}")

# kappa_d ~ (eps / nu^3)^(1/(1+D)) for small nu
print()
for alpha in (5.0 / 3.0, 8.0 / 3.0):
    for nu in (1e-4, 1e-5, 1e-6):
        pp = cl.params_from_alpha(alpha, nu=nu)
        kd, _ = cl.dissipation_wavenumber(pp)
        ratio = kd / (pp.epsilon / nu ** 3) ** (1.0 / (1.0 + pp.D))
        print(f"alpha={alpha:.4f} nu={nu:g}: kappa_d / classical = {ratio:.6f}")
