"""Closed-form steady states of the cascade model and their spectra.

Walks through the parameter map (c <-> alpha), evaluates the inviscid and
viscous fixed points, and checks the two exact identities that anchor the
whole model: constant flux eps at the inviscid fixed point, and the energy
equality nu * ||A^nu||^2 = eps at the viscous one.
"""
import numpy as np

import cascade_lab as cl

# K41 scaling is c = 0, alpha = 5/3; fully intermittent is c = 1/2, alpha = 8/3
for c in (0.0, 1.0 / 6.0, 0.5):
    p = cl.params_from_c(c, nu=1.0)
    print(f"c={c:.4f}  alpha={p.alpha:.4f}  gamma={p.gamma:.4f}  D={p.D:.4f}")

p = cl.params_from_alpha(2.0, epsilon=1.0, nu=1.0)
kd, xid = cl.dissipation_wavenumber(p)
print(f"\nalpha=2, nu=1: kappa_d = {kd}  (xi_d = {xid})")

kappas = np.geomspace(1.0, 10.0 * kd, 200)
a0 = cl.fixed_point_inviscid(p, kappas)
anu = cl.fixed_point_viscous(p, kappas)
print(f"A^nu <= A^0 everywhere: {np.all(anu <= a0 + 1e-15)}")

# energy equality: exact quadrature of the closed form
for nu in (1.0, 1e-2, 1e-4):
    pp = cl.params_from_alpha(2.0, nu=nu)
    val = nu * cl.enstrophy(cl.viscous_fixed_point(pp), pp)
    print(f"nu = {nu:g}: nu * ||A^nu||^2 = {val:.12f}")

# the spectrum of the inviscid fixed point is an exact power law kappa^-alpha
E = np.column_stack((kappas, a0 ** 2))
slope, amp = cl.fit_power_law(E, 1.0, kd)
print(f"\nspectrum slope {slope:.8f} (exact: {-p.alpha})")

# flux is identically eps on the inviscid fixed point
grid = cl.XiGrid(512)
w = cl.WField(grid, np.ones(grid.n))
flux = cl.flux_profile(cl.w_to_a(w, p), p)
print(f"flux spread at A^0: {np.max(np.abs(flux - p.epsilon)):.2e}")
