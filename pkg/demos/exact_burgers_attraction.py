"""The inviscid rescaled equation solved exactly, and its finite-time attractor.

The rescaled inviscid model is a Burgers equation whose entropy solution we
evaluate pointwise with the Lax-Oleinik variational formula (no time
stepping).  Every nonnegative initial profile is absorbed by w == 1 no later
than rescaled time 2.
"""
import numpy as np

import cascade_lab as cl
from cascade_lab.inviscid import hopf_potential, lax_oleinik_eval, solve_on_grid

grid = cl.XiGrid(512)

# zero data: a single shock travels left from xi = 1 at speed 1/2
prof = cl.InitialProfile.constant(0.0)
pot = hopf_potential(prof)
for t in (0.5, 1.0, 1.5):
    fld = solve_on_grid(prof, grid, t)
    shock = grid.centers[np.argmax(fld.values > 0.5)]
    print(f"t={t:4.1f}  shock near xi = {shock:.4f}  (exact {1.0 - t / 2.0})")

# the ramp w0(xi) = xi steepens as w = xi / (1 - t) under its own advection
print(f"\nramp at (xi=0.4, t=0.5): "
      f"{lax_oleinik_eval(hopf_potential(cl.InitialProfile.ramp()), 0.4, 0.5)}"
      f"  (exact 0.8)")

# random piecewise-linear data is flat by t = 2, to machine precision
rng = np.random.default_rng(0)
p = cl.params_from_alpha(2.0)
for trial in range(3):
    prof = cl.InitialProfile.random(rng)
    rep = cl.verify_attraction(prof, p, n=512)
    print(f"trial {trial}: max |w(., {rep.t_rescaled}) - 1| = "
          f"{rep.max_deviation:.2e}  "
          f"(physical bound t = {rep.physical_time_bound:.4f})")
