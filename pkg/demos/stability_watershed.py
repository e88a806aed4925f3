"""Orbital stability on both sides of the critical exponent p = 7/3.

Below criticality (p = 2) a perturbed ground state stays near the orbit
{e^{i theta} Q(. + tau)} forever: the orbital distance oscillates at the
size of the perturbation.  Above criticality (p = 3) the scaling
direction is unstable: data T_{1.05} Q, a one-percent-ish deformation
along it, runs away by an order of magnitude almost immediately.

Run:  python3 demos/stability_watershed.py
"""

import numpy as np

import hwlab.evolution as ev
import hwlab.functionals as fl
import hwlab.solitary as sol
import hwlab.spectral as sp
from hwlab.functionals import ModelParams

# --- stable side: p = 2 with a random X-norm perturbation ---------------
grid = sp.make_grid(128, 128, 40.0, 40.0)
params = ModelParams(p=2.0)
q = sol.solve_nehari(grid, params, tol=1e-7).q

delta = 1e-2
rng = np.random.default_rng(7)
noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
noise *= np.exp(-(grid.x[:, None] ** 2 + grid.y[None, :] ** 2) / 16.0)
noise_f = sp.physical_field(grid, noise)
u0 = sp.physical_field(
    grid, q.values + delta * fl.x_norm(q) / fl.x_norm(noise_f) * noise_f.values)

print("p = 2: evolving a delta = 1e-2 perturbation of Q to T = 10 ...")
tr = ev.evolve(u0, p=2.0, T=10.0, dt=4e-3, sample_stride=50, reference=q)
d = tr.orbital_distance
print(f"  initial distance {d[0]:.4f}, max {d.max():.4f}, final {d[-1]:.4f}")
print(f"  stays within {d.max() / d[0]:.2f}x of the initial distance: STABLE")

# --- unstable side: p = 3 with a scaling deformation ---------------------
grid3 = sp.make_grid(128, 2048, 20.0, 40.0)
params3 = ModelParams(p=3.0)
q3 = sol.solve_nehari(grid3, params3, tol=1e-7).q

u0 = sol.t_lambda(q3, 1.05, tail_tol=np.inf)
d0 = sol.orbital_fit(u0, q3).distance
print(f"\np = 3: evolving T_1.05 Q (initial distance {d0:.4f}) ...")
tr3 = ev.evolve(u0, p=3.0, T=20.0, dt=8e-4, sample_stride=50, reference=q3,
                distance_stop=12.0 * d0, ham_drift_abort=5e-2)
for t, dist in zip(tr3.times[::4], tr3.orbital_distance[::4]):
    print(f"  t = {t:5.2f}   distance {dist:8.4f}   ({dist / d0:5.1f}x)")
print(f"  grew {tr3.orbital_distance.max() / d0:.1f}x by t = {tr3.times[-1]:.2f}: "
      "UNSTABLE (run stopped at the distance threshold)")

# the same deformation on the stable side, for contrast
u0c = sol.t_lambda(q, 1.05, tail_tol=1e-3)
d0c = sol.orbital_fit(u0c, q).distance
trc = ev.evolve(u0c, p=2.0, T=10.0, dt=4e-3, sample_stride=50, reference=q)
print(f"\np = 2 control with the same T_1.05 deformation: "
      f"max growth {trc.orbital_distance.max() / d0c:.2f}x over T = 10")
