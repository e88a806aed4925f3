"""The action along the mass-preserving scaling family.

T_lambda u = lambda^{3/4} u(lambda^{1/2} x, lambda y) keeps the L2 norm
fixed while trading x regularity against y regularity.  Evaluating the
action S along lambda -> T_lambda Q classifies the ground state: below
the critical exponent p = 7/3 the curve is convex at lambda = 1 (the
wave sits in a well; perturbations oscillate), above it the curve is
concave (lambda = 1 is a maximum; the scaling direction is the escape
route that drives instability).

Run:  python3 demos/scaling_landscape.py
"""

import numpy as np

import hwlab.functionals as fl
import hwlab.solitary as sol
import hwlab.spectral as sp
from hwlab.functionals import ModelParams

for p, label in ((2.0, "subcritical  (p = 2   < 7/3)"),
                 (3.0, "supercritical(p = 3   > 7/3)")):
    params = ModelParams(p=p)
    grid = sp.make_grid(128, 2048, 20.0, 40.0)
    state = sol.solve_nehari(grid, params, tol=1e-7)
    q = state.q

    print(f"\n{label}: m = {state.action_value:.8f}")
    lams = np.geomspace(0.8, 1.25, 9)
    vals = [fl.action(sol.t_lambda(q, float(lam), tail_tol=1e-3), params)
            for lam in lams]
    for lam, val in zip(lams, vals):
        bar = "#" * int(round(4000 * (val - min(vals))))
        print(f"  lambda {lam:6.3f}   S = {val:.8f}  {bar}")

    shape = "maximum" if np.argmax(vals) == 4 else "minimum"
    print(f"  interior {shape} at lambda = 1")

    sv = sol.second_variation_scaling(q, params, tail_tol=1e-3)
    print(f"  d2/dlambda2 S(T_lambda Q)|_1: analytic {sv.analytic:+.6f}, "
          f"numeric {sv.numeric:+.6f}")

    pairing_below = sol.scaling_pairing(sol.t_lambda(q, 0.95, tail_tol=1e-3),
                                        params, tail_tol=1e-3)
    pairing_above = sol.scaling_pairing(sol.t_lambda(q, 1.05, tail_tol=1e-3),
                                        params, tail_tol=1e-3)
    print(f"  scaling pairing at T_0.95 Q: {pairing_below:+.4f}, "
          f"at T_1.05 Q: {pairing_above:+.4f}")

print("\nthe scaling direction itself:")
params = ModelParams(p=3.0)
grid = sp.make_grid(128, 2048, 20.0, 40.0)
q = sol.solve_nehari(grid, params, tol=1e-7).q
psi = sol.psi_omega(q, tail_tol=1e-3)
ortho = abs(sp.l2_inner(q, psi).real) / sp.l2_norm_sq(q)
print(f"  psi = (3/4)Q + (x/2) dx Q + y dy Q,  |<Q, psi>| / ||Q||^2 = {ortho:.2e}")
print("  (orthogonal because T_lambda is an L2 isometry)")
