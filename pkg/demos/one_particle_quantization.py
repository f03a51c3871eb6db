"""Real one-particle states in a sphere of radius L.

For one particle the ansatz equations reduce to the phase condition
``k(w) L + theta(h(w)) = pi (2m + 1)`` with the scattering phase theta.
"""
import numpy as np

from gapspec import bae, stringmap
from gapspec.medium import Branch, MediumParams

p = MediumParams(L=1e4)
roots = np.array([bae.solve_one_particle(p, Branch.LOWER, m) for m in range(200)])
res = [abs(bae.one_particle_residual(p, w)) for w in roots]
print(f"{bae.mode_count(p):d} lower-branch modes in the guarded window")
print(f"first roots: {np.round(roots[:5], 8)}")
print(f"max residual over 200 roots: {max(res):.2e}")

# As beta -> 0 the scattering phase drops out and k L = pi (2m + 1).
free = MediumParams(beta=1e-12, L=1e4)
w = bae.solve_one_particle(free, Branch.LOWER, 100)
print(f"beta -> 0, m=100: k L / pi = {stringmap.momentum_real(free, w) * free.L / np.pi:.9f}")

# Upper-branch states exist as well; the window there is cut at 10 * omega_par.
# The phase does not start at zero on that window, so mode labels start higher.
modes = bae.mode_range(p, Branch.UPPER)
up = [bae.solve_one_particle(p, Branch.UPPER, m) for m in modes[:3]]
print(f"upper-branch modes {modes.start}..{modes.stop - 1}; first roots {np.round(up, 10)}")
