"""The medium, its gap, and the two maps that carry the Bethe ansatz.

Run with ``python3 demos/medium_and_maps.py``.
"""
import numpy as np

from gapspec import medium, stringmap
from gapspec.medium import Branch, MediumParams

p = MediumParams()  # gap edges 1 and 1.2, atom at 1.1, beta = 1e-3
print(p)

# The permittivity is negative exactly inside the gap.  Away from it light
# propagates with index n; inside it decays with the index nu = sqrt(|eps|).
for w in (0.5, 0.99, 1.05, 1.1, 1.19, 1.5):
    br = medium.classify(p, w)
    eps = medium.permittivity(p, w)
    if br is Branch.GAP:
        print(f"w={w:5.2f}  {br.value:5s}  eps={eps:+.6f}  nu={medium.gap_decay_index(p, w):.6f}"
              f"  kappa={medium.kappa(p, w):.6f}  1/kappa={medium.penetration_length(p, w):.4f}")
    else:
        print(f"w={w:5.2f}  {br.value:5s}  eps={eps:+.6f}  n={medium.refractive_index(p, w):.6f}")

# kappa falls monotonically across the gap: radiation near the lower edge is
# confined tightly, near the upper edge it leaks out.
lo, hi = medium.branch_window(p, Branch.GAP)
xs = np.linspace(lo, hi, 7)
print("kappa across the gap:", " ".join(f"{k:.4g}" for k in medium.kappa(p, xs)))

# Attraction needs h'(lambda) > 0.  With the atom inside the gap this holds on
# the lower branch only, so ordinary bound states live below the gap.
for br in (Branch.LOWER, Branch.UPPER):
    lo, hi = medium.branch_window(p, br)
    dh = stringmap.rapidity_derivative(p, np.linspace(lo, hi, 1000))
    print(f"{br.value:5s} branch: h' > 0 on {np.sum(dh > 0)}/1000 samples")

# Inside the gap the rapidity is governed by phi(xi) = (xi - w12) f(xi).
# Its expansion around the atom fixes every energy scale of the gap solitons.
lin = stringmap.linearize(p)
print(f"a = {lin.a:.12f}, b = {lin.b:.6f}, quadratic model good to 1% within "
      f"|xi - w12| < {lin.valid_radius:.3e}")
for dx in (-2e-3, -1e-3, 1e-3):
    xi = p.omega12 + dx
    print(f"  phi({xi:.4f}) = {stringmap.phi(p, xi):+.6e}   linear {lin.linear(xi):+.6e}"
          f"   quadratic {lin.quadratic(xi):+.6e}")

# The printed continuation off the real axis, and its exact conjugation symmetry.
k, h = stringmap.continue_gap(p, 1.099, 1e-4)
km, hm = stringmap.continue_gap(p, 1.099, -1e-4)
print(f"continue_gap(1.099, +1e-4): k={k:.6f}  h={h:.6e}")
print(f"conjugate at -1e-4: {km == k.conjugate() and hm == h.conjugate()}")
