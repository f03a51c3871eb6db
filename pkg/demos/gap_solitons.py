"""Gap pairs and gap solitons at three levels of approximation.

The linear map gives the closed-form spectrum, the quadratic correction adds
the band and the effective mass, and the exact per-pair equations show how far
those leading-order formulas can be trusted.
"""
import numpy as np

from gapspec import spectrum, stringmap
from gapspec.medium import MediumParams

p = MediumParams()
lin = stringmap.linearize(p)

pair = spectrum.gap_pair(p, 1e-4)
print(f"gap pair: xi = {pair.xi[0]:.10f}, eta = {pair.eta[0]:.4e}, q = {pair.momentum_per_particle:.4e}")
print(f"  size 1/kappa = {pair.size:.4f}, energy {pair.total_energy:.10f} < 2 w12 = {2 * p.omega12}")

print("\nlinear solitons (even strings)")
for l in (1, 2, 5, 10, spectrum.l_max(p)):
    s = spectrum.gap_soliton_linear(p, l)
    print(f"  l={l:3d}  E={s.total_energy:.10f}  eps={s.energy_per_particle:.8f}  size={s.size:.5f}")
print(f"  splitting l=4 into 1+3 costs U_d = {spectrum.dissociation_energy(p, 4, 1):.6e}")

print("\nquadratic corrections (valid for l <= %d at these parameters)" % spectrum.l_valid(p))
for l in (1, 2):
    s = spectrum.gap_soliton_corrected(p, l)
    print(f"  l={l}  Delta={s.band_halfwidth:.4e}  m={s.effective_mass:.4e}  "
          f"band bottom eps={s.energy_per_particle:.10f}")

print("\nexact solutions of Re h = H, Im h = beta (l - j + 1/2)")
for l in (1, 2, 3):
    x = spectrum.gap_soliton_exact(p, l, 1e-5)
    dev = np.max(np.abs(x.xi - spectrum.linear_frequencies(p, l)))
    print(f"  l={l}  xi={np.round(x.xi, 8)}  max shift from linear {dev:.3e}  "
          f"NC {'ok' if x.check_nc().passed else 'violated'}")

# The band formulas are leading order in beta/a.  Their accuracy against the
# exact band improves linearly as beta shrinks.
print("\neffective-mass fit of the exact band (relative errors)")
for beta in (1e-3, 5e-4, 2.5e-4, 1e-4):
    q = MediumParams(beta=beta)
    row = [spectrum.fit_effective_mass(q, l) for l in (1, 2, 3)]
    print(f"  beta={beta:.1e}  " + "  ".join(
        f"l={f.n_pairs}: m {f.mass_rel_error:6.2%}, Delta {f.halfwidth_rel_error:6.2%}" for f in row))
