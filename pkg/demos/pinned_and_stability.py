"""Pinned solitons and the energetics that keep gap solitons together."""
from gapspec import spectrum
from gapspec.medium import MediumParams

p = MediumParams()

print("pinned (odd-string) solitons")
for l in range(0, 5):
    s = spectrum.pinned_soliton(p, l)
    u1 = "-" if s.pair_extraction_energy is None else f"{s.pair_extraction_energy:.6e}"
    print(f"  l={l}  E={s.total_energy:.10f}  U_l={s.binding_energy:+.6e}  U_1={u1}")

# Pulling one pair out of a pinned soliton costs more than releasing the whole
# soliton from the atom, except for l = 1 where the two coincide.
for l in (1, 2, 10, 30):
    u1 = spectrum.pair_extraction_energy(p, l)
    ul = abs(spectrum.binding_energy(p, l))
    print(f"  l={l:2d}: U_1 / |U_l| = {u1 / ul:.4f}")

# Every way of splitting a mobile soliton costs energy.
worst = min(spectrum.dissociation_energy(p, l, l1) for l in range(2, 31) for l1 in range(1, l))
print(f"smallest dissociation energy over l <= 30: {worst:.6e} (> 0)")
