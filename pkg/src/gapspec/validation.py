"""Invariant suite behind ``gapspec validate`` and the acceptance tests.

Each check returns a :class:`Check`; details are formatted deterministically
(no timings) so the report is byte-stable across runs and thread counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bae, medium, report, spectrum, stringmap
from .medium import Branch, MediumParams

L_DECAY = (1e3, 2e3, 4e3)
L_QUANT = 1e4
N_ROOTS = 200
BETAS = (1e-3, 5e-4, 2.5e-4)
L_FORMULA = 30


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _direct_a(p):
    nu = math.sqrt((p.omega_par ** 2 - p.omega12 ** 2) / (p.omega12 ** 2 - p.omega_perp ** 2))
    return 1.0 / (p.omega12 * nu ** 5)


def _direct_b(p):
    w, P2, Q2 = p.omega12, p.omega_perp ** 2, p.omega_par ** 2
    nu = math.sqrt((Q2 - w * w) / (w * w - P2))
    # d ln nu / d w for nu^2 = (Q2 - w^2)/(w^2 - P2)
    dln = 0.5 * (-2 * w / (Q2 - w * w) - 2 * w / (w * w - P2))
    f = 1.0 / (w * nu ** 5)
    return -f * (3.0 / w + 5.0 * dln)


def _rel(x, y):
    return abs(x - y) / abs(y) if y != 0 else abs(x)


def check_formulas(p: MediumParams) -> Check:
    a, b = _direct_a(p), _direct_b(p)
    w, beta = p.omega12, p.beta
    worst = 0.0
    for l in range(1, L_FORMULA + 1):
        worst = max(worst,
                    _rel(spectrum.linear_energy(p, l), 2 * w * l - (beta / a) * l * l),
                    _rel(spectrum.band_halfwidth(p, l), b * beta ** 2 / (12 * a ** 3) * (4 * l * l - 1)),
                    _rel(spectrum.pinned_energy(p, l), w * (2 * l + 1) - (beta / a) * l * (l + 1)),
                    _rel(spectrum.binding_energy(p, l), -(beta / a) * l),
                    _rel(spectrum.pair_extraction_energy(p, l), (beta / a) * (2 * l - 1)))
        for l1 in range(1, l):
            worst = max(worst, _rel(spectrum.dissociation_energy(p, l, l1),
                                    2 * (beta / a) * l1 * (l - l1)))
    return Check("formula_reproduction", worst < 1e-12, f"max rel err {worst:.3e} (tol 1e-12)")


def attraction_samples(p: MediumParams, n=1000):
    lo, hi = medium.branch_window(p, Branch.LOWER)
    lower = np.linspace(lo, hi, n)
    lo, hi = medium.branch_window(p, Branch.UPPER)
    upper = np.linspace(lo, hi, n)
    return lower, upper


def check_attraction(p: MediumParams) -> Check:
    lower, upper = attraction_samples(p)
    dl = stringmap.rapidity_derivative(p, lower)
    du = stringmap.rapidity_derivative(p, upper)
    nl, nu = int(np.sum(dl > 0)), int(np.sum(du < 0))
    return Check("attraction_criterion", nl == lower.size and nu == upper.size,
                 f"h'>0 on {nl}/{lower.size} lower, h'<0 on {nu}/{upper.size} upper")


def pair_log_residuals(p: MediumParams, H: float, Ls=L_DECAY):
    pair = spectrum.gap_pair(p, H)
    out = []
    for L in Ls:
        logs = bae.bae_log_residual(pair.string, pair.momenta, L)
        out.append(max(lm for lm, _ in logs))
    return pair, np.array(out)


def check_residual_decay(p: MediumParams, H: float | None = None) -> Check:
    H = 0.1 * p.beta if H is None else H
    pair, logs = pair_log_residuals(p, H)
    slope = np.polyfit(np.array(L_DECAY), logs, 1)[0]
    kap = float(medium.kappa(p, pair.xi[0]))
    err = abs(slope / -kap - 1.0)
    return Check("residual_decay", err < 0.02,
                 f"slope {slope:.6f} vs -kappa {-kap:.6f}, rel err {err:.2e} (tol 2e-2)")


def winding_count(p: MediumParams, lo: float, hi: float, n: int = 200001) -> int:
    """Crossings of odd multiples of pi by the one-particle phase on ``[lo, hi]``."""
    _, _, lift = bae._phase_setup(p, Branch.LOWER, None)
    grid = np.linspace(lo, hi, n)
    phase = bae.phase_function(p, grid, lift)
    s = np.cos(phase / 2.0)
    return int(np.sum(np.signbit(s[1:]) != np.signbit(s[:-1])))


def check_quantization(p: MediumParams) -> Check:
    q = p.with_L(L_QUANT)
    roots = [bae.solve_one_particle(q, Branch.LOWER, m) for m in range(N_ROOTS + 1)]
    worst = max(abs(bae.one_particle_residual(q, w)) for w in roots[:N_ROOTS])
    lo, _ = medium.branch_window(q, Branch.LOWER)
    hi = 0.5 * (roots[N_ROOTS - 1] + roots[N_ROOTS])
    count = winding_count(q, lo, hi)
    ordered = all(x < y for x, y in zip(roots, roots[1:]))
    ok = worst < 1e-10 and count == N_ROOTS and ordered
    return Check("one_particle_quantization", ok,
                 f"{N_ROOTS} roots, max |residual| {worst:.2e} (tol 1e-10), winding {count}")


def convergence_exponents(p: MediumParams, ls=(1, 2, 3), betas=BETAS):
    out = {}
    for l in ls:
        dev = []
        for beta in betas:
            q = MediumParams(p.omega_perp, p.omega_par, p.omega12, beta)
            x = spectrum.gap_soliton_exact(q, l, 0.0)
            dev.append(np.max(np.abs(x.xi - spectrum.linear_frequencies(q, l))))
        out[l] = float(np.polyfit(np.log(betas), np.log(dev), 1)[0])
    return out


def check_convergence(p: MediumParams) -> Check:
    exps = convergence_exponents(p)
    ok = all(abs(e - 2.0) <= 0.2 for e in exps.values())
    return Check("exact_vs_linear_convergence", ok,
                 "exponents " + ", ".join(f"l={l}: {e:.4f}" for l, e in exps.items())
                 + " (expect 2 +/- 0.2)")


def check_effective_mass(p: MediumParams, ls=(1, 2, 3)) -> Check:
    fits = [spectrum.fit_effective_mass(p, l) for l in ls]
    ok = all(f.mass_rel_error < 0.05 and f.halfwidth_rel_error < 0.05 for f in fits)
    return Check("effective_mass_bandwidth", ok, "; ".join(
        f"l={f.n_pairs}: mass err {f.mass_rel_error:.2%}, Delta err {f.halfwidth_rel_error:.2%}"
        for f in fits) + " (tol 5%)")


def check_stability(p: MediumParams) -> Check:
    ud_ok = all(spectrum.dissociation_energy(p, l, l1) > 0
                for l in range(2, L_FORMULA + 1) for l1 in range(1, l))
    eq_ok = True
    for l in range(1, L_FORMULA + 1):
        u1 = spectrum.pair_extraction_energy(p, l)
        ul = abs(spectrum.binding_energy(p, l))
        if l == 1:
            eq_ok &= math.isclose(u1, ul, rel_tol=1e-12)
        else:
            eq_ok &= u1 > ul
    return Check("stability_inequalities", ud_ok and eq_ok,
                 f"U_d > 0: {ud_ok}; U_1 >= |U_l| (equal only at l=1): {eq_ok}")


def _fd(fun, x, h):
    return (fun(x + h) - fun(x - h)) / (2 * h)


def derivative_errors(p: MediumParams, n: int = 50):
    """Worst relative mismatch between analytic and central-difference derivatives."""
    worst = {}
    glo, ghi = medium.branch_window(p, Branch.GAP)
    pad = 0.02 * p.gap_width
    gap = np.linspace(glo + pad, ghi - pad, n)
    lo, hi = medium.branch_window(p, Branch.LOWER)
    lower = np.linspace(0.1 * hi, hi - 0.02, n)
    lo, hi = medium.branch_window(p, Branch.UPPER)
    upper = np.linspace(lo + 0.02, 3 * p.omega_par, n)
    cases = [
        ("eps'", lambda x: medium.permittivity(p, x), lambda x: medium.permittivity_derivative(p, x), gap),
        ("nu'", lambda x: medium.gap_decay_index(p, x), lambda x: medium.gap_decay_index_derivative(p, x), gap),
        ("kappa'", lambda x: medium.kappa(p, x), lambda x: medium.kappa_prime(p, x), gap),
        ("phi'", lambda x: stringmap.phi(p, x), lambda x: stringmap.phi_prime(p, x), gap),
        ("f'", lambda x: stringmap.form_factor(p, x), lambda x: stringmap.form_factor_derivative(p, x), gap),
        ("k' lower", lambda x: stringmap.momentum_real(p, x), lambda x: stringmap.momentum_derivative(p, x), lower),
        ("h' lower", lambda x: stringmap.rapidity_real(p, x), lambda x: stringmap.rapidity_derivative(p, x), lower),
        ("k' upper", lambda x: stringmap.momentum_real(p, x), lambda x: stringmap.momentum_derivative(p, x), upper),
        ("h' upper", lambda x: stringmap.rapidity_real(p, x), lambda x: stringmap.rapidity_derivative(p, x), upper),
    ]
    for name, fun, dfun, xs in cases:
        h = 1e-7 * p.omega_perp
        num = _fd(fun, xs, h)
        ana = dfun(xs)
        worst[name] = float(np.max(np.abs(num - ana) / np.abs(ana)))
    return worst


def check_structure(p: MediumParams) -> Check:
    parts = {}
    # energy reality over every constructed state
    states = [spectrum.gap_pair(p, 1e-4)]
    states += [spectrum.gap_soliton_linear(p, l, 1e-5) for l in (1, 2, 5)]
    states += [spectrum.gap_soliton_exact(p, l, 1e-5) for l in (1, 2, 3)]
    freqs = [s.frequencies for s in states]
    freqs += [spectrum.ordinary_soliton(p, n, -0.5).frequencies for n in (1, 3, 6)]
    freqs += [spectrum.pinned_soliton(p, l).constituents for l in (0, 1, 4)]
    worst_im = max(abs(np.sum(f).imag) / abs(np.sum(f).real) for f in freqs)
    parts["energy_reality"] = worst_im < 1e-12
    # string conjugation symmetry
    sym = True
    for N in range(1, 51):
        s = bae.build_string(N, 0.3, p.beta).rapidities
        sym &= bool(np.array_equal(np.sort_complex(s), np.sort_complex(np.conj(s))))
    parts["conjugation"] = sym
    # sign condition
    ok_pos = bae.check_nc(*spectrum.gap_candidate(p, 1, 1e-4)).passed
    ok_neg = not bae.check_nc(*spectrum.gap_candidate(p, 1, -1e-4)).passed
    parts["nc"] = ok_pos and ok_neg and all(s.check_nc().passed for s in states)
    # kappa monotone on an edge-excluded grid
    lo, hi = medium.branch_window(p, Branch.GAP)
    kap = medium.kappa(p, np.linspace(lo, hi, 1000))
    parts["kappa_monotone"] = bool(np.all(np.diff(kap) < 0))
    # soliton size falls with l
    sizes = [spectrum.gap_soliton_linear(p, l).size for l in range(1, spectrum.l_max(p) + 1)]
    parts["size_monotone"] = bool(np.all(np.diff(sizes) < 0))
    worst_d = max(derivative_errors(p).values())
    parts["derivatives"] = worst_d < 1e-6
    detail = ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in parts.items())
    detail += f" (max |Im E|/|E| {worst_im:.1e}, max derivative err {worst_d:.1e})"
    return Check("structural_invariants", all(parts.values()), detail)


def band_sweep_bytes(p: MediumParams, workers: int, l: int = 1, n: int = 100, fmt: str = "csv"):
    from .cli import band_report
    grid = np.linspace(0.0, 0.1 * p.beta, n)
    return report.emit(band_report(p, l, grid, workers), fmt)


def check_determinism(p: MediumParams) -> Check:
    outs = {w: band_sweep_bytes(p, w) for w in (1, 4, 8)}
    same = outs[1] == outs[4] == outs[8]
    return Check("determinism", same, f"100-point band sweep identical across 1/4/8 workers: {same}")


CHECKS = {
    "formula_reproduction": check_formulas,
    "attraction_criterion": check_attraction,
    "residual_decay": check_residual_decay,
    "one_particle_quantization": check_quantization,
    "exact_vs_linear_convergence": check_convergence,
    "effective_mass_bandwidth": check_effective_mass,
    "stability_inequalities": check_stability,
    "structural_invariants": check_structure,
    "determinism": check_determinism,
}


def run_checks(p: MediumParams, names=None, workers: int = 1):
    """Run the suite; with ``workers > 1`` checks run concurrently, results in fixed order."""
    names = list(CHECKS) if names is None else list(names)

    def one(name):
        try:
            c = CHECKS[name](p)
            return Check(c.name, bool(c.passed), c.detail)
        except Exception as exc:  # a crashed check is a failed check
            return Check(name, False, f"raised {type(exc).__name__}: {exc}")

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, names))
    return [one(n) for n in names]


__all__ = ["Check", "CHECKS", "run_checks", "check_formulas", "check_attraction",
           "check_residual_decay", "check_quantization", "check_convergence",
           "check_effective_mass", "check_stability", "check_structure", "check_determinism"]
