"""Spectral objects built from a single Bethe string.

Three families are covered:

* ordinary solitons: ``N`` lower-branch polaritons bound by a string with
  ``H < 0``;
* mobile gap solitons: ``l`` pairs of conjugate gap frequencies from an even
  string with ``H >= 0``, in three approximation orders (``Mode``);
* pinned solitons: odd strings with ``H -> 0+`` whose real rapidity is the
  polariton-atom bound state.

Energies that are differences of large, nearly equal totals (dissociation,
binding and pair-extraction energies) are evaluated through integer
bookkeeping: every closed-form energy has the form ``c1 * w12 - c2 * beta/a``
with integer ``c1, c2``, so differences are formed on the coefficients first.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import bae, medium, stringmap
from .errors import (ConvergenceError, DomainError, GapSpecError, LinearizationError,
                     LmaxExceededError, NoRootError, RegimeError, UnsupportedRegimeError)
from .medium import Branch, MediumParams

NEWTON_MAX_ITER = 50
NEWTON_TOL = 1e-12  # relative to beta
MASS_DIVERGENCE = 0.10


class Mode(enum.Enum):
    LINEAR = "linear"
    CORRECTED = "corrected"
    EXACT = "exact"


# -- integer energy bookkeeping ------------------------------------------------

@dataclass(frozen=True)
class _Energy:
    """``atomic * w12 - spacing * beta/a`` with integer coefficients."""

    atomic: int
    spacing: int

    def __add__(self, other):
        return _Energy(self.atomic + other.atomic, self.spacing + other.spacing)

    def __sub__(self, other):
        return _Energy(self.atomic - other.atomic, self.spacing - other.spacing)

    def value(self, params, a):
        if self.atomic == 0:
            return -self.spacing * (params.beta / a)
        return self.atomic * params.omega12 - self.spacing * (params.beta / a)


def _e_linear(l):
    return _Energy(2 * l, l * l)


def _e_pinned(l):
    return _Energy(2 * l + 1, l * (l + 1))


def _a(params):
    return stringmap.linearize(params).a


def _gap_regime(params):
    if params.omega12 >= params.omega_par:
        raise UnsupportedRegimeError(
            "omega12 above the gap: composite and interbranch solitons are not constructed")
    params.require_gap_atom()


def linear_energy(params: MediumParams, l: int) -> float:
    """E0_l = 2 w12 l - (beta/a) l^2."""
    _gap_regime(params)
    return _e_linear(l).value(params, _a(params))


def dissociation_energy(params: MediumParams, l: int, l1: int) -> float:
    """Energy to split an ``l``-pair soliton into ``l1`` and ``l - l1`` pairs."""
    _gap_regime(params)
    if not 0 <= l1 <= l:
        raise DomainError(f"need 0 <= l1 <= l, got l={l}, l1={l1}")
    e = _e_linear(l1) + _e_linear(l - l1) - _e_linear(l)
    return e.value(params, _a(params))


def pinned_energy(params: MediumParams, l: int) -> float:
    _gap_regime(params)
    return _e_pinned(l).value(params, _a(params))


def binding_energy(params: MediumParams, l: int) -> float:
    """Pinned energy minus (bound state + free l-pair soliton); equals -(beta/a) l."""
    _gap_regime(params)
    e = _e_pinned(l) - (_Energy(1, 0) + _e_linear(l))
    return e.value(params, _a(params))


def pair_extraction_energy(params: MediumParams, l: int) -> float:
    """Energy to pull one pair out of an ``l``-pair pinned soliton; (beta/a)(2l - 1)."""
    _gap_regime(params)
    if l < 1:
        raise DomainError("a pinned soliton needs at least one pair to lose one")
    e = (_e_pinned(l - 1) + _e_linear(1)) - _e_pinned(l)
    return e.value(params, _a(params))


def band_halfwidth(params: MediumParams, l: int) -> float:
    lin = stringmap.linearize(params)
    return lin.b * params.beta ** 2 / (12.0 * lin.a ** 3) * (4 * l * l - 1)


def linear_frequencies(params: MediumParams, l: int) -> np.ndarray:
    """xi0_j = w12 - (beta/a)(l + 1/2 - j), j = 1..l."""
    j = np.arange(1, l + 1)
    return params.omega12 - (params.beta / _a(params)) * (l + 0.5 - j)


def _kappa_slope_sum(params, l):
    return float(np.sum(np.abs(medium.kappa_prime(params, linear_frequencies(params, l)))))


def effective_mass(params: MediumParams, l: int) -> float:
    lin = stringmap.linearize(params)
    return lin.a / (2.0 * lin.b * l * l) * _kappa_slope_sum(params, l) ** 2


def l_max(params: MediumParams) -> int:
    """Largest l whose lowest linear frequency stays above the guarded gap edge."""
    _gap_regime(params)
    room = (params.omega12 - params.omega_perp - params.tau_edge) / (params.beta / _a(params))
    return max(0, math.ceil(room + 0.5) - 1)


def l_valid(params: MediumParams) -> int:
    """Largest l whose linear frequencies stay within the linearization radius."""
    lin = stringmap.linearize(params)
    room = lin.valid_radius / (params.beta / lin.a)
    return max(0, min(math.floor(room + 0.5), l_max(params)))


def pinned_l_max(params: MediumParams) -> int:
    room = (params.omega12 - params.omega_perp - params.tau_edge) / (params.beta / _a(params))
    return max(0, math.ceil(room) - 1)


# -- ordinary solitons ---------------------------------------------------------

@dataclass(frozen=True)
class OrdinarySoliton:
    n_particles: int
    carrying_rapidity: float
    carrier: float
    energy: float
    width: float
    momentum: float
    decay: float
    frequencies: np.ndarray = field(repr=False)
    momenta: np.ndarray = field(repr=False)
    nc: bae.NCReport = field(repr=False)


def _carrier_root(params, H):
    lo, hi = medium.branch_window(params, Branch.LOWER)
    if params.omega_bar < hi:
        hi = params.omega_bar
    g = lambda w: float(stringmap.rapidity_real(params, w)) - H  # noqa: E731
    if g(lo) >= 0 or g(hi) <= 0:
        raise NoRootError(f"h(Omega) = {H} has no root on the guarded lower branch ({lo}, {hi})")
    return brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def ordinary_soliton(params: MediumParams, N: int, H: float) -> OrdinarySoliton:
    """Bound complex of ``N`` lower-branch polaritons with carrier ``h(Omega) = H``."""
    if params.omega12 > params.omega_par:
        raise UnsupportedRegimeError(
            "omega12 above the gap admits interbranch attraction; not constructed")
    if not H < 0:
        raise RegimeError(f"ordinary solitons need H < 0 (lower-branch attraction), got H={H}")
    omega = _carrier_root(params, H)
    dh = float(stringmap.rapidity_derivative(params, omega))
    dk = float(stringmap.momentum_derivative(params, omega))
    width = params.beta / dh
    decay = params.beta * dk / dh
    K = float(stringmap.momentum_real(params, omega))
    offs = 0.5 * (N + 1 - 2 * np.arange(1, N + 1))
    freqs = omega + 1j * width * offs
    momenta = K + 1j * decay * offs
    nc = bae.check_nc(bae.build_string(N, H, params.beta), momenta)
    if not nc.passed:
        raise RegimeError(f"sign condition fails for particles {nc.offending}")
    return OrdinarySoliton(N, H, omega, N * omega, width, K, decay, freqs, momenta, nc)


# -- gap solitons --------------------------------------------------------------

@dataclass(frozen=True)
class GapSolitonState:
    """``l`` conjugate pairs ``xi_j +/- i eta_j`` with derived band data.

    Particle order follows the string: pair members with positive imaginary
    rapidity first (``j = 1..l``), then their conjugates in reverse order.
    """

    n_pairs: int
    carrying_rapidity: float
    mode: Mode
    xi: np.ndarray
    eta: np.ndarray
    q_parts: np.ndarray
    kappas: np.ndarray
    energy_per_particle: float
    total_energy: float
    band_halfwidth: float
    effective_mass: float
    size: float
    momentum_per_particle: float
    beta: float
    residuals: np.ndarray | None = None
    iterations: int | None = None

    @property
    def frequencies(self) -> np.ndarray:
        up = self.xi + 1j * self.eta
        return np.concatenate([up, np.conj(up[::-1])])

    @property
    def momenta(self) -> np.ndarray:
        up = self.q_parts + 1j * self.kappas
        return np.concatenate([up, np.conj(up[::-1])])

    @property
    def string(self) -> bae.BetheString:
        return bae.build_string(2 * self.n_pairs, self.carrying_rapidity, self.beta)

    def check_nc(self) -> bae.NCReport:
        return bae.check_nc(self.string, self.momenta)


def _check_l(params, l):
    if int(l) != l or l < 1:
        raise DomainError(f"l must be a positive integer, got {l}")
    lm = l_max(params)
    if l > lm:
        raise LmaxExceededError(l, lm)


def gap_candidate(params: MediumParams, l: int, H: float):
    """String and momenta of the naive linear image ``eta = H/a`` for any sign of H.

    Used to show that ``H < 0`` violates the sign condition.
    """
    _gap_regime(params)
    a = _a(params)
    eta = H / a
    xi0 = linear_frequencies(params, l)
    ks = []
    for x in xi0:
        if eta == 0:
            ks.append(complex(0.0, medium.kappa(params, x)))
        else:
            ks.append(stringmap.continue_gap(params, x, eta)[0])
    ks = np.array(ks)
    return bae.build_string(2 * l, H, params.beta), np.concatenate([ks, np.conj(ks[::-1])])


def _require_nc(params, l, H):
    string, momenta = gap_candidate(params, l, H)
    nc = bae.check_nc(string, momenta)
    if not nc.passed:
        raise RegimeError(
            f"H={H}: sign condition fails for particles {nc.offending}; "
            "only strings with H > 0 map to gap states")


def gap_soliton_linear(params: MediumParams, l: int, H: float = 0.0) -> GapSolitonState:
    """Linear-order image of an even string: ``xi0_j`` with common ``eta = H/a``."""
    _gap_regime(params)
    _check_l(params, l)
    if H < 0:
        _require_nc(params, l, H)
    a = _a(params)
    eta = H / a
    xi0 = linear_frequencies(params, l)
    kp = np.abs(medium.kappa_prime(params, xi0))
    kap = medium.kappa(params, xi0)
    q_parts = eta * kp
    return GapSolitonState(
        n_pairs=l, carrying_rapidity=H, mode=Mode.LINEAR, xi=xi0, eta=np.full(l, eta),
        q_parts=q_parts, kappas=kap,
        energy_per_particle=params.omega12 - (params.beta / (2 * a)) * l,
        total_energy=_e_linear(l).value(params, a),
        band_halfwidth=band_halfwidth(params, l), effective_mass=effective_mass(params, l),
        size=1.0 / kap[0], momentum_per_particle=float(np.sum(q_parts)) / l, beta=params.beta)


def gap_pair(params: MediumParams, H: float) -> GapSolitonState:
    """Two correlated gap excitations: ``xi = w12 - beta/2a``, ``eta = H/a``."""
    _gap_regime(params)
    if not H > 0:
        _require_nc(params, 1, H)
        raise RegimeError(f"a propagating gap pair needs H > 0, got H={H}")
    return gap_soliton_linear(params, 1, H)


def _corrected_frequencies(params, l, H):
    lin = stringmap.linearize(params)
    xi0 = linear_frequencies(params, l)
    eta = H / lin.a
    x0 = xi0 - lin.center
    return xi0 - (lin.b / lin.a) * x0 * x0 + (lin.b / lin.a) * eta * eta, eta


def gap_soliton_corrected(params: MediumParams, l: int, H: float = 0.0) -> GapSolitonState:
    """Second-order frequencies and the effective-mass dispersion of an l-pair soliton."""
    _gap_regime(params)
    _check_l(params, l)
    if H < 0:
        _require_nc(params, l, H)
    lin = stringmap.linearize(params)
    xi, eta = _corrected_frequencies(params, l, H)
    dev = np.abs(xi - lin.center)
    if np.any(dev > lin.valid_radius):
        raise LinearizationError(
            f"corrected frequencies reach |xi - w12| = {dev.max():.3g}, beyond the "
            f"linearization radius {lin.valid_radius:.3g} (l_valid = {l_valid(params)})")
    if np.any(xi <= params.omega_perp + params.tau_edge) or np.any(xi >= params.omega12):
        raise RegimeError("corrected frequencies leave the allowed window (omega_perp, omega12)")
    xi0 = linear_frequencies(params, l)
    kp = np.abs(medium.kappa_prime(params, xi0))
    q = eta * float(np.sum(kp)) / l
    delta = band_halfwidth(params, l)
    mass = effective_mass(params, l)
    eps0 = params.omega12 - (params.beta / (2 * lin.a)) * l
    return GapSolitonState(
        n_pairs=l, carrying_rapidity=H, mode=Mode.CORRECTED, xi=xi, eta=np.full(l, eta),
        q_parts=eta * kp, kappas=medium.kappa(params, xi),
        energy_per_particle=eps0 - delta + q * q / (2 * mass),
        total_energy=2.0 * float(np.sum(xi)),
        band_halfwidth=delta, effective_mass=mass, size=1.0 / float(medium.kappa(params, xi[0])),
        momentum_per_particle=q, beta=params.beta)


def solve_pair(params: MediumParams, H: float, target_im: float, xi0: float, eta0: float,
               tol: float = NEWTON_TOL, max_iter: int = NEWTON_MAX_ITER):
    """2D Newton for ``Re h(xi, eta) = H``, ``Im h(xi, eta) = target_im`` with ``eta >= 0``.

    The Jacobian comes from the complex derivative of ``h`` through the
    Cauchy-Riemann relations.  A step that increases the residual is halved.

    Returns ``(xi, eta, residual, iterations)``.
    """
    def resid(x, e):
        h = stringmap.gap_rapidity(params, x, e)
        return np.array([h.real - H, h.imag - target_im])

    x, e = float(xi0), max(float(eta0), 0.0)
    r = resid(x, e)
    thresh = tol * params.beta
    for it in range(1, max_iter + 1):
        if np.max(np.abs(r)) < thresh:
            return x, e, r, it - 1
        dh = stringmap.gap_maps(params, x, e)[3]
        jac = np.array([[dh.real, -dh.imag], [dh.imag, dh.real]])
        step = np.linalg.solve(jac, -r)
        t = 1.0
        for _ in range(30):
            xn, en = x + t * step[0], e + t * step[1]
            if en >= 0 and params.omega_perp < xn < params.omega_par:
                rn = resid(xn, en)
                if np.max(np.abs(rn)) <= np.max(np.abs(r)):
                    break
            t *= 0.5
        else:
            raise ConvergenceError("damped Newton step failed to reduce the residual",
                                   last=(x, e), residuals=r)
        x, e, r = xn, en, rn
    if np.max(np.abs(r)) < thresh:
        return x, e, r, max_iter
    raise ConvergenceError(f"no convergence after {max_iter} iterations",
                           last=(x, e), residuals=r)


def gap_soliton_exact(params: MediumParams, l: int, H: float = 0.0,
                      tol: float = NEWTON_TOL, max_iter: int = NEWTON_MAX_ITER) -> GapSolitonState:
    """Solve ``Re h(xi_j, eta_j) = H``, ``Im h(xi_j, eta_j) = beta (l - j + 1/2)`` per pair."""
    _gap_regime(params)
    _check_l(params, l)
    if H < 0:
        _require_nc(params, l, H)
    xi_guess, eta_guess = _corrected_frequencies(params, l, H)
    xs, es, res, iters = [], [], [], 0
    for j in range(1, l + 1):
        x, e, r, it = solve_pair(params, H, params.beta * (l - j + 0.5),
                                 xi_guess[j - 1], eta_guess, tol=tol, max_iter=max_iter)
        xs.append(x)
        es.append(e)
        res.append(r)
        iters = max(iters, it)
    xi, eta = np.array(xs), np.array(es)
    if np.any(xi <= params.omega_perp + params.tau_edge) or np.any(xi >= params.omega12):
        raise RegimeError("exact frequencies leave the allowed window (omega_perp, omega12)")
    ks = np.array([stringmap.gap_momentum(params, x, e) for x, e in zip(xi, eta)])
    state = GapSolitonState(
        n_pairs=l, carrying_rapidity=H, mode=Mode.EXACT, xi=xi, eta=eta,
        q_parts=ks.real, kappas=ks.imag,
        energy_per_particle=float(np.sum(xi)) / l, total_energy=2.0 * float(np.sum(xi)),
        band_halfwidth=band_halfwidth(params, l), effective_mass=effective_mass(params, l),
        size=1.0 / float(medium.kappa(params, xi[0])),
        momentum_per_particle=float(np.sum(ks.real)) / l, beta=params.beta,
        residuals=np.array(res), iterations=iters)
    nc = state.check_nc()
    if not nc.passed:
        raise RegimeError(f"exact solution violates the sign condition at {nc.offending}")
    return state


def gap_soliton(params: MediumParams, l: int, H: float = 0.0, mode=Mode.LINEAR) -> GapSolitonState:
    mode = Mode(mode)
    if mode is Mode.LINEAR:
        return gap_soliton_linear(params, l, H)
    if mode is Mode.CORRECTED:
        return gap_soliton_corrected(params, l, H)
    return gap_soliton_exact(params, l, H)


# -- pinned solitons -----------------------------------------------------------

@dataclass(frozen=True)
class PinnedSoliton:
    n_pairs: int
    frequencies: np.ndarray
    total_energy: float
    binding_energy: float
    pair_extraction_energy: float | None

    @property
    def constituents(self) -> np.ndarray:
        """All ``2l + 1`` real frequencies: the bound state and each pair twice."""
        return np.concatenate([self.frequencies[:1], np.repeat(self.frequencies[1:], 2)])


def pinned_soliton(params: MediumParams, l: int) -> PinnedSoliton:
    """Odd string with ``H -> 0+``: bound state at w12 plus a deformed l-pair soliton."""
    _gap_regime(params)
    if int(l) != l or l < 0:
        raise DomainError(f"l must be a non-negative integer, got {l}")
    lm = pinned_l_max(params)
    if l > lm:
        raise LmaxExceededError(l, lm)
    a = _a(params)
    j = np.arange(1, l + 1)
    freqs = np.concatenate([[params.omega12], params.omega12 - (params.beta / a) * (l - j + 1)])
    return PinnedSoliton(
        n_pairs=l, frequencies=freqs, total_energy=_e_pinned(l).value(params, a),
        binding_energy=binding_energy(params, l),
        pair_extraction_energy=pair_extraction_energy(params, l) if l >= 1 else None)


# -- band structure ------------------------------------------------------------

@dataclass(frozen=True)
class BandPoint:
    H: float
    q: float | None = None
    eps_corrected: float | None = None
    q_exact: float | None = None
    eps_exact: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class BandStructure:
    n_pairs: int
    points: list
    band_halfwidth: float
    effective_mass: float
    mass_validity_q: float | None


def _band_point(params, l, H):
    q = eps_c = q_x = eps_x = None
    errors = []
    try:
        c = gap_soliton_corrected(params, l, H)
        q, eps_c = c.momentum_per_particle, c.energy_per_particle
    except GapSpecError as exc:
        errors.append(f"corrected: {exc}")
        lin = stringmap.linearize(params)
        q = (H / lin.a) * _kappa_slope_sum(params, l) / l
    try:
        x = gap_soliton_exact(params, l, H)
        q_x, eps_x = x.momentum_per_particle, x.energy_per_particle
    except GapSpecError as exc:
        errors.append(f"exact: {exc}")
    return BandPoint(H, q, eps_c, q_x, eps_x, "; ".join(errors) or None)


def band_structure(params: MediumParams, l: int, H_grid, workers: int = 1) -> BandStructure:
    """Tabulate corrected and exact energies per particle over carrying rapidities.

    Points are independent; with ``workers > 1`` they run on a thread pool but
    the table keeps the order of ``H_grid``.
    """
    _gap_regime(params)
    _check_l(params, l)
    grid = [float(h) for h in H_grid]
    if any(h < 0 for h in grid):
        raise DomainError("the H grid must be non-negative")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(lambda h: _band_point(params, l, h), grid))
    else:
        points = [_band_point(params, l, h) for h in grid]
    mass = effective_mass(params, l)
    return BandStructure(l, points, band_halfwidth(params, l), mass,
                         _mass_validity_q(points, mass))


def _mass_validity_q(points, mass):
    """Smallest q at which the exact kinetic energy departs from q^2/2m by > 10%."""
    ok = [p for p in points if p.eps_exact is not None]
    base = [p for p in ok if p.H == 0.0]
    if not base:
        return None
    e0 = base[0].eps_exact
    for p in sorted(ok, key=lambda p: p.q_exact):
        if p.q_exact <= 0:
            continue
        kin = p.eps_exact - e0
        model = p.q_exact ** 2 / (2 * mass)
        if abs(kin - model) > MASS_DIVERGENCE * abs(model):
            return p.q_exact
    return None


@dataclass(frozen=True)
class MassFit:
    n_pairs: int
    effective_mass: float
    fitted_mass: float
    band_halfwidth: float
    fitted_halfwidth: float
    q_max: float

    @property
    def mass_rel_error(self):
        return abs(self.fitted_mass / self.effective_mass - 1.0)

    @property
    def halfwidth_rel_error(self):
        return abs(self.fitted_halfwidth / self.band_halfwidth - 1.0)


def fit_effective_mass(params: MediumParams, l: int, H_max: float | None = None,
                       n_points: int = 11) -> MassFit:
    """Fit ``eps_exact(q) = eps_bottom + q^2 / 2m`` at small ``q``.

    The fitted mass is compared with the closed-form ``m_l`` and the band
    bottom ``eps0_l - eps_bottom`` with ``Delta_l``.
    """
    if H_max is None:
        H_max = 0.01 * params.beta
    states = [gap_soliton_exact(params, l, H) for H in np.linspace(0.0, H_max, n_points)]
    q = np.array([s.momentum_per_particle for s in states])
    eps = np.array([s.energy_per_particle for s in states])
    slope, bottom = np.polyfit(q * q, eps, 1)
    eps0 = params.omega12 - (params.beta / (2 * _a(params))) * l
    return MassFit(l, effective_mass(params, l), 1.0 / (2.0 * slope),
                   band_halfwidth(params, l), eps0 - bottom, float(q.max()))


__all__ = [
    "Mode", "OrdinarySoliton", "GapSolitonState", "PinnedSoliton", "BandPoint",
    "BandStructure", "MassFit", "linear_energy", "dissociation_energy", "pinned_energy",
    "binding_energy", "pair_extraction_energy", "band_halfwidth", "effective_mass",
    "linear_frequencies", "l_max", "l_valid", "pinned_l_max", "ordinary_soliton",
    "gap_candidate", "gap_pair", "gap_soliton_linear", "gap_soliton_corrected",
    "gap_soliton_exact", "gap_soliton", "solve_pair", "pinned_soliton", "band_structure",
    "fit_effective_mass",
]
