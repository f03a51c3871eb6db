"""Bethe ansatz equations: strings, the sign condition, residuals, and real roots.

The equations for ``N`` particles on a sphere of radius ``L`` read

    exp(i k_j L) (h_j - i beta/2) / (h_j + i beta/2) = - prod_{l != j} S(h_j - h_l),
    S(x) = (x - i beta) / (x + i beta).

Inside a string, consecutive rapidities differ by exactly ``i beta`` so every
particle meets either a zero or a pole of the product.  The residual is
therefore evaluated per particle in the orientation in which the exponential
is bounded: forward when ``Im k_j >= 0``, inverted when ``Im k_j < 0``.  The
pole that the growing exponential balances then appears as a zero, and the
residual is of order ``exp(-|Im k_j| L)`` for a valid string.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import medium, stringmap
from .errors import DomainError, NoRootError, UnmatchedPoleError
from .medium import Branch, MediumParams

#: Denominators below this (relative to beta) count as unmatched poles.
POLE_TOL = 1e-12
NEWTON_RTOL = 1e-14


@dataclass(frozen=True)
class BetheString:
    n_particles: int
    carrying_rapidity: float
    beta: float
    rapidities: np.ndarray = field(repr=False)

    def __iter__(self):
        return iter(self.rapidities)

    def __len__(self):
        return self.n_particles


@dataclass(frozen=True)
class NCReport:
    flags: tuple
    exempt: tuple
    passed: bool
    offending: tuple


def build_string(N: int, H: float, beta: float) -> BetheString:
    """Rapidities ``H + i (beta/2)(N + 1 - 2j)`` for ``j = 1..N``."""
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    j = np.arange(1, N + 1)
    im = (beta / 2.0) * (N + 1 - 2 * j)
    return BetheString(int(N), float(H), float(beta), H + 1j * im)


def check_nc(string, momenta) -> NCReport:
    """Check ``sgn(Im h_j) == sgn(Im k_j)`` for every particle.

    Particles with a real rapidity are exempt and always pass.
    """
    h = np.asarray(getattr(string, "rapidities", string), dtype=complex)
    k = np.asarray(momenta, dtype=complex)
    if h.shape != k.shape:
        raise DomainError(f"{h.size} rapidities but {k.size} momenta")
    exempt = h.imag == 0
    flags = exempt | (np.sign(h.imag) == np.sign(k.imag))
    offending = tuple(int(i) for i in np.nonzero(~flags)[0])
    return NCReport(tuple(bool(f) for f in flags), tuple(bool(e) for e in exempt),
                    not offending, offending)


def _logsum(la, pa, lb, pb):
    """log-modulus and phase of ``exp(la + i pa) + exp(lb + i pb)``."""
    if la == -math.inf and lb == -math.inf:
        return -math.inf, 0.0
    m = max(la, lb)
    z = np.exp(la - m + 1j * pa) + np.exp(lb - m + 1j * pb)
    if z == 0:
        return -math.inf, 0.0
    return m + math.log(abs(z)), float(np.angle(z))


def _log_factor(num, den, pole_tol):
    """log-modulus and phase of ``num / den`` with explicit zero/pole handling."""
    if abs(den) <= pole_tol:
        raise UnmatchedPoleError(f"denominator {den!r} vanishes with no matching zero")
    if num == 0:
        return -math.inf, 0.0
    return math.log(abs(num)) - math.log(abs(den)), float(np.angle(num) - np.angle(den))


def bae_log_residual(string, momenta, L: float, beta: float | None = None,
                     pole_tol: float = POLE_TOL):
    """Per-particle ``(log|r_j|, arg r_j)`` of the BAE residual.

    Working in log space keeps residuals like ``exp(-kappa L)`` meaningful far
    below the double-precision underflow threshold.
    """
    h = np.asarray(getattr(string, "rapidities", string), dtype=complex)
    k = np.asarray(momenta, dtype=complex)
    if beta is None:
        beta = string.beta
    if h.shape != k.shape:
        raise DomainError(f"{h.size} rapidities but {k.size} momenta")
    if not L > 0:
        raise DomainError("the residual needs a finite positive L")
    tol = pole_tol * beta
    ib = 1j * beta
    out = []
    for j in range(h.size):
        forward = k[j].imag >= 0
        if forward:
            le, pe = -k[j].imag * L, k[j].real * L
            la, pa = _log_factor(h[j] - ib / 2, h[j] + ib / 2, tol)
        else:
            le, pe = k[j].imag * L, -k[j].real * L
            la, pa = _log_factor(h[j] + ib / 2, h[j] - ib / 2, tol)
        lp, pp = 0.0, 0.0
        for m in range(h.size):
            if m == j:
                continue
            d = h[j] - h[m]
            if forward:
                lf, pf = _log_factor(d - ib, d + ib, tol)
            else:
                lf, pf = _log_factor(d + ib, d - ib, tol)
            lp += lf
            pp += pf
            if lp == -math.inf:
                break
        out.append(_logsum(le + la, pe + pa, lp, pp))
    return out


def bae_residual(string, momenta, L: float, beta: float | None = None,
                 pole_tol: float = POLE_TOL) -> np.ndarray:
    """Complex residual vector; exponentially small entries may underflow to 0."""
    logs = bae_log_residual(string, momenta, L, beta=beta, pole_tol=pole_tol)
    return np.array([0j if lm == -math.inf else np.exp(lm + 1j * ph) for lm, ph in logs])


# -- one-particle quantization ----------------------------------------------------

def scattering_phase(h, beta):
    """Continuous phase of ``(h - i beta/2) / (h + i beta/2)``, in ``(-2 pi, 0)``."""
    return 2.0 * np.arctan(2.0 * np.asarray(h) / beta) - np.pi


def _phase_setup(params, branch, upper_cutoff):
    if params.L is None:
        raise DomainError("one-particle quantization needs a finite L")
    if branch not in (Branch.LOWER, Branch.UPPER):
        raise DomainError(f"branch must be lower or upper, got {branch}")
    lo, hi = medium.branch_window(params, branch, upper_cutoff)
    # lift so the phase starts near zero at the bottom of the window
    lift = 2.0 * np.pi if stringmap.rapidity_real(params, lo) < 0 else 0.0
    return lo, hi, lift


def phase_function(params: MediumParams, omega, lift: float = 0.0):
    """``k(w) L + theta(h(w))`` where ``theta`` is the lifted scattering phase."""
    k = stringmap.momentum_real(params, omega)
    h = stringmap.rapidity_real(params, omega)
    return k * params.L + scattering_phase(h, params.beta) + lift


def phase_derivative(params: MediumParams, omega):
    h = stringmap.rapidity_real(params, omega)
    t = 2.0 * h / params.beta
    dtheta = (4.0 / params.beta) / (1.0 + t * t) * stringmap.rapidity_derivative(params, omega)
    return stringmap.momentum_derivative(params, omega) * params.L + dtheta


def mode_range(params: MediumParams, branch: Branch = Branch.LOWER, upper_cutoff=None):
    """Half-open range of mode indices ``m >= 0`` whose level ``pi (2m + 1)``
    lies strictly inside the phase range of the guarded window."""
    lo, hi, lift = _phase_setup(params, branch, upper_cutoff)
    p_lo = float(phase_function(params, lo, lift))
    p_hi = float(phase_function(params, hi, lift))
    stop = max(0, math.ceil((p_hi / np.pi - 1.0) / 2.0))
    start = max(0, math.floor((p_lo / np.pi - 1.0) / 2.0) + 1)
    return range(start, max(start, stop))


def mode_count(params: MediumParams, branch: Branch = Branch.LOWER, upper_cutoff=None) -> int:
    return len(mode_range(params, branch, upper_cutoff))


def solve_one_particle(params: MediumParams, branch: Branch = Branch.LOWER, mode_index: int = 0,
                       upper_cutoff=None) -> float:
    """Real frequency of the ``mode_index``-th one-particle state on a branch.

    Solves ``k(w) L + theta(h(w)) = pi (2 m + 1)`` by bisection followed by a
    Newton polish kept inside the bracket.
    """
    lo, hi, lift = _phase_setup(params, branch, upper_cutoff)
    modes = mode_range(params, branch, upper_cutoff)
    if mode_index not in modes:
        raise NoRootError(
            f"mode {mode_index} not available on the {branch.value} branch "
            f"(modes {modes.start}..{modes.stop - 1} lie in the guarded window)")
    target = np.pi * (2 * mode_index + 1)

    def g(w):
        return float(phase_function(params, w, lift)) - target

    a, b = lo, hi
    if g(a) > 0 or g(b) < 0:
        raise NoRootError(f"no sign change of the phase equation on [{a}, {b}]")
    while b - a > 1e-6 * b:
        mid = 0.5 * (a + b)
        gm = g(mid)
        if gm == 0:
            return mid
        if gm < 0:
            a = mid
        else:
            b = mid
    w = 0.5 * (a + b)
    for _ in range(100):
        gw = g(w)
        if gw == 0:
            return w
        if gw < 0:
            a = w
        else:
            b = w
        w_new = w - gw / float(phase_derivative(params, w))
        if not a < w_new < b:
            w_new = 0.5 * (a + b)
        if abs(w_new - w) < NEWTON_RTOL * w:
            # one more step: near the upper edge the phase slope is ~1e5 L, so a
            # 1e-14 relative step still leaves a visible residual
            w_fin = w_new - g(w_new) / float(phase_derivative(params, w_new))
            return w_fin if a <= w_fin <= b else w_new
        w = w_new
    return w


def one_particle_residual(params: MediumParams, omega: float) -> complex:
    k = complex(stringmap.momentum_real(params, omega))
    h = complex(stringmap.rapidity_real(params, omega))
    return complex(bae_residual([h], [k], params.L, beta=params.beta)[0])


__all__ = [
    "BetheString", "NCReport", "build_string", "check_nc", "bae_residual",
    "bae_log_residual", "scattering_phase", "phase_function", "phase_derivative",
    "mode_range", "mode_count", "solve_one_particle", "one_particle_residual",
]
