"""Momentum and rapidity maps and their continuations off the real axis.

For a real frequency outside the gap the maps are

    k(w) = w n(w),    h(w) = (w12 / w)^2 (w - w12_bar) / (w n(w)^5).

Inside the gap the square root is fixed once and for all by
``n(xi +/- i0) = +/- i nu(xi)``.  With that branch

    k = i s w nu(w),    h = -i s phi(w),    phi(w) = (w - w12_bar) f(w),
    f(w) = w12^2 / (w^3 nu(w)^5),

where ``s = sgn(Im w)``.  :func:`continue_gap` is the first-order expansion of
these in ``eta = Im w``; :func:`gap_maps` evaluates them at finite ``eta`` on the
same branch, which the exact soliton solver needs to see the ``eta**2`` terms.
"""
from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass

import numpy as np

from . import medium
from .errors import DomainError, RegimeError
from .medium import MediumParams

#: Relative error of the quadratic phi model that defines ``valid_radius``.
LINEARIZATION_RTOL = 0.01
OUTSIDE_ETA_WARN = 0.1


@dataclass(frozen=True)
class Linearization:
    """Expansion ``phi(xi) ~ a x + b x**2`` with ``x = xi - w12_bar``."""

    a: float
    b: float
    center: float
    valid_radius: float

    def linear(self, xi):
        return self.a * (np.asarray(xi) - self.center)

    def quadratic(self, xi):
        x = np.asarray(xi) - self.center
        return self.a * x + self.b * x * x


# -- outside the gap ---------------------------------------------------------

def momentum_real(params: MediumParams, lam):
    lam = np.asarray(lam, dtype=float)
    return lam * medium.refractive_index(params, lam)


def momentum_derivative(params: MediumParams, lam):
    lam = np.asarray(lam, dtype=float)
    n = medium.refractive_index(params, lam)
    return n * (1.0 + lam * medium.log_derivative_n(params, lam))


def rapidity_real(params: MediumParams, lam):
    lam = np.asarray(lam, dtype=float)
    n = medium.refractive_index(params, lam)
    return params.omega12 ** 2 * (lam - params.omega_bar) / (lam ** 3 * n ** 5)


def rapidity_derivative(params: MediumParams, lam):
    lam = np.asarray(lam, dtype=float)
    n = medium.refractive_index(params, lam)
    g = params.omega12 ** 2 / (lam ** 3 * n ** 5)
    dlog = 3.0 / lam + 5.0 * medium.log_derivative_n(params, lam)
    return g * (1.0 - (lam - params.omega_bar) * dlog)


def continue_outside(params: MediumParams, lam: float, eta: float):
    """First-order continuation ``k(lam) + i eta k'(lam)``, ``h(lam) + i eta h'(lam)``."""
    if abs(eta) > OUTSIDE_ETA_WARN * lam:
        warnings.warn(f"eta/lambda = {eta / lam:.3g} exceeds {OUTSIDE_ETA_WARN}; "
                      "first-order continuation is unreliable", stacklevel=2)
    k = momentum_real(params, lam) + 1j * eta * momentum_derivative(params, lam)
    h = rapidity_real(params, lam) + 1j * eta * rapidity_derivative(params, lam)
    return complex(k), complex(h)


# -- inside the gap, real part --------------------------------------------------

def form_factor(params: MediumParams, xi):
    """f(xi) = w12^2 / (xi^3 nu(xi)^5)."""
    xi = np.asarray(xi, dtype=float)
    nu = medium.gap_decay_index(params, xi)
    return params.omega12 ** 2 / (xi ** 3 * nu ** 5)


def form_factor_derivative(params: MediumParams, xi):
    xi = np.asarray(xi, dtype=float)
    return -form_factor(params, xi) * (3.0 / xi + 5.0 * medium.log_derivative_n(params, xi))


def phi(params: MediumParams, xi):
    xi = np.asarray(xi, dtype=float)
    return (xi - params.omega_bar) * form_factor(params, xi)


def phi_prime(params: MediumParams, xi):
    xi = np.asarray(xi, dtype=float)
    return form_factor(params, xi) + (xi - params.omega_bar) * form_factor_derivative(params, xi)


def continue_gap(params: MediumParams, xi: float, eta: float):
    """First-order gap continuation of ``(k, h)`` at ``w = xi + i eta``.

    ``k = sgn(eta) (-eta kappa'(xi) + i kappa(xi))`` and
    ``h = sgn(eta) (eta phi'(xi) - i phi(xi))``.
    """
    if eta == 0:
        raise DomainError("eta = 0 is the branch point of the gap continuation")
    s = 1.0 if eta > 0 else -1.0
    k = s * complex(-eta * medium.kappa_prime(params, xi), medium.kappa(params, xi))
    h = s * complex(eta * phi_prime(params, xi), -phi(params, xi))
    return k, h


# -- inside the gap, finite eta --------------------------------------------------

def _nu_complex(params, w):
    minus_eps = -(w * w - params.omega_par ** 2) / (w * w - params.omega_perp ** 2)
    if minus_eps.real <= 0:
        raise DomainError(f"w={w} is too far from the gap for the fixed square-root branch")
    return np.sqrt(minus_eps)


def gap_maps(params: MediumParams, xi: float, eta: float):
    """Momentum and rapidity at ``w = xi + i eta`` on the fixed gap branch.

    ``eta == 0`` is read as the upper rim ``xi + i0``.

    Returns
    -------
    k, dk, h, dh : complex
        Values and complex derivatives with respect to ``w``.
    """
    if not params.omega_perp < xi < params.omega_par:
        raise DomainError(f"xi={xi} is not inside the gap")
    s = -1.0 if eta < 0 else 1.0
    w = complex(xi, eta)
    nu = _nu_complex(params, w)
    dlog_nu = complex(medium.log_derivative_n(params, w))
    f = params.omega12 ** 2 / (w ** 3 * nu ** 5)
    x = w - params.omega_bar
    ph = x * f
    dph = f * (1.0 - x * (3.0 / w + 5.0 * dlog_nu))
    k = 1j * s * w * nu
    dk = 1j * s * nu * (1.0 + w * dlog_nu)
    return k, dk, -1j * s * ph, -1j * s * dph


def gap_rapidity(params: MediumParams, xi: float, eta: float) -> complex:
    return gap_maps(params, xi, eta)[2]


def gap_momentum(params: MediumParams, xi: float, eta: float) -> complex:
    return gap_maps(params, xi, eta)[0]


# -- linearization -------------------------------------------------------------

def _quadratic_rel_error(params, a, b, x):
    exact = phi(params, params.omega_bar + x)
    return np.abs(a * x + b * x * x - exact) / np.abs(exact)


def _valid_radius(params, a, b, rtol):
    w0 = params.omega_bar
    rmax = min(w0 - params.omega_perp, params.omega_par - w0) - 2 * params.tau_edge
    grid = np.geomspace(rmax * 1e-9, rmax, 4000)

    def err(r):
        return max(_quadratic_rel_error(params, a, b, r), _quadratic_rel_error(params, a, b, -r))

    errs = np.maximum(_quadratic_rel_error(params, a, b, grid),
                      _quadratic_rel_error(params, a, b, -grid))
    bad = np.nonzero(errs >= rtol)[0]
    if bad.size == 0:
        return float(rmax)
    i = bad[0]
    if i == 0:
        return 0.0
    lo, hi = grid[i - 1], grid[i]
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if err(mid) < rtol:
            lo = mid
        else:
            hi = mid
    return float(lo)


@functools.lru_cache(maxsize=256)
def linearize(params: MediumParams, rtol: float = LINEARIZATION_RTOL) -> Linearization:
    """Expand ``phi`` about the atomic frequency: ``a = f(w12)``, ``b = f'(w12)``.

    ``valid_radius`` is the largest ``r`` such that the quadratic model stays
    within ``rtol`` relative error of the exact ``phi`` on ``|xi - w12| <= r``.
    """
    try:
        params.require_gap_atom()
    except RegimeError as exc:
        raise RegimeError(f"cannot linearize phi: {exc}") from None
    w0 = params.omega_bar
    a = float(form_factor(params, w0))
    b = float(form_factor_derivative(params, w0))
    return Linearization(a=a, b=b, center=w0, valid_radius=_valid_radius(params, a, b, rtol))


__all__ = [
    "Linearization", "momentum_real", "momentum_derivative", "rapidity_real",
    "rapidity_derivative", "continue_outside", "form_factor", "form_factor_derivative",
    "phi", "phi_prime", "continue_gap", "gap_maps", "gap_rapidity", "gap_momentum",
    "linearize", "LINEARIZATION_RTOL",
]
