"""Dielectric model of a medium with a single polariton gap.

The permittivity is

.. math:: \\varepsilon(\\omega) = \\frac{\\omega^2 - \\Omega_\\|^2}{\\omega^2 - \\Omega_\\perp^2}

which is positive on the lower branch ``(0, omega_perp)`` and the upper branch
``(omega_par, inf)`` and negative inside the gap ``(omega_perp, omega_par)``.
Outside the gap the refractive index is ``n = sqrt(eps)``; inside it the
relevant quantities are the decay index ``nu = sqrt(|eps|)`` and the evanescent
decay constant ``kappa = xi * nu``.

All functions accept scalars or numpy arrays.  Every formula is homogeneous in
frequency, so any unit may be used; ``MediumParams.normalized`` rescales to
``omega_perp = 1``.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, PoleError, RegimeError

#: Default relative width of the edge guard, in units of the gap width.
EDGE_TOL_REL = 1e-6
BETA_WARN = 0.1


class Branch(enum.Enum):
    LOWER = "lower"
    GAP = "gap"
    UPPER = "upper"
    EDGE = "edge"


@dataclass(frozen=True)
class MediumParams:
    """Physical configuration of the doped gap medium.

    Parameters
    ----------
    omega_perp, omega_par : float
        Lower and upper gap edges.
    omega12 : float
        Atomic transition frequency.
    beta : float
        Dimensionless coupling ``gamma / omega12``.
    L : float, optional
        Radius of the sphere carrying periodic boundary conditions (``c = 1``).
    omega12_shifted : float, optional
        Lamb-shifted transition frequency entering the rapidity map.  Defaults
        to ``omega12``.
    edge_tol_rel : float
        Edge guard, relative to the gap width.
    """

    omega_perp: float = 1.0
    omega_par: float = 1.2
    omega12: float = 1.1
    beta: float = 1e-3
    L: float | None = None
    omega12_shifted: float | None = None
    edge_tol_rel: float = EDGE_TOL_REL

    def __post_init__(self):
        if not (0 < self.omega_perp < self.omega_par):
            raise DomainError(
                f"need 0 < omega_perp < omega_par, got {self.omega_perp}, {self.omega_par}")
        if not self.omega12 > 0:
            raise DomainError(f"omega12 must be positive, got {self.omega12}")
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")
        if self.L is not None and not self.L > 0:
            raise DomainError(f"L must be positive, got {self.L}")
        if not self.edge_tol_rel > 0:
            raise DomainError("edge_tol_rel must be positive")
        if self.beta > BETA_WARN:
            warnings.warn(f"beta={self.beta} is not small; weak-coupling formulas degrade",
                          stacklevel=3)

    @property
    def omega_bar(self) -> float:
        return self.omega12 if self.omega12_shifted is None else self.omega12_shifted

    @property
    def gap_width(self) -> float:
        return self.omega_par - self.omega_perp

    @property
    def tau_edge(self) -> float:
        return self.edge_tol_rel * self.gap_width

    def with_L(self, L) -> MediumParams:
        return replace(self, L=L)

    def normalized(self) -> MediumParams:
        """Rescale so that ``omega_perp == 1``; lengths scale inversely."""
        s = self.omega_perp
        return replace(
            self,
            omega_perp=1.0,
            omega_par=self.omega_par / s,
            omega12=self.omega12 / s,
            L=None if self.L is None else self.L * s,
            omega12_shifted=None if self.omega12_shifted is None else self.omega12_shifted / s,
        )

    def require_gap_atom(self):
        """Raise unless the atomic frequency sits strictly inside the gap."""
        lo, hi = self.omega_perp + self.tau_edge, self.omega_par - self.tau_edge
        if not lo < self.omega12 < hi:
            raise RegimeError(
                f"omega12={self.omega12} must lie inside the gap ({self.omega_perp}, {self.omega_par})")


def classify(params: MediumParams, omega: float) -> Branch:
    if not omega > 0:
        raise DomainError(f"frequency must be positive, got {omega}")
    tau = params.tau_edge
    if abs(omega - params.omega_perp) <= tau or abs(omega - params.omega_par) <= tau:
        return Branch.EDGE
    if omega < params.omega_perp:
        return Branch.LOWER
    if omega < params.omega_par:
        return Branch.GAP
    return Branch.UPPER


def branch_window(params: MediumParams, branch: Branch, upper_cutoff: float | None = None):
    """Edge-guarded open interval for a branch, as ``(lo, hi)``.

    The upper branch is unbounded; it is cut at ``upper_cutoff`` (default
    ten times the upper gap edge).
    """
    tau = params.tau_edge
    if branch is Branch.LOWER:
        return tau, params.omega_perp - tau
    if branch is Branch.GAP:
        return params.omega_perp + tau, params.omega_par - tau
    if branch is Branch.UPPER:
        hi = 10.0 * params.omega_par if upper_cutoff is None else upper_cutoff
        return params.omega_par + tau, hi
    raise DomainError("the edge set has no interior window")


def permittivity(params: MediumParams, omega):
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise DomainError("frequency must be positive")
    d = w * w - params.omega_perp ** 2
    if np.any(d == 0):
        raise PoleError(f"permittivity has a pole at omega_perp={params.omega_perp}")
    out = (w * w - params.omega_par ** 2) / d
    return out[()] if out.ndim == 0 else out


def permittivity_derivative(params: MediumParams, omega):
    """d eps / d omega = 2 omega (omega_par^2 - omega_perp^2) / (omega^2 - omega_perp^2)^2."""
    w = np.asarray(omega, dtype=float)
    d = w * w - params.omega_perp ** 2
    if np.any(d == 0):
        raise PoleError(f"permittivity has a pole at omega_perp={params.omega_perp}")
    out = 2.0 * w * (params.omega_par ** 2 - params.omega_perp ** 2) / (d * d)
    return out[()] if out.ndim == 0 else out


def _outside(params, omega):
    w = np.asarray(omega, dtype=float)
    if np.any((w > params.omega_perp) & (w < params.omega_par)):
        raise DomainError("frequency inside the gap; use gap_decay_index there")
    if np.any(w == params.omega_perp):
        raise PoleError("refractive index diverges at omega_perp")
    return w


def refractive_index(params: MediumParams, omega):
    w = _outside(params, omega)
    return np.sqrt(permittivity(params, w))


def refractive_index_derivative(params: MediumParams, omega):
    """dn/domega = eps' / (2 n); diverges at the upper gap edge."""
    w = _outside(params, omega)
    eps = permittivity(params, w)
    return permittivity_derivative(params, w) / (2.0 * np.sqrt(eps))


def _inside(params, xi):
    x = np.asarray(xi, dtype=float)
    if np.any((x <= params.omega_perp) | (x >= params.omega_par)):
        raise DomainError(
            f"frequency must lie strictly inside the gap ({params.omega_perp}, {params.omega_par})")
    return x


def gap_decay_index(params: MediumParams, xi):
    """nu(xi) = sqrt(|eps(xi)|), the modulus of the imaginary refractive index in the gap."""
    x = _inside(params, xi)
    return np.sqrt(-permittivity(params, x))


def gap_decay_index_derivative(params: MediumParams, xi):
    x = _inside(params, xi)
    return -permittivity_derivative(params, x) / (2.0 * np.sqrt(-permittivity(params, x)))


def kappa(params: MediumParams, xi):
    """Evanescent decay constant kappa(xi) = xi * nu(xi)."""
    x = _inside(params, xi)
    return x * gap_decay_index(params, x)


def kappa_prime(params: MediumParams, xi):
    """Closed-form d kappa / d xi; negative throughout the gap."""
    x = _inside(params, xi)
    return gap_decay_index(params, x) + x * gap_decay_index_derivative(params, x)


def penetration_length(params: MediumParams, xi):
    return 1.0 / kappa(params, xi)


def log_derivative_n(params: MediumParams, omega):
    """n'/n = eps' / (2 eps), valid on either side of the gap and for complex omega."""
    w = np.asarray(omega)
    p2, q2 = params.omega_perp ** 2, params.omega_par ** 2
    return w * (q2 - p2) / ((w * w - p2) * (w * w - q2))


def is_close_to_edge(params: MediumParams, omega) -> bool:
    tau = params.tau_edge
    return bool(abs(omega - params.omega_perp) < tau or abs(omega - params.omega_par) < tau)


def canonical() -> MediumParams:
    """The reference configuration: gap (1, 1.2), omega12 = 1.1, beta = 1e-3."""
    return MediumParams(1.0, 1.2, 1.1, 1e-3)


__all__ = [
    "Branch", "MediumParams", "classify", "branch_window", "permittivity",
    "permittivity_derivative", "refractive_index", "refractive_index_derivative",
    "gap_decay_index", "gap_decay_index_derivative", "kappa", "kappa_prime",
    "penetration_length", "log_derivative_n", "canonical", "EDGE_TOL_REL",
]
