"""Bethe-ansatz spectrum of a two-level atom in an isotropic frequency-gap medium."""
from .errors import (ConfigError, ConvergenceError, DomainError, GapSpecError,
                     LinearizationError, LmaxExceededError, NoRootError, PoleError,
                     RegimeError, UnmatchedPoleError, UnsupportedRegimeError)
from .medium import Branch, MediumParams, canonical, classify
from .stringmap import Linearization, linearize
from .bae import BetheString, NCReport, build_string, check_nc, bae_residual, solve_one_particle
from .spectrum import (GapSolitonState, Mode, OrdinarySoliton, PinnedSoliton, band_structure,
                       dissociation_energy, fit_effective_mass, gap_pair, gap_soliton,
                       gap_soliton_corrected, gap_soliton_exact, gap_soliton_linear,
                       ordinary_soliton, pinned_soliton)

__version__ = "0.1.0"
