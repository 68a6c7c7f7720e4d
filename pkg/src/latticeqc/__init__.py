"""Design numbers for catalysed dipole-dipole gates between atoms in an optical lattice."""

from .errors import ConvergenceError, DomainError
from .fom import (FomResult, kappa_ellipsoid, kappa_quadrature, kappa_separated_wells,
                  kappa_swap, optimize_aspect_ratio, optimize_separation)
from .species import SPECIES, AtomSpecies, LatticeConfig, TrapModel, derive_trap, get_species

__all__ = [
    "AtomSpecies", "ConvergenceError", "DomainError", "FomResult", "LatticeConfig",
    "SPECIES", "TrapModel", "derive_trap", "get_species", "kappa_ellipsoid",
    "kappa_quadrature", "kappa_separated_wells", "kappa_swap", "optimize_aspect_ratio",
    "optimize_separation",
]

__version__ = "0.1.0"
