"""
Species constants, lattice light shifts and harmonic-trap quantities.

Everything here is dimensionless:

    energies      in units of hbar*Gamma (or E_R where the name says so)
    lengths       in units of 1/k_L
    rates         in units of Gamma
    intensities   in units of the saturation intensity I_0

The only place SI numbers appear is :func:`to_si`, which needs the species
linewidth and wavelength.

For a blue-detuned 1-D lattice ``U(x) = U_0 cos^2(k_L x)`` an atom sits at a
node, where the potential is harmonic with

    hbar*omega_osc / E_R = 2 * sqrt(U_0 / E_R)
    eta**2 = (k_L x_0)**2 = E_R / (hbar*omega_osc)

so U_0 = 1e4 E_R gives hbar*omega_osc = 200 E_R and eta = 0.0707.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AtomSpecies:
    """Alkali species constants.

    Parameters
    ----------
    name : str
        Label used by the registry and the CLI.
    gamma_over_recoil : float
        hbar*Gamma / E_R for the D2 line.
    nuclear_spin : float
        Nuclear spin I (half-integer allowed).
    linewidth_hz : float, optional
        Gamma / 2pi in Hz, only needed for SI conversion.
    wavelength_nm : float, optional
        D2 wavelength, only needed for SI conversion.
    """

    name: str
    gamma_over_recoil: float
    nuclear_spin: float
    linewidth_hz: float | None = None
    wavelength_nm: float | None = None

    def __post_init__(self):
        if not self.gamma_over_recoil > 0:
            raise DomainError(f"gamma_over_recoil must be > 0, got {self.gamma_over_recoil}")
        if self.nuclear_spin < 0.5 or (2 * self.nuclear_spin) % 1:
            raise DomainError(f"nuclear_spin must be a half-integer >= 1/2, got {self.nuclear_spin}")

    @property
    def f_up(self) -> float:
        return self.nuclear_spin + 0.5

    @property
    def f_down(self) -> float:
        return self.nuclear_spin - 0.5

    @property
    def gamma_si(self) -> float:
        """Natural linewidth Gamma in s^-1."""
        if self.linewidth_hz is None:
            raise DomainError(f"species {self.name!r} has no linewidth for SI conversion")
        return TWO_PI * self.linewidth_hz

    def hyperfine_factor(self) -> float:
        """The (2/3 - 1/(3 F_up)) weight of lattice scattering."""
        return 2.0 / 3.0 - 1.0 / (3.0 * self.f_up)

    def with_overrides(self, **fields) -> "AtomSpecies":
        return replace(self, **fields)


# hbar*Gamma/E_R for Cs is the rounded 2.5e3 used throughout the error budget;
# the linewidth is 2pi x 5.2 MHz.
SPECIES = {
    "cs": AtomSpecies("cs", 2.5e3, 3.5, linewidth_hz=5.2e6, wavelength_nm=852.3),
    "rb": AtomSpecies("rb", 1.61e3, 1.5, linewidth_hz=6.07e6, wavelength_nm=780.2),
    "na": AtomSpecies("na", 3.92e2, 1.5, linewidth_hz=9.79e6, wavelength_nm=589.0),
}


def get_species(name: str) -> AtomSpecies:
    try:
        return SPECIES[name.lower()]
    except KeyError:
        known = ", ".join(sorted(SPECIES))
        raise DomainError(f"unknown species {name!r} (known: {known})") from None


@dataclass(frozen=True)
class LatticeConfig:
    """One lattice beam pair.

    ``detuning_ratio`` is Delta_L/Gamma, positive for blue detuning.  If
    ``well_depth`` (U_0/E_R) is not given it is derived from the intensity and
    detuning with :func:`well_depth_from_intensity`.
    """

    intensity_ratio: float
    detuning_ratio: float
    polarization_angle: float = 0.0
    well_depth: float | None = None

    def __post_init__(self):
        if not self.intensity_ratio > 0:
            raise DomainError(f"intensity_ratio must be > 0, got {self.intensity_ratio}")
        if self.detuning_ratio == 0 or not math.isfinite(self.detuning_ratio):
            raise DomainError("detuning_ratio must be finite and non-zero")
        if not 0.0 <= self.polarization_angle < math.pi:
            raise DomainError(f"polarization_angle must lie in [0, pi), got {self.polarization_angle}")


def well_depth_from_intensity(species: AtomSpecies, intensity_ratio: float,
                              detuning_ratio: float) -> float:
    """U_0/E_R for single-beam intensity I_1/I_0 at detuning Delta_L/Gamma.

    Uses U_0/(hbar Gamma) = (I_1/I_0) / (3 |Delta_L/Gamma|), the relation that
    underlies the closed-form error budget in :mod:`latticeqc.budget`.
    """
    return species.gamma_over_recoil * intensity_ratio / (3.0 * abs(detuning_ratio))


@dataclass(frozen=True)
class TrapModel:
    omega_osc: float       # hbar*omega_osc / E_R
    ground_width: float    # x_0 in units of 1/k_L
    lamb_dicke: float      # eta = k_L x_0
    scatter_rate: float    # Gamma'/Gamma
    well_depth: float      # U_0 / E_R
    species: AtomSpecies
    lattice: LatticeConfig

    @property
    def omega_over_gamma(self) -> float:
        return self.omega_osc / self.species.gamma_over_recoil

    @property
    def oscillations_per_scatter(self) -> float:
        """omega_osc / Gamma'."""
        return self.omega_over_gamma / self.scatter_rate


def derive_trap(species: AtomSpecies, lattice: LatticeConfig) -> TrapModel:
    """Harmonic approximation to a node-trapped atom in a blue lattice.

    Raises
    ------
    DomainError
        If the well depth is not positive or the lattice is red detuned (a red
        lattice traps at antinodes, which this node model does not describe).
    """
    if lattice.detuning_ratio < 0:
        raise DomainError("red-detuned lattice traps at antinodes; node trapping needs blue detuning")
    depth = lattice.well_depth
    if depth is None:
        depth = well_depth_from_intensity(species, lattice.intensity_ratio, lattice.detuning_ratio)
    if not depth > 0:
        raise DomainError(f"well depth must be > 0, got {depth}")

    omega = 2.0 * math.sqrt(depth)
    eta = 1.0 / math.sqrt(omega)
    # ground-state average of sin^2(k_L x) at the node is eta^2
    depth_over_gamma = depth / species.gamma_over_recoil
    scatter = depth_over_gamma * eta**2 / lattice.detuning_ratio
    return TrapModel(omega_osc=omega, ground_width=eta, lamb_dicke=eta,
                     scatter_rate=scatter, well_depth=depth,
                     species=species, lattice=lattice)


def to_si(species: AtomSpecies, *, rate=None, energy=None, length=None):
    """Convert dimensionless quantities to SI.

    ``rate`` is in units of Gamma (-> s^-1), ``energy`` in units of E_R
    (-> angular frequency in s^-1, i.e. E/hbar), ``length`` in units of 1/k_L
    (-> metres).  Exactly one keyword must be given.
    """
    given = [v is not None for v in (rate, energy, length)]
    if sum(given) != 1:
        raise TypeError("to_si takes exactly one of rate, energy, length")
    if rate is not None:
        return rate * species.gamma_si
    if energy is not None:
        return energy * species.gamma_si / species.gamma_over_recoil
    if species.wavelength_nm is None:
        raise DomainError(f"species {species.name!r} has no wavelength for SI conversion")
    k = TWO_PI / (species.wavelength_nm * 1e-9)
    return length / k


@dataclass(frozen=True)
class IrreducibleShift:
    scalar_part: float           # U_J / U_1
    fictitious_field: np.ndarray  # B_eff / U_1, real 3-vector


def decompose_light_shift(polarization) -> IrreducibleShift:
    """Split the light shift for a local polarization into scalar and vector parts.

    The scalar part is (2/3)|eps|^2 and the fictitious magnetic field is
    -(i/3) eps* x eps, both in units of the single-beam shift U_1.  A real
    (linear) polarization has no vector part.
    """
    eps = np.asarray(polarization, dtype=complex)
    if eps.shape != (3,):
        raise DomainError(f"polarization must be a 3-vector, got shape {eps.shape}")
    norm2 = float(np.vdot(eps, eps).real)
    if norm2 == 0.0:
        raise DomainError("polarization vector has zero length")
    field = (-1j / 3.0) * np.cross(eps.conj(), eps)
    # eps* x eps is purely imaginary, so the field is real
    return IrreducibleShift(scalar_part=2.0 * norm2 / 3.0, fictitious_field=field.real.copy())


def spherical_unit(q: int) -> np.ndarray:
    """Spherical basis vector e_q = -q(e_x + i q e_y)/sqrt(2) for q = +-1, e_z for q = 0."""
    if q == 0:
        return np.array([0.0, 0.0, 1.0], dtype=complex)
    if q in (1, -1):
        return -q * np.array([1.0, 1j * q, 0.0]) / math.sqrt(2.0)
    raise DomainError(f"q must be -1, 0 or +1, got {q}")


def lin_theta_lin_polarization(kz: float, theta: float) -> np.ndarray:
    """Local (unnormalized) polarization of two counterpropagating linear beams.

    Beam one is x-polarized travelling along +z, beam two is polarized at angle
    ``theta`` to x and travels along -z.  Each beam has unit amplitude.
    """
    forward = np.array([1.0, 0.0, 0.0]) * np.exp(1j * kz)
    backward = np.array([math.cos(theta), math.sin(theta), 0.0]) * np.exp(-1j * kz)
    return forward + backward


def transport_displacement(theta: float) -> float:
    """Relative shift of the sigma+ and sigma- standing waves, in wavelengths.

    Rotating the polarization angle by theta moves the two species apart by
    theta/(2pi) wavelengths, so atoms a distance dz apart are superimposed by a
    rotation of 2pi*dz/lambda.
    """
    if not 0.0 <= theta < math.pi:
        raise DomainError(f"theta must lie in [0, pi), got {theta}")
    return theta / TWO_PI


def rotation_for_separation(dz_over_lambda: float) -> float:
    """Polarization rotation (radians) that closes a gap of ``dz_over_lambda``."""
    return TWO_PI * dz_over_lambda


def is_adiabatic(rotation_time: float, omega_osc: float) -> bool:
    """True if a rotation lasting ``rotation_time`` is slow on the trap period.

    Both arguments must use the same time unit (e.g. 1/Gamma and Gamma).  The
    move is flagged non-adiabatic when 2pi/t >= omega_osc.
    """
    if rotation_time <= 0:
        return False
    return TWO_PI / rotation_time < omega_osc
