"""
Gaussian motional wavepackets and harmonic-oscillator shells.

Two atoms in Gaussian ground states separate into centre-of-mass and relative
coordinates; the relative coordinate is again Gaussian with variance
sigma_a^2 + sigma_b^2 per axis, centred on the well separation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, erfcx

from .errors import DomainError

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class PacketPair:
    """Two ground-state packets, widths in units of 1/k_L (i.e. k_L * sigma).

    ``separation`` is the distance between the well centres along z, also in
    units of 1/k_L.
    """

    widths_a: tuple[float, float, float]
    widths_b: tuple[float, float, float]
    separation: float = 0.0

    def __post_init__(self):
        for w in (*self.widths_a, *self.widths_b):
            if not w > 0:
                raise DomainError(f"packet widths must be > 0, got {w}")
        if len(self.widths_a) != 3 or len(self.widths_b) != 3:
            raise DomainError("packet widths need three components")

    @classmethod
    def isotropic(cls, eta: float, delta_z_bar: float = 0.0) -> "PacketPair":
        """Identical spherical packets of Lamb-Dicke parameter eta, Delta z = delta_z_bar * x_0."""
        w = (eta, eta, eta)
        return cls(w, w, delta_z_bar * eta)

    @classmethod
    def ellipsoidal(cls, eta_perp: float, eta_par: float, delta_z_bar: float = 0.0) -> "PacketPair":
        w = (eta_perp, eta_perp, eta_par)
        return cls(w, w, delta_z_bar * eta_perp)

    @property
    def eta_perp(self) -> float:
        return self.widths_a[0]

    @property
    def eta_par(self) -> float:
        return self.widths_a[2]

    @property
    def delta_z_bar(self) -> float:
        return self.separation / self.widths_a[0]

    @property
    def axially_symmetric(self) -> bool:
        return self.widths_a[0] == self.widths_a[1] and self.widths_b[0] == self.widths_b[1]


@dataclass(frozen=True)
class RelativeGaussian:
    mean: np.ndarray
    widths: np.ndarray

    def density(self, points) -> np.ndarray:
        """Normalized probability density at ``points`` of shape (..., 3)."""
        d = (np.asarray(points, dtype=float) - self.mean) / self.widths
        norm = (2.0 * math.pi) ** 1.5 * float(np.prod(self.widths))
        return np.exp(-0.5 * np.sum(d * d, axis=-1)) / norm

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self.mean + self.widths * rng.standard_normal((size, 3))


def relative_gaussian(pair: PacketPair) -> RelativeGaussian:
    a = np.asarray(pair.widths_a, dtype=float)
    b = np.asarray(pair.widths_b, dtype=float)
    return RelativeGaussian(mean=np.array([0.0, 0.0, pair.separation]),
                            widths=np.sqrt(a * a + b * b))


def _collision_at_zero(a_bar):
    return erf(a_bar / 2.0) - a_bar / SQRT_PI * np.exp(-a_bar * a_bar / 4.0)


_GL20 = np.polynomial.legendre.leggauss(20)


def _collision_small_radius(dz: float, a: float) -> float:
    """Gauss-Legendre on [0, a] of the radial density; the closed forms cancel to O(a^3) here."""
    x, w = _GL20
    s = 0.5 * a * (x + 1.0)
    sd = s * dz
    # (1 - e^{-sd})/(sd), equal to 1 at sd = 0
    ratio = np.ones_like(s)
    nz = sd > 0
    ratio[nz] = -np.expm1(-sd[nz]) / sd[nz]
    dens = s * s * np.exp(-0.25 * (s - dz) ** 2) * ratio / (2.0 * SQRT_PI)
    return float(0.5 * a * np.dot(w, dens))


def _collision_scalar(dz: float, a: float) -> float:
    if a == 0.0:
        return 0.0
    if math.isinf(a):
        return 1.0
    if a < 0.5:
        return _collision_small_radius(dz, a)
    if dz < 1e-6:
        # P is even in dz; the O(dz^2) correction is below 1e-12 here
        return float(_collision_at_zero(a))
    u = (dz - a) / 2.0
    v = (dz + a) / 2.0
    if u > 0.0:
        # Both tails are small: factor exp(-u^2) out of everything.
        # erfc(v) = erfcx(v) exp(-v^2) and v^2 - u^2 = dz*a.
        bracket = (0.5 * (erfcx(u) - erfcx(v) * math.exp(-dz * a))
                   + math.expm1(-dz * a) / (dz * SQRT_PI))
        p = math.exp(-u * u) * bracket
    else:
        gauss = math.exp(-u * u) * math.expm1(-dz * a) / (dz * SQRT_PI)
        p = gauss + 0.5 * (erf(v) - erf(u))
    return min(1.0, max(0.0, p))


def collision_probability(delta_z_bar, a_bar):
    """Probability that two atoms in separated spherical wells lie within a.

    Both arguments are in units of the single-particle width x_0.  The relative
    coordinate is a 3-D Gaussian with variance 2 x_0^2 per axis centred at
    Delta z, so this is its radial CDF at a.  Accepts scalars or arrays.
    """
    dz = np.abs(np.asarray(delta_z_bar, dtype=float))
    a = np.asarray(a_bar, dtype=float)
    if np.any(a < 0):
        raise DomainError("a_bar must be >= 0")
    dz, a = np.broadcast_arrays(dz, a)
    out = np.vectorize(_collision_scalar, otypes=[float])(dz, a)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, order=True)
class OscillatorState:
    """Isotropic 3-D oscillator level |n, l, m>."""

    n: int
    l: int
    m: int

    def __post_init__(self):
        if self.n < 0 or self.l < 0 or abs(self.m) > self.l:
            raise DomainError(f"invalid oscillator state |{self.n},{self.l},{self.m}>")

    @property
    def quanta(self) -> int:
        return 2 * self.n + self.l

    @property
    def energy(self) -> float:
        """Energy in units of hbar*omega_osc."""
        return self.quanta + 1.5

    def __str__(self):
        return f"|{self.n}{self.l}{self.m}>"


def shell_degeneracy(total_quanta: int) -> int:
    return (total_quanta + 1) * (total_quanta + 2) // 2


def shell_states(total_quanta: int) -> list[OscillatorState]:
    """All |n, l, m> with 2n + l = N, ordered by n then l then m."""
    if total_quanta < 0:
        raise DomainError("total_quanta must be >= 0")
    states = []
    for n in range(total_quanta // 2 + 1):
        l = total_quanta - 2 * n
        states.extend(OscillatorState(n, l, m) for m in range(-l, l + 1))
    return states
