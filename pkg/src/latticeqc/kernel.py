"""
Two-atom radiative interaction tensor T = f + i g.

With x = k_L r and unit separation vector n, the free-space retarded kernel is

    T_ij(x) = (3/2) e^{ix} [ (d_ij - n_i n_j) / x
                             + (d_ij - 3 n_i n_j) (i/x^2 - 1/x^3) ]

The imaginary part g is the cooperative-decay kernel: g -> identity as x -> 0
(Dicke limit) and |g| <= 1 everywhere.  The real part f sets the coherent
level shift through V_dd = -(hbar Gamma / 2) f; its near field is

    f_ij -> -(3/2) (d_ij - 3 n_i n_j) / x^3,   so   f_zz x^3 -> 3 P2(cos theta)

Head-to-tail dipoles (n along the polarization) therefore have f > 0 and an
attractive V_dd, and the figure of merit -f/(2(1+g)) comes out negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# columns are e_{-1}, e_0, e_{+1}
_SPHERICAL = np.array(
    [[1.0, 0.0, -1.0],
     [-1j, 0.0, -1j],
     [0.0, math.sqrt(2.0), 0.0]],
    dtype=complex,
) / math.sqrt(2.0)

_Q_INDEX = {-1: 0, 0: 1, 1: 2}


@dataclass(frozen=True)
class RelativeCoordinate:
    kr_vector: np.ndarray

    @classmethod
    def from_polar(cls, kr: float, theta: float, phi: float = 0.0) -> "RelativeCoordinate":
        st = math.sin(theta)
        return cls(np.array([kr * st * math.cos(phi), kr * st * math.sin(phi), kr * math.cos(theta)]))

    @property
    def kr(self) -> float:
        return float(np.linalg.norm(self.kr_vector))

    @property
    def theta(self) -> float:
        return math.acos(max(-1.0, min(1.0, self.kr_vector[2] / self.kr)))


@dataclass(frozen=True)
class KernelSample:
    """Cartesian real and imaginary parts of the kernel at one separation."""

    f: np.ndarray
    g: np.ndarray

    def f_spherical(self) -> np.ndarray:
        return spherical_from_cartesian(self.f)

    def g_spherical(self) -> np.ndarray:
        return spherical_from_cartesian(self.g)

    def f_qq(self, q: int, q_prime: int) -> complex:
        return self.f_spherical()[_Q_INDEX[q], _Q_INDEX[q_prime]]

    def g_qq(self, q: int, q_prime: int) -> complex:
        return self.g_spherical()[_Q_INDEX[q], _Q_INDEX[q_prime]]


def spherical_from_cartesian(tensor) -> np.ndarray:
    """Components M_qq' = e_q^dagger . T . e_q' in the order q = -1, 0, +1."""
    t = np.asarray(tensor)
    return _SPHERICAL.conj().T @ t @ _SPHERICAL


def cartesian_from_spherical(tensor) -> np.ndarray:
    t = np.asarray(tensor)
    return _SPHERICAL @ t @ _SPHERICAL.conj().T


def radial_coefficients(x, near_field: bool = False):
    """Complex coefficients (a, b) with T = a*I + b*n n^T.

    Works elementwise on arrays of x > 0.  With ``near_field`` only the 1/x^3
    part of the real kernel is kept and the imaginary part is set to the Dicke
    limit (a = 1j, b = 0 for g).
    """
    x = np.asarray(x, dtype=float)
    if near_field:
        inv3 = x**-3.0
        a = -1.5 * inv3 + 1j
        b = 4.5 * inv3 + 0j
        return a, b
    phase = np.exp(1j * x)
    c1 = 1.0 / x
    c3 = 1j / x**2 - 1.0 / x**3
    a = 1.5 * phase * (c1 + c3)
    b = 1.5 * phase * (-c1 - 3.0 * c3)
    # Im parts cancel catastrophically for small x; Taylor series there
    small = x < 1e-2
    if np.any(small):
        xs = x[small]
        x2 = xs * xs
        a_g = 1.0 - x2 / 5.0 + 3.0 * x2**2 / 280.0 - x2**3 / 3780.0 + x2**4 / 266112.0
        b_g = x2 / 10.0 - x2**2 / 140.0 + x2**3 / 5040.0 - x2**4 / 332640.0
        a = a.copy()
        b = b.copy()
        a[small] = a[small].real + 1j * a_g
        b[small] = b[small].real + 1j * b_g
    return a, b


def kernel_at(coord: RelativeCoordinate, near_field: bool = False) -> KernelSample:
    """Evaluate f and g at a relative coordinate.

    Raises
    ------
    DomainError
        If k_L r is zero (the real part diverges).
    """
    vec = np.asarray(coord.kr_vector, dtype=float)
    x = float(np.linalg.norm(vec))
    if x == 0.0:
        raise DomainError("kernel undefined at zero separation")
    n = vec / x
    a, b = radial_coefficients(np.array([x]), near_field=near_field)
    t = a[0] * np.eye(3) + b[0] * np.outer(n, n)
    return KernelSample(f=t.real.copy(), g=t.imag.copy())


def component_on_grid(vectors, q: int, near_field: bool = False):
    """f_qq and g_qq evaluated at many separation vectors.

    ``vectors`` has shape (..., 3).  Only diagonal components are needed by the
    figure of merit, and for real symmetric T they are real:

        q = 0:   T_zz
        q = +-1: (T_xx + T_yy) / 2
    """
    v = np.asarray(vectors, dtype=float)
    x = np.linalg.norm(v, axis=-1)
    if np.any(x == 0.0):
        raise DomainError("kernel undefined at zero separation")
    a, b = radial_coefficients(x, near_field=near_field)
    if q == 0:
        nn = (v[..., 2] / x) ** 2
    elif q in (1, -1):
        nn = 0.5 * (v[..., 0] ** 2 + v[..., 1] ** 2) / x**2
    else:
        raise DomainError(f"q must be -1, 0 or +1, got {q}")
    t = a + b * nn
    return t.real, t.imag
