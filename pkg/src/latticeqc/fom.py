"""
Figure of merit kappa = <V_dd> / <hbar Gamma_tot> for a catalysed atom pair.

For a dipole along e_q,

    kappa = -<f_qq> / (2 (1 + <g_qq>))

with the average taken over the relative-coordinate density.  In the near
field <g> ~ 1 and f_zz ~ 3 P2(cos theta)/(k r)^3, so kappa ~ -<f>/4 and every
closed form below scales as eta^-3.  Signs follow :mod:`latticeqc.kernel`:
head-to-tail geometries give kappa < 0, side-by-side ones kappa > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import erf

from .errors import ConvergenceError, DomainError
from .kernel import component_on_grid
from .motional import PacketPair, relative_gaussian

SQRT_PI = math.sqrt(math.pi)
SWAP_PREFACTOR = 1.0 / (140.0 * SQRT_PI)

CLOSED_FORM = "closed-form"
QUADRATURE = "quadrature"


@dataclass(frozen=True)
class FomResult:
    kappa: float
    c_kappa: float
    mean_f: float
    mean_g: float
    method: str
    error_estimate: float = 0.0

    @classmethod
    def from_means(cls, mean_f, mean_g, eta_ref, method, error_estimate=0.0):
        mean_f, mean_g = float(mean_f), float(mean_g)
        kappa = -mean_f / (2.0 * (1.0 + mean_g))
        return cls(kappa, kappa * eta_ref**3, mean_f, mean_g, method, float(error_estimate))

    @classmethod
    def near_field(cls, kappa, eta_ref):
        """Closed forms assume <g> = 1, so <f> = -4 kappa."""
        kappa = float(kappa)
        return cls(kappa, kappa * eta_ref**3, -4.0 * kappa, 1.0, CLOSED_FORM)


# -- closed forms -----------------------------------------------------------

def _ellipsoid_bracket(w: float) -> float:
    """Angular bracket of the ellipsoidal-well result, w = (eta_perp/eta_par)^2 - 1.

    Equals -2 - 3/y^2 + 3(1/y^3 + 1/y) atan(y) with y^2 = w, continued to
    artanh for w < 0, and 6 sum_k (-w)^k / ((2k+1)(2k+3)) near w = 0.
    """
    if abs(w) < 0.05:
        total = 0.0
        term = 1.0
        for k in range(1, 40):
            term *= -w
            total += term / ((2 * k + 1) * (2 * k + 3))
        return 6.0 * total
    if w > 0:
        y = math.sqrt(w)
        return -2.0 - 3.0 / w + 3.0 * (1.0 / y**3 + 1.0 / y) * math.atan(y)
    v = math.sqrt(-w)
    if v >= 1.0:
        raise DomainError("eta_par/eta_perp must be finite")
    return -2.0 + 3.0 / v**2 + 3.0 * (1.0 / v - 1.0 / v**3) * math.atanh(v)


def kappa_ellipsoid(eta_perp: float, eta_par: float) -> FomResult:
    """Two ground-state atoms in one axially symmetric well, near-field kernel.

    Negative for wells elongated along the polarization axis (eta_par >
    eta_perp), positive for flattened ones, zero for a sphere.
    """
    if not (eta_perp > 0 and eta_par > 0):
        raise DomainError("Lamb-Dicke parameters must be > 0")
    w = (eta_perp / eta_par) ** 2 - 1.0
    kappa = -_ellipsoid_bracket(w) / (16.0 * SQRT_PI * eta_perp**2 * eta_par)
    return FomResult.near_field(kappa, eta_perp)


_SEPARATED_SERIES = None


def _separated_series_coefficients(terms: int = 12):
    # sqrt(pi) * g(D) = sum_k c_k D^(2k), from the Taylor series of exp and erf
    coeffs = []
    for k in range(1, terms + 1):
        c = (0.125 * (-1) ** k / (4**k * math.factorial(k))
             + 0.75 * (-1) ** (k + 1) / (4 ** (k + 1) * math.factorial(k + 1))
             - 1.5 * (-1) ** (k + 1) / (2 ** (2 * k + 3) * math.factorial(k + 1) * (2 * k + 3)))
        coeffs.append(c)
    return coeffs


def separated_wells_shape(delta_z_bar: float) -> float:
    """kappa * eta^3 for two spherical wells a distance delta_z_bar * x_0 apart."""
    global _SEPARATED_SERIES
    d = abs(delta_z_bar)
    if d < 0.3:
        if _SEPARATED_SERIES is None:
            _SEPARATED_SERIES = _separated_series_coefficients()
        d2 = d * d
        total = 0.0
        power = 1.0
        for c in _SEPARATED_SERIES:
            power *= d2
            total += c * power
        return total / SQRT_PI
    return (math.exp(-0.25 * d * d) / SQRT_PI * (0.125 + 0.75 / (d * d))
            - 0.75 * erf(0.5 * d) / d**3)


def kappa_separated_wells(eta: float, delta_z_bar: float) -> FomResult:
    if not eta > 0:
        raise DomainError("eta must be > 0")
    if delta_z_bar < 0:
        raise DomainError("delta_z_bar must be >= 0")
    return FomResult.near_field(separated_wells_shape(delta_z_bar) / eta**3, eta)


def kappa_swap(eta: float) -> FomResult:
    """Stretched-state sqrt(SWAP) protocol: kappa = +1/(140 sqrt(pi) eta^3).

    Both atoms circulate in the plane normal to the pi-polarized dipoles, so
    the pair sits mostly side by side and the shift is repulsive (kappa > 0).
    """
    if not eta > 0:
        raise DomainError("eta must be > 0")
    return FomResult.near_field(SWAP_PREFACTOR / eta**3, eta)


# -- quadrature -------------------------------------------------------------

def _gauss_legendre_panels(lo: float, hi: float, panels: int, order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _expectations(pair: PacketPair, q: int, near_field: bool, level: int):
    rel = relative_gaussian(pair)
    s_min = float(rel.widths.min())
    r_hi = abs(pair.separation) + 12.0 * float(rel.widths.max())
    r_lo = 1e-7 * s_min

    # r = exp(u): the r^2 Jacobian times 1/r^3 leaves an integrable 1/r,
    # whose angular average vanishes at the origin
    u, wu = _gauss_legendre_panels(math.log(r_lo), math.log(r_hi), 8 * 2**level, 8)
    r = np.exp(u)
    wr = wu * r**3  # dr = r du, times r^2

    ct, wt = np.polynomial.legendre.leggauss(16 * 2**level)
    st = np.sqrt(1.0 - ct * ct)
    if pair.axially_symmetric:
        phi = np.zeros(1)
        wp = np.full(1, 2.0 * math.pi)
    else:
        n_phi = 8 * 2**level
        phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
        wp = np.full(n_phi, 2.0 * math.pi / n_phi)

    dirs = np.stack([
        st[:, None] * np.cos(phi)[None, :],
        st[:, None] * np.sin(phi)[None, :],
        np.broadcast_to(ct[:, None], (ct.size, phi.size)),
    ], axis=-1)  # (theta, phi, 3)
    wang = wt[:, None] * wp[None, :]

    # fixed chunking keeps the summation order, hence the result, bit-stable
    chunk = max(1, 2**18 // wang.size)
    sum_f = sum_g = norm = 0.0
    for start in range(0, r.size, chunk):
        rr = r[start:start + chunk]
        pts = rr[:, None, None, None] * dirs[None]
        rho = rel.density(pts)
        f, g = component_on_grid(pts, q, near_field=near_field)
        w = wr[start:start + chunk, None, None] * wang[None] * rho
        sum_f += float(np.sum(w * f))
        sum_g += float(np.sum(w * g))
        norm += float(np.sum(w))
    return sum_f, sum_g, norm


def kappa_quadrature(pair: PacketPair, polarization_q: int = 0, *, near_field: bool = False,
                     rtol: float = 1e-4, atol: float = 1e-9, max_level: int = 6) -> FomResult:
    """kappa from direct 3-D quadrature of the kernel over the relative Gaussian.

    The node counts double at each level until <f> and <g> change by less than
    ``rtol`` relative (plus ``atol`` times the natural scale (k sigma)^-3 for
    <f>).  ``error_estimate`` is the last change in kappa.

    Raises
    ------
    ConvergenceError
        If ``max_level`` refinements are exhausted; carries the last two
        kappa estimates.
    """
    if polarization_q not in (-1, 0, 1):
        raise DomainError(f"polarization_q must be -1, 0 or +1, got {polarization_q}")
    rel = relative_gaussian(pair)
    f_scale = float(rel.widths.min()) ** -3

    prev = None
    history = []
    for level in range(max_level + 1):
        f, g, _ = _expectations(pair, polarization_q, near_field, level)
        result = FomResult.from_means(f, g, pair.eta_perp, QUADRATURE)
        history.append(result.kappa)
        if prev is not None:
            df = abs(f - prev[0])
            dg = abs(g - prev[1])
            if df <= rtol * abs(f) + atol * f_scale and dg <= rtol * abs(g) + atol:
                err = abs(history[-1] - history[-2])
                return FomResult.from_means(f, g, pair.eta_perp, QUADRATURE, err)
        prev = (f, g)
    raise ConvergenceError(f"quadrature did not converge in {max_level} refinements",
                           history[-2:])


# -- optimization -----------------------------------------------------------

def _maximize(objective, lo, hi, xatol, what):
    res = minimize_scalar(lambda x: -objective(x), bounds=(lo, hi), method="bounded",
                          options={"xatol": xatol, "maxiter": 500})
    if not res.success:
        raise ConvergenceError(f"{what}: {res.message}", [res.x])
    # bounded Brent stops about sqrt(eps)*|x| short of a bracket edge
    edge = 10 * xatol + 1e-6 * (hi - lo)
    if res.x - lo < edge or hi - res.x < edge:
        raise ConvergenceError(f"{what}: optimum at bracket edge ({res.x})", [res.x])
    return float(res.x)


def optimize_aspect_ratio(eta_perp: float, bounds=(1.01, 10.0), xatol: float = 1e-8):
    """Elongation eta_par/eta_perp maximizing |kappa| for a single ellipsoidal well."""
    if not eta_perp > 0:
        raise DomainError("eta_perp must be > 0")
    # kappa is eta_perp^-3 times a function of the ratio, so search at unit eta
    ratio = _maximize(lambda x: abs(kappa_ellipsoid(1.0, x).kappa), *bounds, xatol,
                      "aspect-ratio search")
    return ratio, kappa_ellipsoid(eta_perp, ratio * eta_perp)


def optimize_separation(eta: float, bounds=(1e-3, 20.0), xatol: float = 1e-10):
    """Well separation delta_z_bar maximizing |kappa| for two spherical wells."""
    if not eta > 0:
        raise DomainError("eta must be > 0")
    dz = _maximize(lambda d: abs(separated_wells_shape(d)), *bounds, xatol, "separation search")
    return dz, kappa_separated_wells(eta, dz)
