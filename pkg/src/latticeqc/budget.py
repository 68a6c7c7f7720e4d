"""
Spontaneous-scattering error budget for one gate.

Two independent channels: scattering a catalysis photon during the
interaction (rate ~ pi/|kappa|, grows with lattice detuning because the wells
get shallower) and scattering a lattice photon while the atoms are moved
(falls with detuning).  In the small-error regime

    P_c = A * Delta^(3/4),    P_L = B * Delta^(-3/2)

with Delta = Delta_L/Gamma, so the sum has a single minimum where
P_c = 2 P_L.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConvergenceError, DomainError
from .species import AtomSpecies

log = logging.getLogger(__name__)

DETUNING_BOUNDS = (10.0, 1e8)


@dataclass(frozen=True)
class BudgetInput:
    c_kappa: float          # |kappa| * eta^3 of the gate protocol
    n_cycles: float         # gate duration in trap periods
    species: AtomSpecies
    intensity_ratio: float  # I_1 / I_0

    def __post_init__(self):
        if not self.c_kappa > 0:
            raise DomainError(f"c_kappa must be > 0, got {self.c_kappa}")
        if not self.n_cycles >= 1:
            raise DomainError(f"n_cycles must be >= 1, got {self.n_cycles}")
        if not self.intensity_ratio > 0:
            raise DomainError(f"intensity_ratio must be > 0, got {self.intensity_ratio}")

    def catalysis_coefficient(self) -> float:
        """A in P_c = A * Delta^(3/4)."""
        g = self.species.gamma_over_recoil
        return (math.pi / (8.0 * self.c_kappa)) * (12.0 / g) ** 0.75 * self.intensity_ratio ** -0.75

    def lattice_coefficient(self) -> float:
        """B in P_L = B * Delta^(-3/2)."""
        g = self.species.gamma_over_recoil
        return (math.sqrt(3.0) * math.pi / 8.0 * self.species.hyperfine_factor()
                * math.sqrt(g) * self.n_cycles * math.sqrt(self.intensity_ratio))


@dataclass(frozen=True)
class BudgetResult:
    p_catalysis: float
    p_lattice: float
    p_total: float
    optimal_detuning: float
    gamma_lattice: float       # Gamma_L / Gamma at the optimum
    closed_form_p: float       # printed-approximation minimum
    closed_form_detuning: float
    stationary_p: float        # exact minimum of the first-order sum
    at_bracket_edge: bool = False


def _check_detuning(detuning):
    if not detuning > 0:
        raise DomainError(f"detuning must be > 0, got {detuning}")


def catalysis_rate(inp: BudgetInput, detuning: float) -> float:
    """pi/|kappa| at lattice detuning Delta_L/Gamma (unclamped)."""
    _check_detuning(detuning)
    return inp.catalysis_coefficient() * detuning**0.75


def lattice_rate(inp: BudgetInput, detuning: float) -> float:
    """Gamma_L * T at lattice detuning Delta_L/Gamma (unclamped)."""
    _check_detuning(detuning)
    return inp.lattice_coefficient() * detuning**-1.5


def p_catalysis(inp: BudgetInput, detuning: float) -> float:
    return min(1.0, catalysis_rate(inp, detuning))


def p_lattice(inp: BudgetInput, detuning: float) -> float:
    return min(1.0, lattice_rate(inp, detuning))


def channel_probabilities(inp: BudgetInput, detuning: float) -> tuple[float, float]:
    """Per-channel probabilities 1 - exp(-x) entering the exponential composition."""
    return (-math.expm1(-catalysis_rate(inp, detuning)),
            -math.expm1(-lattice_rate(inp, detuning)))


def p_total(inp: BudgetInput, detuning: float, form: str = "exponential") -> float:
    """Combined error probability.

    ``form="exponential"`` gives 1 - exp(-x_c) exp(-x_L); ``form="sum"`` the
    first-order x_c + x_L (clamped to 1).
    """
    xc = catalysis_rate(inp, detuning)
    xl = lattice_rate(inp, detuning)
    if form == "exponential":
        return -math.expm1(-(xc + xl))
    if form == "sum":
        return min(1.0, xc + xl)
    raise ValueError(f"unknown form {form!r}")


def gate_duration(inp: BudgetInput, detuning: float) -> float:
    """T = n 2pi/omega_osc in units of 1/Gamma.

    The well depth follows from U_0/(hbar Gamma) = (I_1/I_0)/(3 Delta), as in
    :func:`latticeqc.species.well_depth_from_intensity`.
    """
    g = inp.species.gamma_over_recoil
    depth = g * inp.intensity_ratio / (3.0 * detuning)   # U_0 / E_R
    omega = 2.0 * math.sqrt(depth) / g                    # omega_osc / Gamma
    return inp.n_cycles * 2.0 * math.pi / omega


def closed_form_optimum(inp: BudgetInput) -> tuple[float, float]:
    """Rounded closed-form (P*, Delta*/Gamma) as usually quoted.

    The detuning is exact for the first-order sum.  The probability drops a
    numerical factor (3/2)(12)^(1/2)(sqrt(3)/4)^(1/3)/4 = 0.9827 from the exact
    stationary value, so it overestimates by about 1.8 %.
    """
    h = inp.species.hyperfine_factor()
    g = inp.species.gamma_over_recoil
    s = inp.intensity_ratio
    n = inp.n_cycles
    c = inp.c_kappa
    p = math.pi * (n / c**2 * h / (g * s)) ** (1.0 / 3.0)
    d = c ** (4.0 / 9.0) / 12.0 ** (1.0 / 9.0) * h ** (4.0 / 9.0) * g ** (5.0 / 9.0) * n ** (4.0 / 9.0) * s ** (5.0 / 9.0)
    return p, d


def stationary_optimum(inp: BudgetInput) -> tuple[float, float]:
    """Exact minimum of A Delta^(3/4) + B Delta^(-3/2): Delta* = (2B/A)^(4/9), P* = 3/2 A Delta*^(3/4)."""
    a = inp.catalysis_coefficient()
    b = inp.lattice_coefficient()
    d = (2.0 * b / a) ** (4.0 / 9.0)
    return 1.5 * a * d**0.75, d


def minimize_detuning(inp: BudgetInput, form: str = "exponential", bounds=DETUNING_BOUNDS,
                      xatol: float = 1e-10) -> tuple[float, float, bool]:
    """Numerically minimize p_total over log(Delta); returns (Delta*, P*, at_edge)."""
    lo, hi = math.log(bounds[0]), math.log(bounds[1])
    res = minimize_scalar(lambda u: p_total(inp, math.exp(u), form), bounds=(lo, hi),
                          method="bounded", options={"xatol": xatol, "maxiter": 500})
    if not res.success:
        raise ConvergenceError(f"detuning search failed: {res.message}", [math.exp(res.x)])
    at_edge = bool(res.x - lo < 1e-6 or hi - res.x < 1e-6)
    if at_edge:
        log.warning("optimal detuning %.6g at search bound; inputs outside validity window",
                    math.exp(res.x))
    return math.exp(res.x), float(res.fun), at_edge


def optimize_detuning(inp: BudgetInput, form: str = "exponential") -> BudgetResult:
    d, p, at_edge = minimize_detuning(inp, form)
    cf_p, cf_d = closed_form_optimum(inp)
    st_p, _ = stationary_optimum(inp)
    gamma_l = lattice_rate(inp, d) / gate_duration(inp, d)
    return BudgetResult(
        p_catalysis=p_catalysis(inp, d),
        p_lattice=p_lattice(inp, d),
        p_total=p,
        optimal_detuning=d,
        gamma_lattice=gamma_l,
        closed_form_p=cf_p,
        closed_form_detuning=cf_d,
        stationary_p=st_p,
        at_bracket_edge=at_edge,
    )


def sweep(inp: BudgetInput, field: str, values) -> list[BudgetResult]:
    """optimize_detuning over a grid of one BudgetInput field (or ``gamma_over_recoil``)."""
    out = []
    for v in np.asarray(values, dtype=float):
        if field == "gamma_over_recoil":
            point = replace(inp, species=inp.species.with_overrides(gamma_over_recoil=float(v)))
        else:
            point = replace(inp, **{field: float(v)})
        out.append(optimize_detuning(point))
    return out
