"""
Two-qubit gates driven by the catalysed dipole-dipole interaction.

Logical basis ordering is |control target> = |00>, |01>, |10>, |11> with the
(+) species as control.  Interaction matrices are stored in units of hbar*chi
and evolved with exp(-i chi V t) (chi in units of Gamma, t in 1/Gamma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import DomainError
from .fom import FomResult
from .motional import OscillatorState, shell_states

SQRT2 = math.sqrt(2.0)
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / SQRT2
CPHASE = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


@dataclass(frozen=True, order=True)
class InternalState:
    f: float
    m_f: float

    def __post_init__(self):
        if abs(self.m_f) > self.f:
            raise DomainError(f"|m_f| must not exceed f, got f={self.f}, m_f={self.m_f}")


@dataclass(frozen=True, order=True)
class TwoAtomState:
    internal_a: InternalState
    internal_b: InternalState
    motion_a: OscillatorState
    motion_b: OscillatorState

    def swapped(self) -> "TwoAtomState":
        return TwoAtomState(self.internal_b, self.internal_a, self.motion_b, self.motion_a)

    def with_motion(self, a: OscillatorState, b: OscillatorState) -> "TwoAtomState":
        return TwoAtomState(self.internal_a, self.internal_b, a, b)

    @property
    def motional_quanta(self) -> int:
        return self.motion_a.quanta + self.motion_b.quanta

    def __str__(self):
        return f"{self.motion_a}x{self.motion_b}"


def _check_q(q):
    if q not in (-1, 0, 1):
        raise DomainError(f"photon projection must be -1, 0 or +1, got {q}")


def selection_allowed(initial: TwoAtomState, final: TwoAtomState, q: int, q_prime: int) -> bool:
    """Whether the interaction can connect two pair states.

    Requires unchanged hyperfine levels, total M_F shifted by q - q', total
    motional m shifted by -(q - q') or +(q - q'), and equal total vibrational
    energy.
    """
    _check_q(q)
    _check_q(q_prime)
    dq = q - q_prime
    if (final.internal_a.f, final.internal_b.f) != (initial.internal_a.f, initial.internal_b.f):
        return False
    m_int = final.internal_a.m_f + final.internal_b.m_f - initial.internal_a.m_f - initial.internal_b.m_f
    if m_int != dq:
        return False
    m_mot = final.motion_a.m + final.motion_b.m - initial.motion_a.m - initial.motion_b.m
    if m_mot not in (dq, -dq):
        return False
    return final.motional_quanta == initial.motional_quanta


def enumerate_leakage(state: TwoAtomState, q: int, q_prime: int) -> list[TwoAtomState]:
    """Every motional product state reachable from ``state`` (itself included).

    Internal states are held fixed, so nothing is reachable unless q == q'.
    """
    total = state.motional_quanta
    found = []
    for quanta_a in range(total + 1):
        for a, b in product(shell_states(quanta_a), shell_states(total - quanta_a)):
            candidate = state.with_motion(a, b)
            if selection_allowed(state, candidate, q, q_prime):
                found.append(candidate)
    return found


@dataclass(frozen=True)
class GateModel:
    """Interaction matrix in units of hbar*chi over an ordered pair-state basis.

    The first four states are the logical basis; the rest are leakage states.
    """

    basis: tuple[TwoAtomState, ...]
    v_matrix: np.ndarray
    chi: float
    gamma_tot: float = 0.0
    n_logical: int = 4
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        v = np.asarray(self.v_matrix)
        if v.shape != (len(self.basis), len(self.basis)):
            raise DomainError("v_matrix shape does not match the basis")
        if not np.allclose(v, v.conj().T, atol=1e-14, rtol=0):
            raise DomainError("v_matrix must be Hermitian")

    @property
    def hamiltonian(self) -> np.ndarray:
        return self.chi * np.asarray(self.v_matrix)

    def index(self, label: str) -> int:
        return self.labels.index(label)


# stretched-state encoding: |0> = |000>, |1> = |011>, both atoms in F_up
STATE_000 = OscillatorState(0, 0, 0)
STATE_011 = OscillatorState(0, 1, 1)
STATE_022 = OscillatorState(0, 2, 2)

SWAP_LABELS = ("00", "01", "10", "11", "022x000", "000x022")


def _swap_basis(f_up: float) -> tuple[TwoAtomState, ...]:
    plus = InternalState(f_up, 1)
    minus = InternalState(f_up, -1)
    motion = {"0": STATE_000, "1": STATE_011}
    logical = [TwoAtomState(plus, minus, motion[a], motion[b]) for a, b in ("00", "01", "10", "11")]
    leak = [TwoAtomState(plus, minus, STATE_022, STATE_000),
            TwoAtomState(plus, minus, STATE_000, STATE_022)]
    return tuple(logical + leak)


def build_swap_model(chi: float, f_up: float = 4, gamma_tot: float = 0.0) -> GateModel:
    """sqrt(SWAP) interaction on the stretched-state basis plus its two-quanta leakage states."""
    if not chi > 0:
        raise DomainError(f"chi must be > 0, got {chi}")
    v = np.zeros((6, 6))
    v[1:3, 1:3] = 1.75 * np.array([[1.0, -1.0], [-1.0, 1.0]])
    v[3, 3] = 1.0
    v[3, 4] = v[4, 3] = v[3, 5] = v[5, 3] = -1.0 / SQRT2
    v[4, 4] = v[5, 5] = 2.25
    v[4, 5] = v[5, 4] = -1.25
    return GateModel(_swap_basis(f_up), v, chi, gamma_tot, 4, SWAP_LABELS)


def evolve(model: GateModel, t: float) -> np.ndarray:
    """exp(-i H t) by eigendecomposition of the Hermitian generator."""
    if t < 0:
        raise DomainError("evolution time must be >= 0")
    vals, vecs = np.linalg.eigh(model.hamiltonian)
    return (vecs * np.exp(-1j * vals * t)) @ vecs.conj().T


def leakage(unitary: np.ndarray, n_logical: int = 4) -> np.ndarray:
    """Population leaving the logical subspace, per logical input state."""
    block = unitary[:n_logical, :n_logical]
    return 1.0 - np.sum(np.abs(block) ** 2, axis=0)


@dataclass(frozen=True)
class SwapGateResult:
    tau: float
    unitary: np.ndarray   # full evolution including leakage states
    logical: np.ndarray   # 4x4 logical block
    leakage: np.ndarray   # per logical input

    @property
    def middle_block(self) -> np.ndarray:
        return self.logical[1:3, 1:3]

    @property
    def phase_11(self) -> complex:
        return complex(self.logical[3, 3])


def sqrt_swap_gate(chi: float, f_up: float = 4) -> SwapGateResult:
    """Evolve the stretched-state model for the recurrence time tau = pi/chi."""
    model = build_swap_model(chi, f_up)
    tau = math.pi / chi
    u = evolve(model, tau)
    return SwapGateResult(tau, u, u[:4, :4].copy(), leakage(u))


@dataclass(frozen=True)
class CphaseResult:
    tau: float                 # gate time in 1/Gamma
    phases: np.ndarray         # diagonal of the logical unitary
    success_probability: float
    gamma_tot: float           # cooperative decay rate in Gamma

    @property
    def unitary(self) -> np.ndarray:
        return np.diag(self.phases)

    @property
    def error_probability(self) -> float:
        return 1.0 - self.success_probability


def cphase_gate(kappa: FomResult | float, chi: float) -> CphaseResult:
    """Diagonal CPHASE from a cooperative shift of |11> only.

    ``chi`` is |<V_dd>|/hbar in units of Gamma.  The gate time is pi/chi and the
    decay rate follows from the figure of merit, Gamma_tot = chi/|kappa|, so the
    no-scatter probability is exp(-pi/|kappa|) whatever chi is.
    """
    k = kappa.kappa if isinstance(kappa, FomResult) else float(kappa)
    if k == 0 or not math.isfinite(k):
        raise DomainError("kappa = 0 gives no interaction: gate time is infinite")
    if not chi > 0:
        raise DomainError(f"chi must be > 0, got {chi}")
    tau = math.pi / chi
    # <V_dd> carries the sign of kappa; only |11> is shifted
    shift = np.array([0.0, 0.0, 0.0, math.copysign(chi, k)])
    phases = np.exp(-1j * shift * tau)
    return CphaseResult(tau, phases, math.exp(-math.pi / abs(k)), chi / abs(k))


def compose_cnot(cphase: np.ndarray, rotation: np.ndarray = HADAMARD) -> np.ndarray:
    """Conjugate a controlled-phase by a target-qubit rotation: (1 x R) C (1 x R)^dagger."""
    c = np.asarray(cphase, dtype=complex)
    if c.shape != (4, 4):
        raise DomainError("cphase must be 4x4")
    r = np.kron(np.eye(2), np.asarray(rotation, dtype=complex))
    return r @ c @ r.conj().T


def process_fidelity(target: np.ndarray, actual: np.ndarray) -> float:
    """|Tr(U_target^dagger U)|^2 / d^2."""
    d = target.shape[0]
    return float(abs(np.trace(target.conj().T @ actual)) ** 2 / d**2)
