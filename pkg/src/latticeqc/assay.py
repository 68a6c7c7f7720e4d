"""
Ensemble measurement of gate error in a sparse lattice by CNOT/flush cycles.

Each cycle applies a CNOT to every paired control/target, then flushes
failed and unpaired target-species atoms.  A gate failure either removes the
target (flushed or lost) or, with fraction ``alpha``, loses only the control
and leaves a surviving *unpaired* target.  Unpaired targets created in one
cycle are flushed in the next one unless the CNOT flips them, which happens
with ``flip_probability`` (default 0).

Counting target-species atoms after cycle k gives

    paired_k   = (1-P)^k N
    unpaired_k = alpha P (1-P)^(k-1) N          (flip_probability = 0)

so the total falls by exactly (1-P) per cycle and P can be read off from two
consecutive cycles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

CATEGORIES = ("control_lost", "target_lost", "both_lost", "wrong_state")


@dataclass(frozen=True)
class AssayConfig:
    n_pairs: int
    true_error: float
    alpha: float
    n_cycles: int = 2
    seed: int = 0
    flip_probability: float = 0.0
    n_background: int = 0
    # relative weights of target_lost / both_lost / wrong_state among non-alpha failures
    failure_split: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        if self.n_pairs < 1:
            raise DomainError("n_pairs must be >= 1")
        if not 0.0 <= self.true_error <= 1.0:
            raise DomainError("true_error must lie in [0, 1]")
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError("alpha must lie in [0, 1]")
        if self.n_cycles < 1:
            raise DomainError("n_cycles must be >= 1")
        if not 0.0 <= self.flip_probability <= 1.0:
            raise DomainError("flip_probability must lie in [0, 1]")
        if self.n_background < 0:
            raise DomainError("n_background must be >= 0")
        if any(w < 0 for w in self.failure_split) or sum(self.failure_split) <= 0:
            raise DomainError("failure_split weights must be non-negative and not all zero")

    def outcome_probabilities(self) -> np.ndarray:
        """Per-pair probabilities of (success, *CATEGORIES) in one cycle."""
        p, a = self.true_error, self.alpha
        split = np.asarray(self.failure_split, dtype=float)
        split = split / split.sum()
        return np.concatenate([[1.0 - p, a * p], (1.0 - a) * p * split])


@dataclass(frozen=True)
class AssayRecord:
    """Per-cycle counts; index 0 is cycle 1."""

    paired: np.ndarray
    new_unpaired: np.ndarray
    unpaired: np.ndarray       # surviving unpaired targets after the flush
    failures: np.ndarray       # (cycles, len(CATEGORIES))

    @property
    def n_cycles(self) -> int:
        return len(self.paired)

    @property
    def target_total(self) -> np.ndarray:
        return self.paired + self.unpaired

    def rows(self):
        for k in range(self.n_cycles):
            yield {
                "cycle": k + 1,
                "paired": self.paired[k],
                "new_unpaired": self.new_unpaired[k],
                "unpaired": self.unpaired[k],
                "target_total": self.target_total[k],
            }


def expected_counts(config: AssayConfig) -> AssayRecord:
    """Deterministic mean counts for every cycle."""
    probs = config.outcome_probabilities()
    n = config.n_cycles
    paired = np.empty(n)
    new = np.empty(n)
    pool = np.empty(n)
    failures = np.empty((n, len(CATEGORIES)))
    prev_paired = float(config.n_pairs)
    prev_pool = float(config.n_background)
    for k in range(n):
        failures[k] = prev_paired * probs[1:]
        paired[k] = prev_paired * probs[0]
        new[k] = failures[k, 0]
        pool[k] = new[k] + config.flip_probability * prev_pool
        prev_paired, prev_pool = paired[k], pool[k]
    return AssayRecord(paired, new, pool, failures)


def simulate(config: AssayConfig) -> AssayRecord:
    """One stochastic realisation; reproducible for a given seed."""
    rng = np.random.default_rng(config.seed)
    probs = config.outcome_probabilities()
    n = config.n_cycles
    paired = np.empty(n, dtype=np.int64)
    new = np.empty(n, dtype=np.int64)
    pool = np.empty(n, dtype=np.int64)
    failures = np.empty((n, len(CATEGORIES)), dtype=np.int64)
    prev_paired = config.n_pairs
    prev_pool = config.n_background
    for k in range(n):
        outcome = rng.multinomial(prev_paired, probs)
        paired[k] = outcome[0]
        failures[k] = outcome[1:]
        new[k] = outcome[1]
        pool[k] = new[k] + rng.binomial(prev_pool, config.flip_probability)
        prev_paired, prev_pool = paired[k], pool[k]
    return AssayRecord(paired, new, pool, failures)


def estimate_error(record: AssayRecord, cycle: int = 1) -> float:
    """P-hat = 1 - T_{c+1}/T_c from target-species totals of cycles c and c+1."""
    if record.n_cycles < cycle + 1:
        raise DomainError(f"need at least {cycle + 1} cycles, record has {record.n_cycles}")
    totals = record.target_total
    if totals[cycle - 1] == 0:
        raise DomainError(f"no target-species atoms left after cycle {cycle}; estimate undefined")
    return float(1.0 - totals[cycle] / totals[cycle - 1])


def binomial_standard_error(p: float, n: float) -> float:
    return float(np.sqrt(p * (1.0 - p) / n))
