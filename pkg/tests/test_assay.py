import math

import numpy as np
import pytest

from latticeqc import assay as asy
from latticeqc.errors import DomainError


def test_expected_counts_reference():
    rec = asy.expected_counts(asy.AssayConfig(1000, 0.1, 0.5, n_cycles=3))
    assert rec.paired[0] == pytest.approx(900)
    assert rec.new_unpaired[0] == pytest.approx(50)
    assert rec.paired[1] == pytest.approx(810)
    assert rec.new_unpaired[1] == pytest.approx(45)
    np.testing.assert_allclose(rec.paired, 1000 * 0.9 ** np.arange(1, 4))


def test_zero_error_is_static():
    rec = asy.expected_counts(asy.AssayConfig(1000, 0.0, 0.5, n_cycles=5))
    np.testing.assert_array_equal(rec.target_total, 1000)
    assert asy.estimate_error(rec) == 0.0


@pytest.mark.parametrize("p", [0.0, 0.01, 0.05, 0.1, 0.3, 0.9])
@pytest.mark.parametrize("alpha", [0.0, 0.3, 1.0])
def test_deterministic_estimate_is_exact(p, alpha):
    rec = asy.expected_counts(asy.AssayConfig(10_000, p, alpha, n_cycles=4))
    for c in (1, 2, 3):
        assert asy.estimate_error(rec, c) == pytest.approx(p, abs=1e-14)


def test_flipped_unpaired_targets_bias_upward_then_fade():
    rec = asy.expected_counts(asy.AssayConfig(10_000, 0.1, 0.5, n_cycles=3, flip_probability=0.5))
    assert asy.estimate_error(rec) < 0.1


def test_failure_categories_sum():
    cfg = asy.AssayConfig(1000, 0.2, 0.25, failure_split=(2, 1, 1))
    probs = cfg.outcome_probabilities()
    assert probs.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(probs, [0.8, 0.05, 0.075, 0.0375, 0.0375])
    rec = asy.expected_counts(cfg)
    assert rec.failures[0].sum() == pytest.approx(200)


def test_simulation_is_reproducible():
    cfg = asy.AssayConfig(10_000, 0.1, 0.5, n_cycles=3, seed=42)
    a, b = asy.simulate(cfg), asy.simulate(cfg)
    for field in ("paired", "new_unpaired", "unpaired", "failures"):
        np.testing.assert_array_equal(getattr(a, field), getattr(b, field))


def test_simulated_paired_count():
    rec = asy.simulate(asy.AssayConfig(100_000, 0.1, 0.5, seed=0))
    assert abs(rec.paired[0] - 90_000) < 3 * math.sqrt(100_000 * 0.1 * 0.9)


def test_total_failure():
    rec = asy.simulate(asy.AssayConfig(500, 1.0, 0.5, seed=1))
    assert rec.paired[0] == 0


def test_counts_nonnegative_and_paired_nonincreasing():
    rec = asy.simulate(asy.AssayConfig(1000, 0.3, 0.4, n_cycles=6, seed=3, flip_probability=0.2, n_background=50))
    assert np.all(np.diff(rec.paired) <= 0)
    for arr in (rec.paired, rec.new_unpaired, rec.unpaired, rec.failures):
        assert np.all(arr >= 0)


def test_stochastic_means_match_expected():
    cfg = asy.AssayConfig(20_000, 0.1, 0.5, n_cycles=3)
    mean = np.mean([asy.simulate(asy.AssayConfig(**{**cfg.__dict__, "seed": s})).target_total
                    for s in range(100)], axis=0)
    exp = asy.expected_counts(cfg).target_total
    sd = np.sqrt(exp * 0.2)  # generous per-run spread
    assert np.all(np.abs(mean - exp) < 4 * sd / 10)


def test_stochastic_estimate_within_three_standard_errors():
    rec = asy.simulate(asy.AssayConfig(100_000, 0.1, 0.5, seed=0))
    p_hat = asy.estimate_error(rec)
    assert abs(p_hat - 0.1) < 3 * asy.binomial_standard_error(0.1, 100_000)


def test_estimate_errors():
    rec = asy.expected_counts(asy.AssayConfig(100, 0.1, 0.5, n_cycles=1))
    with pytest.raises(DomainError):
        asy.estimate_error(rec)
    empty = asy.simulate(asy.AssayConfig(10, 1.0, 0.0, n_cycles=2))
    with pytest.raises(DomainError):
        asy.estimate_error(empty)


@pytest.mark.parametrize("kw", [dict(n_pairs=0), dict(true_error=1.5), dict(alpha=-0.1), dict(n_cycles=0),
                                dict(flip_probability=2.0), dict(n_background=-1), dict(failure_split=(0, 0, 0))])
def test_config_validation(kw):
    base = dict(n_pairs=10, true_error=0.1, alpha=0.5)
    base.update(kw)
    with pytest.raises(DomainError):
        asy.AssayConfig(**base)


def test_rows():
    rows = list(asy.expected_counts(asy.AssayConfig(1000, 0.1, 0.5)).rows())
    assert [r["cycle"] for r in rows] == [1, 2]
    assert rows[0]["target_total"] == pytest.approx(950)
