#!/usr/bin/env python3
"""
Tests for water-filling power allocation
"""

import os
import sys

import numpy as np
from scipy.optimize import brentq

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from risofdm.allocation import water_fill, water_fill_batch
from test_support import run_tests


def _rate(gains, powers, noise):
    return np.sum(np.log2(1.0 + gains * powers / noise))


def _oracle_powers(gains, noise, total):
    """Water level from a bracketed root find on sum(max(c - t, 0)) = P."""
    thresholds = noise / gains
    level = brentq(lambda c: np.maximum(c - thresholds, 0.0).sum() - total,
                   thresholds.min(), thresholds.max() + total, xtol=1e-15, rtol=1e-15, maxiter=500)
    return np.maximum(level - thresholds, 0.0)


def test_flat_gains_split_evenly():
    allocation = water_fill(np.full(64, 0.3), 1e-3, 2.0)
    np.testing.assert_allclose(allocation.powers, 2.0 / 64, rtol=1e-12)
    assert allocation.num_active == 64
    assert allocation.feasible


def test_two_carriers_both_active():
    allocation = water_fill(np.array([1.0, 1.0 / 3.0]), 1.0, 4.0)
    np.testing.assert_allclose(allocation.cutoff, 4.0, rtol=1e-12)
    np.testing.assert_allclose(allocation.powers, [3.0, 1.0], rtol=1e-12)


def test_weak_carrier_left_dry():
    allocation = water_fill(np.array([1.0, 0.1]), 1.0, 1.0)
    np.testing.assert_allclose(allocation.cutoff, 2.0, rtol=1e-12)
    np.testing.assert_allclose(allocation.powers, [1.0, 0.0], atol=1e-15)
    assert allocation.num_active == 1


def test_kkt_conditions_on_random_instances():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        gains = rng.exponential(size=128) * 10.0 ** rng.uniform(-3, 1)
        noise = 10.0 ** rng.uniform(-2, 0)
        total = 10.0 ** rng.uniform(-1, 2)
        allocation = water_fill(gains, noise, total)
        powers, cutoff = allocation.powers, allocation.cutoff
        thresholds = noise / gains

        assert abs(powers.sum() - total) <= 1e-9 * total
        assert np.all(powers >= 0)
        active = powers > 0
        # active carriers sit on the water level, inactive ones above it
        np.testing.assert_allclose(powers[active] + thresholds[active], cutoff, rtol=1e-8)
        assert np.all(thresholds[~active] >= cutoff * (1 - 1e-8))


def test_rate_matches_root_finding_oracle():
    rng = np.random.default_rng(1)
    for _ in range(200):
        gains = rng.exponential(size=128)
        noise, total = 0.05, 10.0 ** rng.uniform(-1, 1)
        ours = _rate(gains, water_fill(gains, noise, total).powers, noise)
        oracle = _rate(gains, _oracle_powers(gains, noise, total), noise)
        np.testing.assert_allclose(ours, oracle, rtol=1e-6)


def test_beats_equal_power():
    rng = np.random.default_rng(2)
    gains = rng.exponential(size=32)
    optimal = _rate(gains, water_fill(gains, 0.1, 1.0).powers, 0.1)
    assert optimal >= _rate(gains, np.full(32, 1.0 / 32), 0.1)


def test_all_zero_gains_are_infeasible():
    allocation = water_fill(np.zeros(8), 1.0, 1.0)
    assert not allocation.feasible
    np.testing.assert_array_equal(allocation.powers, 0.0)
    assert allocation.total_used == 0.0


def test_zero_gain_carrier_gets_no_power():
    allocation = water_fill(np.array([0.0, 1.0, 2.0]), 0.1, 1.0)
    assert allocation.powers[0] == 0.0
    np.testing.assert_allclose(allocation.powers.sum(), 1.0)


def test_invalid_inputs_rejected():
    cases = (
        (np.array([1.0, -1.0]), 1.0, 1.0),
        (np.array([1.0, np.inf]), 1.0, 1.0),
        (np.ones((2, 2)), 1.0, 1.0),
        (np.ones(2), 0.0, 1.0),
        (np.ones(2), 1.0, 0.0),
    )
    for gains, noise, total in cases:
        try:
            water_fill(gains, noise, total)
        except ValueError:
            continue
        raise AssertionError(f"water_fill accepted gains={gains}, noise={noise}, total={total}")


def test_batch_matches_single_instances():
    rng = np.random.default_rng(3)
    gains = rng.exponential(size=(50, 16))
    gains[0] = 0.0
    gains[1, :8] = 0.0
    batch = water_fill_batch(gains, 0.2, 3.0)
    for row, powers in zip(gains, batch):
        np.testing.assert_allclose(powers, water_fill(row, 0.2, 3.0).powers, rtol=1e-9, atol=1e-12)


def main():
    """Run all tests."""
    return run_tests(globals(), "water-filling tests")


if __name__ == '__main__':
    sys.exit(main())
