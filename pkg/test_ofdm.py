#!/usr/bin/env python3
"""
Tests for OFDM frequency responses, achievable rates and effective rates
"""

import math
import os
import sys

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from risofdm.allocation import water_fill
from risofdm.ofdm import achievable_rate, effective_rate, frequency_response, time_response
from test_support import run_tests


def test_impulse_is_flat():
    h = np.zeros(16, dtype=complex)
    h[0] = 1.0
    np.testing.assert_allclose(frequency_response(h).gains, np.ones(16))


def test_delay_is_linear_phase():
    n = 16
    h = np.zeros(n, dtype=complex)
    h[1] = 1.0
    expected = np.exp(-2j * np.pi * np.arange(n) / n)
    np.testing.assert_allclose(frequency_response(h).gains, expected, atol=1e-12)


def test_matches_direct_dft():
    rng = np.random.default_rng(0)
    n = 32
    h = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    index = np.arange(n)
    dft = np.exp(-2j * np.pi * np.outer(index, index) / n)
    np.testing.assert_allclose(frequency_response(h).gains, dft @ h, rtol=1e-10, atol=1e-10)
    np.testing.assert_allclose(time_response(frequency_response(h).gains), h, atol=1e-12)


def test_single_carrier_unit_snr_gives_one_bit():
    freq = frequency_response(np.array([1.0 + 0j]))
    report = achievable_rate(freq, np.array([2.0]), 2.0, 1, 0)
    assert math.isclose(report.rate, 1.0)
    assert report.cp_penalty == 1.0


def test_zero_power_gives_zero_rate():
    freq = frequency_response(np.ones(8, dtype=complex))
    assert achievable_rate(freq, np.zeros(8), 1e-3, 8, 2).rate == 0.0


def test_flat_channel_closed_form():
    n, n_cp, g, total, noise = 64, 4, 0.7, 2.0, 0.1
    gains = np.full(n, np.sqrt(g), dtype=complex)
    freq = frequency_response(np.fft.ifft(gains))
    report = achievable_rate(freq, np.full(n, total / n), noise, n, n_cp)
    expected = n / (n + n_cp) * math.log2(1.0 + g * total / (n * noise))
    assert math.isclose(report.rate, expected, rel_tol=1e-12)


def test_accepts_power_allocation():
    rng = np.random.default_rng(1)
    freq = frequency_response(rng.standard_normal(16) + 1j * rng.standard_normal(16))
    allocation = water_fill(freq.power, 0.5, 4.0)
    assert achievable_rate(freq, allocation, 0.5, 16, 2).rate == \
        achievable_rate(freq, allocation.powers, 0.5, 16, 2).rate


def test_rate_monotone_in_power_and_gain():
    rng = np.random.default_rng(2)
    h = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    p = rng.uniform(0, 1, 16)
    base = achievable_rate(frequency_response(h), p, 0.3, 16, 2).rate
    more_power = p.copy()
    more_power[5] += 0.5
    assert achievable_rate(frequency_response(h), more_power, 0.3, 16, 2).rate > base
    assert achievable_rate(frequency_response(2 * h), p, 0.3, 16, 2).rate > base


def test_rejects_bad_powers():
    freq = frequency_response(np.ones(4, dtype=complex))
    for powers in (np.array([1.0, -1.0, 0.0, 0.0]), np.ones(3)):
        try:
            achievable_rate(freq, powers, 1.0, 4, 0)
        except ValueError:
            continue
        raise AssertionError(f"powers {powers} accepted")


def test_effective_rate():
    assert effective_rate(4.0, 0, 100) == 4.0
    assert effective_rate(4.0, 100, 100) == 0.0
    assert math.isclose(effective_rate(4.0, 10, 100), 3.6)
    assert effective_rate(4.0, 101, 100) == 0.0
    for tau, t in ((1, 0), (-1, 10)):
        try:
            effective_rate(1.0, tau, t)
        except ValueError:
            continue
        raise AssertionError(f"tau={tau}, T={t} accepted")


def main():
    """Run all tests."""
    return run_tests(globals(), "OFDM tests")


if __name__ == '__main__':
    sys.exit(main())
