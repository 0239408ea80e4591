#!/usr/bin/env python3
"""
Tests for scenarios, Monte Carlo runs, recommendations and result files
"""

import filecmp
import os
import sys
import tempfile

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from risofdm.analysis import Prop1Inputs, harmonic_number, prop1_gain_bound, prop1_rate_bound
from risofdm.channel import sample_channel_realization
from risofdm.config import (BOUND_HEADER, BOUND_Q_VALUES, COMPLEXITY_HEADER, DEFAULT_CONFIG,
                            RECOMMEND_Q_CANDIDATES, RESULT_HEADER)
from risofdm.config_loader import override_config, system_config_from_dict
from risofdm.harness import (ResultRow, Scenario, ScenarioError, best_q_for_coherence, bound_table,
                             complexity_table, emit_results, max_gain_monte_carlo, preset_scenarios,
                             read_results, run_monte_carlo, write_plot_script, write_table)
from risofdm.schemes.proposed import generate_training_set
from risofdm.system import SystemConfig, derive_link_statistics
from risofdm.utils import SeedPolicy, dbm_to_watts
from test_support import require_slow, run_tests

SMALL = SystemConfig(num_elements=8)


def _validation_config(**overrides) -> SystemConfig:
    entries = {'channel.rician_ap_ris_db': 30.0, 'channel.rician_ris_ue_db': 30.0}
    entries.update(overrides)
    return system_config_from_dict(override_config(DEFAULT_CONFIG, entries))


def _expect_scenario_error(**fields):
    values = dict(name='bad', scheme='proposed', axis='Q', values=(1, 2), trials=2)
    values.update(fields)
    try:
        Scenario(**values)
    except ScenarioError as e:
        return str(e)
    raise AssertionError(f"scenario {values} accepted")


def test_scenario_validation():
    assert 'cannot be swept' in _expect_scenario_error(scheme='ao-perfect-csi')
    assert 'strictly increasing' in _expect_scenario_error(values=(2, 2))
    _expect_scenario_error(values=())
    _expect_scenario_error(trials=0)
    _expect_scenario_error(values=(0.5, 2))
    _expect_scenario_error(scheme='sca')
    _expect_scenario_error(axis='T', values=(0, 10))
    scenario = Scenario(name='ok', scheme='proposed', axis='Q', values=[1, 4, 8], trials=1)
    assert scenario.values == (1, 4, 8)
    assert scenario.num_slots == 8


def test_single_slot_scenario_equals_random_phase():
    proposed = run_monte_carlo(Scenario('p', 'proposed', 'Q', (1,), trials=25, seed=3), SMALL)[0]
    baseline = run_monte_carlo(Scenario('r', 'random-phase', 'M', (8,), trials=25, seed=3), SMALL)[0]
    assert proposed.mean_rate == baseline.mean_rate
    assert proposed.stderr == baseline.stderr


def test_noiseless_rate_grows_with_training_set():
    qs = (1, 2, 4, 8, 16, 32, 64, 128)
    rows = run_monte_carlo(Scenario('q', 'proposed', 'Q', qs, trials=40, seed=5, noise_enabled=False), SMALL)
    means = [row.mean_rate for row in rows]
    assert all(later >= earlier for earlier, later in zip(means, means[1:])), means
    assert means[-1] > means[0]
    for row in rows:
        assert row.mean_rate >= 0 and row.stderr >= 0
        assert row.bound is not None and row.complexity > 0
        assert row.effective_rate is None


def test_output_independent_of_worker_count():
    scenario = Scenario('det', 'proposed', 'Q', (1, 2, 4), trials=6, seed=11)
    with tempfile.TemporaryDirectory() as tmp:
        serial, parallel, again = (os.path.join(tmp, name) for name in ('a.csv', 'b.csv', 'c.csv'))
        emit_results(run_monte_carlo(scenario, SMALL, workers=1), serial)
        emit_results(run_monte_carlo(scenario, SMALL, workers=2), parallel)
        emit_results(run_monte_carlo(scenario, SMALL, workers=1), again)
        assert filecmp.cmp(serial, parallel, shallow=False)
        assert filecmp.cmp(serial, again, shallow=False)


def test_axis_sweeps():
    rows = run_monte_carlo(Scenario('m', 'ao-perfect-csi', 'M', (2, 4), trials=3, seed=1), SMALL)
    assert [row.axis_value for row in rows] == [2, 4]
    assert rows[0].bound is None
    assert rows[0].complexity < rows[1].complexity

    rows = run_monte_carlo(Scenario('p', 'random-phase', 'P_UL', (-10.0, 0.0), trials=3, seed=1), SMALL)
    assert [row.axis_value for row in rows] == [-10.0, 0.0]

    rows = run_monte_carlo(Scenario('t', 'ao-estimated-csi', 'T', (5.0, 9.0, 90.0), trials=3, seed=1), SMALL)
    assert rows[0].effective_rate == 0.0 and rows[1].effective_rate == 0.0
    assert np.isclose(rows[2].effective_rate, 0.9 * rows[2].mean_rate)
    assert len({row.mean_rate for row in rows}) == 1


def test_standard_error_shrinks_with_trials():
    few = run_monte_carlo(Scenario('s', 'random-phase', 'M', (8,), trials=200, seed=2), SMALL)[0]
    many = run_monte_carlo(Scenario('s', 'random-phase', 'M', (8,), trials=800, seed=2), SMALL)[0]
    assert abs(many.stderr / few.stderr - 0.5) < 0.1


def test_dump_channels():
    with tempfile.TemporaryDirectory() as tmp:
        run_monte_carlo(Scenario('dump', 'proposed', 'Q', (1, 2), trials=2, seed=1), SMALL, dump_dir=tmp)
        assert sorted(os.listdir(tmp)) == ['dump-Q1.npz', 'dump-Q2.npz']


def test_recommendation_for_short_coherence():
    recommendation = best_q_for_coherence(SMALL, 9.0, [1, 2, 4], trials=5, seed=2)
    ao = next(e for e in recommendation.entries if e.scheme == 'ao-estimated-csi')
    assert ao.training_overhead == 9 and ao.effective_rate == 0.0
    assert recommendation.best_entry().effective_rate > 0.0
    assert recommendation.recommended_q in (1, 2, 4)
    try:
        best_q_for_coherence(SMALL, 0.0, [1], trials=1)
    except ValueError:
        pass
    else:
        raise AssertionError("zero coherence time accepted")


def test_recommendation_for_long_coherence():
    recommendation = best_q_for_coherence(SMALL, 1e9, [1, 2, 4, 8], trials=40, seed=3, noise_enabled=False)
    assert recommendation.recommended_q == 8


def test_results_file_round_trip():
    row = ResultRow(scenario='x', axis='Q', axis_value=10, mean_rate=1.0 / 3.0, stderr=0.1 + 0.2,
                    effective_rate=None, bound=2.718281828459045, complexity=435200, trials=5, seed=7)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, 'rows.csv')
        emit_results([], path)
        with open(path, encoding='utf-8') as f:
            assert f.read() == ','.join(RESULT_HEADER) + '\n'

        emit_results([row], path)
        with open(path, encoding='utf-8') as f:
            assert len(f.read().splitlines()) == 2
        assert read_results(path) == [row]


def test_presets():
    scenarios = preset_scenarios('pilot-power', DEFAULT_CONFIG, trials=3)
    assert len(scenarios) == 8
    uplink = {scenario.name: config.uplink_power for scenario, config in scenarios}
    assert np.isclose(uplink['pilot-power-proposed--10dbm'], 1e-4)
    assert all(scenario.trials == 3 for scenario, _ in scenarios)
    bound_check = preset_scenarios('bound-check', DEFAULT_CONFIG)
    assert bound_check[0][0].trials == 10000 and not bound_check[0][0].noise_enabled
    try:
        preset_scenarios('no-such-preset', DEFAULT_CONFIG)
    except ScenarioError:
        pass
    else:
        raise AssertionError("unknown preset accepted")


def test_tables_and_plot_script():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, 'bounds.csv')
        write_table(BOUND_HEADER, bound_table(SystemConfig(), [1, 10]), path)
        with open(path, encoding='utf-8') as f:
            lines = f.read().splitlines()
        assert lines[0] == ','.join(BOUND_HEADER) and len(lines) == 3
        assert lines[1].startswith('1,1.0,')
        assert len(complexity_table(SystemConfig(), [50, 100], [10, 50, 100])) == 6
        assert len(COMPLEXITY_HEADER) == 6

        rows = run_monte_carlo(Scenario('plot-me', 'proposed', 'Q', (1, 2), trials=2, seed=1), SMALL)
        script = os.path.join(tmp, 'plot.gp')
        write_plot_script(rows, os.path.join(tmp, 'rows.csv'), script)
        with open(script, encoding='utf-8') as f:
            text = f.read()
        assert "plot 'rows.csv'" in text and 'plot-me' in text


def test_single_slot_gain_matches_average_power():
    config = SystemConfig(num_elements=50)
    empirical = max_gain_monte_carlo(config, [1], 2000, seed=4)[0]
    expected = prop1_gain_bound(Prop1Inputs.from_config(config, 1))
    assert abs(empirical / expected - 1.0) < 0.05


def test_bound_dominates_expected_best_gain():
    require_slow()
    config = _validation_config()
    empirical = max_gain_monte_carlo(config, BOUND_Q_VALUES, 10_000, seed=1)
    for q, value in zip(BOUND_Q_VALUES, empirical):
        assert value <= prop1_gain_bound(Prop1Inputs.from_config(config, q)), q


def _equal_power_rate_of_best(config: SystemConfig, num_slots: int, trials: int, seed: int) -> float:
    """Mean rate of the largest-gain vector with power split evenly over subcarriers."""
    policy = SeedPolicy(seed)
    stats = derive_link_statistics(config)
    snr_scale = config.downlink_power / (config.num_subcarriers * config.noise_ue)
    total = 0.0
    for trial in range(trials):
        realization = sample_channel_realization(stats, config, policy.generator(trial, 'channel'))
        training_set = generate_training_set(num_slots, config.num_elements,
                                             policy.generator(trial, 'training_set'))
        channels = realization.composite_many(training_set.vectors)
        best = channels[np.argmax(np.sum(np.abs(channels) ** 2, axis=1))]
        spectrum = np.abs(np.fft.fft(best)) ** 2
        total += config.cp_penalty * float(np.mean(np.log2(1.0 + snr_scale * spectrum)))
    return total / trials


def test_rate_bound_gap_in_validation_scenario():
    require_slow()
    for scenario, config in preset_scenarios('bound-check', DEFAULT_CONFIG):
        for row in run_monte_carlo(scenario, config, workers=os.cpu_count() or 1):
            if row.axis_value >= 20:
                assert abs(row.bound - row.mean_rate) <= 0.3, (scenario.name, row.axis_value)


def test_rate_bound_dominates_equal_power_rate():
    require_slow()
    for m in (100, 500):
        config = _validation_config(**{'system.num_elements': m})
        for q in (10, 20):
            bound = prop1_rate_bound(Prop1Inputs.from_config(config, q))
            assert _equal_power_rate_of_best(config, q, 1000, seed=1) <= bound, (m, q)


def test_best_gain_grows_with_harmonic_number():
    require_slow()
    # attenuated direct link so the reflected tap dominates
    config = _validation_config(**{'system.num_elements': 500, 'channel.pathloss_direct': 5.0})
    qs = [1, 2, 4, 8, 16, 32, 64, 128, 256]
    empirical = max_gain_monte_carlo(config, qs, 4000, seed=2)
    slope = np.polyfit([harmonic_number(q) for q in qs], empirical, 1)[0]
    stats = derive_link_statistics(config)
    expected = (stats.direct.los_fraction * stats.direct.avg_power
                + config.num_elements * stats.reflected.los_fraction * stats.reflected.avg_power)
    assert abs(slope / expected - 1.0) < 0.05


def _mean_rate(scheme: str, config: SystemConfig, trials: int, seed: int) -> float:
    scenario = Scenario(scheme, scheme, 'M', (config.num_elements,), trials=trials, seed=seed)
    return run_monte_carlo(scenario, config, workers=os.cpu_count() or 1)[0].mean_rate


def test_alternating_optimization_under_pilot_noise():
    require_slow()
    strong_pilot = SystemConfig()
    weak_pilot = SystemConfig(uplink_power=dbm_to_watts(-10.0))
    perfect = _mean_rate('ao-perfect-csi', strong_pilot, 200, seed=5)
    proposed = run_monte_carlo(Scenario('proposed', 'proposed', 'Q', (100,), trials=200, seed=5),
                               strong_pilot, workers=os.cpu_count() or 1)
    assert perfect > proposed[0].mean_rate
    assert perfect > _mean_rate('ao-estimated-csi', weak_pilot, 200, seed=5)
    assert perfect > _mean_rate('random-phase', strong_pilot, 200, seed=5)


def test_training_pays_off_within_short_coherence():
    require_slow()
    config = SystemConfig(uplink_power=dbm_to_watts(-5.0))
    recommendation = best_q_for_coherence(config, 100.0, RECOMMEND_Q_CANDIDATES, trials=300, seed=1,
                                          workers=os.cpu_count() or 1)
    by_scheme = {e.scheme: e for e in recommendation.entries if e.scheme != 'proposed'}
    best = recommendation.best_entry()
    assert by_scheme['ao-estimated-csi'].effective_rate == 0.0
    assert best.effective_rate > by_scheme['ao-estimated-csi'].effective_rate
    assert best.effective_rate > by_scheme['random-phase'].effective_rate


def main():
    """Run all tests."""
    return run_tests(globals(), "harness tests")


if __name__ == '__main__':
    sys.exit(main())
