#!/usr/bin/env python3
"""
Tests for the command-line interface
"""

import filecmp
import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from risofdm.cli import build_parser, main
from risofdm.config import BOUND_HEADER, COMPLEXITY_HEADER, RESULT_HEADER
from risofdm.harness import read_results
from test_support import run_tests

SMALL_LINK = ['--set', 'system.num_elements=4']


def test_analyze_writes_both_tables():
    with tempfile.TemporaryDirectory() as tmp:
        bounds, complexity = os.path.join(tmp, 'bounds.csv'), os.path.join(tmp, 'complexity.csv')
        assert main(['analyze', '--out', bounds, '--complexity-out', complexity, '--values', '1,10,100']) == 0
        with open(bounds, encoding='utf-8') as f:
            lines = f.read().splitlines()
        assert lines[0] == ','.join(BOUND_HEADER) and len(lines) == 4
        with open(complexity, encoding='utf-8') as f:
            lines = f.read().splitlines()
        assert lines[0] == ','.join(COMPLEXITY_HEADER) and len(lines) == 1 + 11 * 3


def test_simulate_is_deterministic_across_workers():
    with tempfile.TemporaryDirectory() as tmp:
        outputs = []
        for workers in ('1', '2'):
            out = os.path.join(tmp, f'w{workers}.csv')
            assert main(['simulate', '--scheme', 'proposed', '--axis', 'Q', '--values', '1', '2', '4',
                         '--trials', '4', '--seed', '21', '--workers', workers, '--out', out] + SMALL_LINK) == 0
            outputs.append(out)
        assert filecmp.cmp(*outputs, shallow=False)
        rows = read_results(outputs[0])
        assert [row.axis_value for row in rows] == [1, 2, 4]
        assert all(row.seed == 21 and row.trials == 4 for row in rows)


def test_simulate_with_coherence_and_plot_script():
    with tempfile.TemporaryDirectory() as tmp:
        out, script = os.path.join(tmp, 'rate.csv'), os.path.join(tmp, 'rate.gp')
        assert main(['simulate', '--scheme', 'random-phase', '--axis', 'T', '--values', '10,100',
                     '--trials', '2', '--out', out, '--plot-script', script] + SMALL_LINK) == 0
        rows = read_results(out)
        assert rows[0].effective_rate < rows[1].effective_rate
        assert os.path.exists(script)


def test_sweep_pairs_schemes():
    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, 'sweep.csv')
        assert main(['sweep', '--scheme', 'random-phase', 'ao-perfect-csi', '--axis', 'M', '--values', '2', '4',
                     '--trials', '2', '--out', out]) == 0
        with open(out, encoding='utf-8') as f:
            lines = f.read().splitlines()
        assert lines[0] == ','.join(RESULT_HEADER) and len(lines) == 5


def test_errors_exit_nonzero():
    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, 'x.csv')
        assert main(['simulate', '--scheme', 'ao-perfect-csi', '--axis', 'Q', '--values', '1', '--out', out]) == 1
        assert main(['simulate', '--config', os.path.join(tmp, 'missing.yaml'), '--out', out]) == 1
        assert main(['simulate', '--set', 'system.cp_length=1', '--out', out]) == 1
        assert main(['sweep', '--out', out]) == 1
        assert main(['simulate', '--axis', 'T', '--out', out]) == 1
        assert not os.path.exists(out)


def test_usage_errors_exit_with_two():
    try:
        build_parser().parse_args(['simulate', '--scheme', 'sca'])
    except SystemExit as e:
        assert e.code == 2
    else:
        raise AssertionError("unknown scheme accepted by the parser")


def main_runner():
    """Run all tests."""
    return run_tests({name: obj for name, obj in globals().items() if name.startswith('test_')}, "CLI tests")


if __name__ == '__main__':
    sys.exit(main_runner())
