"""
Shared helpers for the script-style test modules.

Each test_*.py file runs under pytest and also as a plain script through
run_tests, which prints one status line per test.
"""

import os
import traceback
import unittest

SLOW_ENV = 'RISOFDM_SLOW'


def require_slow():
    """Skip the calling test unless long acceptance runs are enabled."""
    if not os.environ.get(SLOW_ENV):
        raise unittest.SkipTest(f"set {SLOW_ENV}=1 to run acceptance-scale checks")


def run_tests(namespace, title: str) -> int:
    """Run every test_* function of a module namespace; returns an exit code."""
    print(f"Running {title}...\n")
    tests = [(name, obj) for name, obj in namespace.items() if name.startswith('test_') and callable(obj)]
    passed = skipped = 0

    for name, test in tests:
        try:
            test()
        except unittest.SkipTest as e:
            skipped += 1
            print(f"- {name} skipped: {e}")
        except Exception:
            print(f"✗ {name} failed")
            traceback.print_exc()
        else:
            passed += 1
            print(f"✓ {name}")

    print(f"\n=== Test Results ===")
    print(f"Tests passed: {passed}/{len(tests) - skipped} ({skipped} skipped)")
    return 0 if passed + skipped == len(tests) else 1
