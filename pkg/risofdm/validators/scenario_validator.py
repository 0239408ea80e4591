"""
Scenario Validator

Checks that a Monte Carlo scenario names a known scheme, sweeps an axis that
scheme can move along, and carries a usable grid of axis values.
"""

from typing import Any

from .base_validator import BaseValidator
from ..config import AXES, SCHEME_AXES, SCHEMES

INTEGER_AXES = ('Q', 'M')


class ScenarioValidator(BaseValidator):
    """Validates Scenario fields and the scheme/axis combination."""

    def validate(self, subject: Any) -> bool:
        """Validate a Scenario; all violations are collected."""
        self.clear_results()
        scenario = subject

        if scenario.scheme not in SCHEMES:
            self.add_error(f"unknown scheme '{scenario.scheme}', expected one of {SCHEMES}", 'scheme')
        if scenario.axis not in AXES:
            self.add_error(f"unknown axis '{scenario.axis}', expected one of {AXES}", 'axis')
        elif scenario.scheme in SCHEME_AXES and scenario.axis not in SCHEME_AXES[scenario.scheme]:
            self.add_error(
                f"scheme '{scenario.scheme}' cannot be swept along {scenario.axis}; "
                f"allowed axes are {SCHEME_AXES[scenario.scheme]}", 'axis')

        self._validate_values(scenario)

        if scenario.trials < 1:
            self.add_error(f"must be at least 1, got {scenario.trials}", 'trials')
        if scenario.seed < 0:
            self.add_error(f"must be nonnegative, got {scenario.seed}", 'seed')
        if scenario.q < 1:
            self.add_error(f"training set size must be at least 1, got {scenario.q}", 'q')
        if scenario.coherence_time is not None and not scenario.coherence_time > 0:
            self.add_error(f"must be positive, got {scenario.coherence_time}", 'coherence_time')

        return not self.errors

    def _validate_values(self, scenario):
        values = list(scenario.values)
        if not values:
            self.add_error("at least one axis value is required", 'values')
            return
        if any(later <= earlier for earlier, later in zip(values, values[1:])):
            self.add_error(f"axis values must be strictly increasing, got {values}", 'values')

        if scenario.axis in INTEGER_AXES:
            for value in values:
                if value != int(value) or value < 1:
                    self.add_error(f"{scenario.axis} values must be positive integers, got {value}", 'values')
        elif scenario.axis == 'T':
            for value in values:
                if not value > 0:
                    self.add_error(f"coherence times must be positive, got {value}", 'values')
