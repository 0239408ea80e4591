"""
System Configuration Validator

Checks the structural invariants a SystemConfig must satisfy before any
channel is drawn.
"""

from typing import Any

from .base_validator import BaseValidator
from ..config import AO_UPDATE_RULES


class ConfigValidator(BaseValidator):
    """Validates SystemConfig dimensions, powers and knobs."""

    POSITIVE_FIELDS = (
        'downlink_power', 'uplink_power', 'noise_ap', 'noise_ue', 'reference_loss',
    )
    TAP_FIELDS = ('taps_direct', 'taps_ap_ris', 'taps_ris_ue')

    def validate(self, subject: Any) -> bool:
        """Validate a SystemConfig; all violations are collected."""
        self.clear_results()
        config = subject

        for name in ('num_subcarriers', 'num_elements', 'ao_iterations', 'ao_search_points',
                     'ao_candidates', 'ao_starts'):
            if int(getattr(config, name)) < 1:
                self.add_error(f"must be a positive integer, got {getattr(config, name)}", name)
        if config.cp_length < 0:
            self.add_error(f"must be nonnegative, got {config.cp_length}", 'cp_length')

        for name in self.TAP_FIELDS:
            if getattr(config, name) < 1:
                self.add_error(f"tap count must be >= 1, got {getattr(config, name)}", name)

        for name in self.POSITIVE_FIELDS:
            if not getattr(config, name) > 0:
                self.add_error(f"must be strictly positive, got {getattr(config, name)}", name)

        for name in ('rician_direct', 'rician_ap_ris', 'rician_ris_ue'):
            if getattr(config, name) < 0:
                self.add_error(f"Rician factor must be nonnegative, got {getattr(config, name)}", name)

        if not self.errors:
            reflected = config.taps_ap_ris + config.taps_ris_ue - 1
            if config.cp_length < reflected:
                self.add_error(
                    f"cyclic prefix {config.cp_length} shorter than reflected delay spread {reflected}",
                    'cp_length')
            if reflected < config.taps_direct:
                self.add_error(
                    f"reflected delay spread {reflected} shorter than direct {config.taps_direct}",
                    'taps_direct')
            if reflected > config.num_subcarriers:
                self.add_error(
                    f"reflected delay spread {reflected} exceeds {config.num_subcarriers} subcarriers",
                    'num_subcarriers')

        if config.ao_update not in AO_UPDATE_RULES:
            self.add_error(f"unknown rule '{config.ao_update}', expected one of {AO_UPDATE_RULES}",
                           'ao_update')

        if config.ris_height <= config.ue_height:
            self.add_warning("RIS not above the UE; RIS-UE distance will be rejected", 'ris_height')

        return not self.errors
