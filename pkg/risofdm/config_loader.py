"""
Configuration Loader for RIS-OFDM simulations

This module handles loading and parsing of simulation configuration files and
turns them into a validated SystemConfig.
"""

import copy
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional

from .config import CONFIG_FILE_NAMES, DEFAULT_CONFIG
from .system import ConfigError, SystemConfig
from .utils import db_to_linear, dbm_to_watts


class ConfigLoader:
    """Loads, merges and normalizes simulation configuration."""

    def __init__(self, config_path: Optional[str] = None, logger: Optional[logging.Logger] = None):
        """Initialize config loader with optional config file path."""
        self.logger = logger or logging.getLogger(__name__)
        self.explicit_path = config_path is not None
        self.config_path = config_path or self._find_config_file()
        self.config: Optional[Dict[str, Any]] = None

    def load_config(self) -> Dict[str, Any]:
        """Load configuration from file or return default config."""
        if self.config is not None:
            return self.config

        if self.config_path and os.path.exists(self.config_path):
            try:
                custom = self._load_config_file(self.config_path)
            except (OSError, ValueError) as e:
                raise ConfigError(f"Could not load config from {self.config_path}: {e}") from e
            self.config = self._merge_configs(DEFAULT_CONFIG, custom)
            self.logger.info(f"Loaded configuration from {self.config_path}")
        elif self.explicit_path:
            raise ConfigError(f"Config file not found: {self.config_path}")
        else:
            self.config = copy.deepcopy(DEFAULT_CONFIG)

        return self.config

    def _find_config_file(self) -> Optional[str]:
        """Find a configuration file in the current directory."""
        current_dir = Path.cwd()
        for config_name in CONFIG_FILE_NAMES:
            config_path = current_dir / config_name
            if config_path.exists():
                return str(config_path)
        return None

    def _load_config_file(self, config_path: str) -> Dict[str, Any]:
        """Load configuration from JSON or YAML file."""
        with open(config_path, 'r', encoding='utf-8') as f:
            content = f.read()

        if config_path.endswith('.json'):
            return json.loads(content) or {}
        elif config_path.endswith(('.yaml', '.yml')):
            return self._parse_simple_yaml(content) or {}
        else:
            raise ValueError(f"Unsupported config file format: {config_path}")

    def _parse_simple_yaml(self, content: str) -> Dict[str, Any]:
        """
        Parse simple YAML content without external dependencies.

        Handles nested mappings by indentation, scalar values, inline lists and
        full-line or trailing comments.
        """
        result: Dict[str, Any] = {}
        dict_stack = []

        for line_number, line in enumerate(content.split('\n'), 1):
            stripped = self._strip_comment(line).strip()
            if not stripped:
                continue

            indent = len(line) - len(line.lstrip())

            while dict_stack and indent <= dict_stack[-1][1]:
                dict_stack.pop()

            current_dict = dict_stack[-1][0] if dict_stack else result

            if ':' not in stripped:
                raise ValueError(f"line {line_number}: expected 'key: value', got '{stripped}'")

            key, value = stripped.split(':', 1)
            key = key.strip().strip('"\'')
            value = value.strip()

            if not value:
                nested_dict: Dict[str, Any] = {}
                current_dict[key] = nested_dict
                dict_stack.append((nested_dict, indent))
            else:
                current_dict[key] = self._parse_yaml_value(value)

        return result

    @staticmethod
    def _strip_comment(line: str) -> str:
        """Drop a '#' comment that is not inside quotes."""
        quote = None
        for i, char in enumerate(line):
            if char in ('"', "'"):
                quote = None if quote == char else (quote or char)
            elif char == '#' and quote is None:
                return line[:i]
        return line

    def _parse_yaml_value(self, value: str) -> Any:
        """Parse a YAML value string into appropriate Python type."""
        value = value.strip()

        if value.startswith('[') and value.endswith(']'):
            inner = value[1:-1].strip()
            return [self._parse_yaml_value(item) for item in inner.split(',')] if inner else []

        # Remove quotes if present
        if (value.startswith('"') and value.endswith('"')) or \
           (value.startswith("'") and value.endswith("'")):
            return value[1:-1]

        if value.lower() in ('true', 'yes', 'on'):
            return True
        elif value.lower() in ('false', 'no', 'off'):
            return False

        if value.lower() in ('null', 'none', '~'):
            return None

        try:
            if any(c in value for c in '.eE') and not value.lower().startswith(('inf', 'nan')):
                return float(value)
            return int(value)
        except ValueError:
            pass

        return value

    def _merge_configs(self, default: Dict[str, Any], custom: Dict[str, Any]) -> Dict[str, Any]:
        """Recursively merge custom config with default config."""
        result = copy.deepcopy(default)

        for key, value in custom.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._merge_configs(result[key], value)
            else:
                result[key] = value

        return result

    def apply_overrides(self, overrides: Iterable[str]) -> Dict[str, Any]:
        """
        Apply 'section.key=value' overrides on top of the loaded config.

        Args:
            overrides: Override strings, e.g. 'system.num_elements=200'

        Returns:
            The updated configuration dictionary
        """
        config = self.load_config()
        for override in overrides:
            if '=' not in override:
                raise ConfigError(f"Override '{override}' is not of the form section.key=value")
            path, raw_value = override.split('=', 1)
            self.set_value(path.strip(), self._parse_yaml_value(raw_value))
        return config

    def set_value(self, path: str, value: Any) -> None:
        """Set one 'section.key' entry; unknown entries are rejected."""
        section, key = _split_entry(path)
        self.load_config().setdefault(section, {})[key] = value
        self.logger.debug(f"Config override {path} = {value!r}")

    def build_system_config(self) -> SystemConfig:
        """Convert the loaded dB/dBm configuration into a validated SystemConfig."""
        return system_config_from_dict(self.load_config())

    def save_default_config(self, output_path: str = 'risofdm.json'):
        """Save the default configuration to a file for reference."""
        with open(output_path, 'w', encoding='utf-8') as f:
            json.dump(DEFAULT_CONFIG, f, indent=2)
        self.logger.info(f"Default configuration saved to {output_path}")


def system_config_from_dict(config: Dict[str, Any]) -> SystemConfig:
    """Normalize a config dictionary (dB, dBm and meters) into a SystemConfig."""
    for section, entries in config.items():
        if section not in DEFAULT_CONFIG:
            raise ConfigError(f"Unknown config section '{section}'")
        if not isinstance(entries, dict):
            raise ConfigError(f"Config section '{section}' must be a mapping")
        unknown = set(entries) - set(DEFAULT_CONFIG[section])
        if unknown:
            raise ConfigError(f"Unknown entries in section '{section}': {sorted(unknown)}")

    merged = {section: {**DEFAULT_CONFIG[section], **config.get(section, {})} for section in DEFAULT_CONFIG}
    system, channel = merged['system'], merged['channel']
    geometry, power, optimization = merged['geometry'], merged['power'], merged['optimization']

    try:
        return SystemConfig(
            num_subcarriers=int(system['num_subcarriers']),
            cp_length=int(system['cp_length']),
            num_elements=int(system['num_elements']),
            taps_direct=int(channel['taps_direct']),
            taps_ap_ris=int(channel['taps_ap_ris']),
            taps_ris_ue=int(channel['taps_ris_ue']),
            downlink_power=dbm_to_watts(float(power['downlink_dbm'])),
            uplink_power=dbm_to_watts(float(power['uplink_pilot_dbm'])),
            noise_ap=dbm_to_watts(float(power['noise_ap_dbm'])),
            noise_ue=dbm_to_watts(float(power['noise_ue_dbm'])),
            rician_direct=db_to_linear(float(channel['rician_direct_db'])),
            rician_ap_ris=db_to_linear(float(channel['rician_ap_ris_db'])),
            rician_ris_ue=db_to_linear(float(channel['rician_ris_ue_db'])),
            pathloss_direct=float(channel['pathloss_direct']),
            pathloss_ap_ris=float(channel['pathloss_ap_ris']),
            pathloss_ris_ue=float(channel['pathloss_ris_ue']),
            reference_loss=db_to_linear(float(channel['reference_loss_db'])),
            ap_height=float(geometry['ap_height']),
            ris_height=float(geometry['ris_height']),
            ap_ris_horizontal=float(geometry['ap_ris_horizontal']),
            ue_height=float(geometry['ue_height']),
            element_spacing=float(geometry['element_spacing']),
            elements_per_row=int(geometry['elements_per_row']),
            ao_iterations=int(optimization['ao_iterations']),
            ao_update=str(optimization['ao_update']),
            ao_search_points=int(optimization['ao_search_points']),
            ao_candidates=int(optimization['ao_candidates']),
            ao_starts=int(optimization['ao_starts']),
            truncate_separate=bool(optimization['truncate_separate']),
            pilot_seed=int(optimization['pilot_seed']),
        )
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"Malformed configuration value: {e}") from e


def _split_entry(path: str):
    if path.count('.') != 1:
        raise ConfigError(f"Config path '{path}' must look like section.key")
    section, key = path.split('.')
    if section not in DEFAULT_CONFIG or key not in DEFAULT_CONFIG[section]:
        raise ConfigError(f"Unknown config entry '{path}'")
    return section, key


def override_config(config: Dict[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """Copy of `config` with {'section.key': value} entries applied."""
    updated = copy.deepcopy(config)
    for path, value in overrides.items():
        section, key = _split_entry(path)
        updated.setdefault(section, {})[key] = value
    return updated
