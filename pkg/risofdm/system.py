"""
System parameters and geometry-derived link statistics.

All quantities stored here are linear (watts, power ratios, meters); dB and dBm
values are converted once by the config loader.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Dict

from .validators.config_validator import ConfigValidator

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Raised for invalid or unreadable configuration."""


@dataclass(frozen=True)
class SystemConfig:
    """Every scalar parameter of the link, immutable once built."""

    num_subcarriers: int = 128
    cp_length: int = 8
    num_elements: int = 100
    taps_direct: int = 3
    taps_ap_ris: int = 1
    taps_ris_ue: int = 5
    downlink_power: float = 1e-2
    uplink_power: float = 1e-3
    noise_ap: float = 1e-13
    noise_ue: float = 1e-12
    rician_direct: float = 1.0
    rician_ap_ris: float = 10.0 ** 0.5
    rician_ris_ue: float = 10.0 ** 0.3
    pathloss_direct: float = 3.5
    pathloss_ap_ris: float = 2.2
    pathloss_ris_ue: float = 2.8
    reference_loss: float = 1e-3
    ap_height: float = 10.0
    ris_height: float = 10.0
    ap_ris_horizontal: float = 50.0
    ue_height: float = 0.0
    element_spacing: float = 0.125
    elements_per_row: int = 10
    ao_iterations: int = 3
    ao_update: str = 'gradient'
    ao_search_points: int = 64
    ao_candidates: int = 128
    ao_starts: int = 8
    truncate_separate: bool = True
    pilot_seed: int = 20210901

    def __post_init__(self):
        validator = ConfigValidator()
        if not validator.validate(self):
            raise ConfigError(f"Invalid system configuration: {validator.error_summary()}")
        for warning in validator.warnings:
            logger.warning(f"System configuration: {warning}")

    @property
    def reflected_taps(self) -> int:
        """L_r, the delay spread of every cascaded channel."""
        return self.taps_ap_ris + self.taps_ris_ue - 1

    @property
    def cp_penalty(self) -> float:
        return self.num_subcarriers / (self.num_subcarriers + self.cp_length)

    def replace(self, **changes) -> 'SystemConfig':
        """Validated copy with some fields changed."""
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class LinkStats:
    """Large-scale statistics of one link."""

    distance: float
    avg_power: float
    los_fraction: float
    taps: int


@dataclass(frozen=True)
class LinkStatistics:
    """Statistics of the direct, AP-RIS, RIS-UE and cascaded reflected links."""

    direct: LinkStats
    ap_ris: LinkStats
    ris_ue: LinkStats
    reflected: LinkStats

    def as_dict(self) -> Dict[str, LinkStats]:
        return {'d': self.direct, 'u': self.ap_ris, 'v': self.ris_ue, 'r': self.reflected}


def los_fraction(rician_factor: float, taps: int) -> float:
    """
    LoS share of a link's power under a uniform power delay profile.

    Args:
        rician_factor: Linear Rician factor of the link
        taps: Number of taps

    Returns:
        rician_factor / (rician_factor + taps - 1)
    """
    if taps == 1 and rician_factor > 0:
        return 1.0
    denominator = rician_factor + (taps - 1)
    if denominator <= 0:
        raise ConfigError(f"LoS fraction undefined for Rician factor {rician_factor} with {taps} tap(s)")
    kappa = rician_factor / denominator
    if not 0.0 <= kappa <= 1.0:
        raise ConfigError(f"LoS fraction {kappa} outside [0, 1]; check Rician factor and tap count")
    return kappa


def path_gain(reference_loss: float, distance: float, exponent: float) -> float:
    """Distance-dependent average power C0 * d^(-alpha)."""
    if distance <= 0:
        raise ConfigError(f"Link distance must be positive, got {distance}")
    return reference_loss * distance ** (-exponent)


def derive_link_statistics(config: SystemConfig) -> LinkStatistics:
    """
    Derive distances, average powers and LoS fractions from the geometry.

    The AP-RIS distance uses the horizontal separation and height difference,
    the UE sits directly below the RIS, and the AP-UE distance follows from
    Pythagoras. The cascaded link composes the AP-RIS and RIS-UE statistics.
    """
    d_ap_ris = math.hypot(config.ap_ris_horizontal, config.ap_height - config.ris_height)
    d_ris_ue = config.ris_height - config.ue_height
    d_direct = math.hypot(config.ap_ris_horizontal, config.ap_height - config.ue_height)

    direct = LinkStats(
        distance=d_direct,
        avg_power=path_gain(config.reference_loss, d_direct, config.pathloss_direct),
        los_fraction=los_fraction(config.rician_direct, config.taps_direct),
        taps=config.taps_direct,
    )
    ap_ris = LinkStats(
        distance=d_ap_ris,
        avg_power=path_gain(config.reference_loss, d_ap_ris, config.pathloss_ap_ris),
        los_fraction=los_fraction(config.rician_ap_ris, config.taps_ap_ris),
        taps=config.taps_ap_ris,
    )
    ris_ue = LinkStats(
        distance=d_ris_ue,
        avg_power=path_gain(config.reference_loss, d_ris_ue, config.pathloss_ris_ue),
        los_fraction=los_fraction(config.rician_ris_ue, config.taps_ris_ue),
        taps=config.taps_ris_ue,
    )
    reflected = LinkStats(
        distance=d_ap_ris + d_ris_ue,
        avg_power=ap_ris.avg_power * ris_ue.avg_power,
        los_fraction=ap_ris.los_fraction * ris_ue.los_fraction,
        taps=config.reflected_taps,
    )
    return LinkStatistics(direct=direct, ap_ris=ap_ris, ris_ue=ris_ue, reflected=reflected)
