"""
Base Scheme Class

This module provides the base class for all reflection optimization schemes
and the outcome records they produce.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from ..allocation import PowerAllocation
from ..channel import ChannelRealization
from ..estimation import PilotVector, default_pilot
from ..ofdm import achievable_rate, frequency_response
from ..system import SystemConfig
from ..utils import SeedPolicy


@dataclass(frozen=True)
class SlotRecord:
    """Diagnostics of one training slot."""

    index: int
    phi: np.ndarray
    estimate: np.ndarray
    allocation: PowerAllocation
    expected_rate: float
    realized_rate: float


@dataclass(frozen=True)
class SchemeOutcome:
    """Decision of a scheme and the rates it achieves."""

    chosen_index: int
    phi: np.ndarray
    allocation: PowerAllocation
    expected_rate: float
    realized_rate: float
    training_overhead: int
    slots: Tuple[SlotRecord, ...] = ()

    def prefix(self, num_slots: int) -> 'SchemeOutcome':
        """
        Outcome the slot-selection protocol gives when only the first
        `num_slots` slots are run.
        """
        if not self.slots:
            raise ValueError("Outcome carries no per-slot records")
        if not 1 <= num_slots <= len(self.slots):
            raise ValueError(f"Prefix length must lie in [1, {len(self.slots)}], got {num_slots}")
        kept = self.slots[:num_slots]
        best = int(np.argmax([slot.expected_rate for slot in kept]))
        chosen = kept[best]
        return replace(
            self,
            chosen_index=best,
            phi=chosen.phi,
            allocation=chosen.allocation,
            expected_rate=chosen.expected_rate,
            realized_rate=chosen.realized_rate,
            training_overhead=num_slots,
            slots=kept,
        )


def realized_rate(realization: ChannelRealization, phi: np.ndarray, allocation, config: SystemConfig) -> float:
    """Rate of the decision (phi, p) on the true composite channel."""
    freq = frequency_response(realization.composite(phi))
    return achievable_rate(freq, allocation, config.noise_ue,
                           config.num_subcarriers, config.cp_length).rate


class BaseScheme(ABC):
    """Abstract base class for all schemes."""

    name = 'base'

    def __init__(self, config: SystemConfig, pilot: Optional[PilotVector] = None,
                 logger: Optional[logging.Logger] = None):
        """Initialize scheme with the system configuration and uplink pilot."""
        self.config = config
        self.pilot = pilot or default_pilot(config.num_subcarriers, config.pilot_seed)
        self.logger = logger or logging.getLogger(__name__)

    @abstractmethod
    def run(self, realization: ChannelRealization, policy: SeedPolicy, trial: int) -> SchemeOutcome:
        """
        Run the scheme on one channel realization.

        Args:
            realization: True channel of the trial
            policy: Seed policy supplying the trial's random streams
            trial: Trial index

        Returns:
            SchemeOutcome of the trial
        """

    @property
    @abstractmethod
    def training_overhead(self) -> int:
        """Pilot symbols spent per coherence block."""

    @abstractmethod
    def complexity_total(self) -> int:
        """Total multiplications of this scheme's estimation and optimization."""
