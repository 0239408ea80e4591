"""
Training-set reflection protocol.

Q random reflection vectors are tried in turn during uplink training. Each slot
yields one least-squares composite estimate and one water-filling allocation;
the vector with the largest expected rate is kept for downlink transmission.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..allocation import water_fill
from ..analysis import complexity_report
from ..channel import ChannelRealization
from ..estimation import PilotVector, default_pilot, ls_estimate, simulate_uplink_training
from ..ofdm import achievable_rate, frequency_response
from ..system import SystemConfig
from ..utils import SeedPolicy, as_generator
from .base_scheme import BaseScheme, SchemeOutcome, SlotRecord

UNIT_MODULUS_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ReflectionVector:
    """RIS reflection coefficients phi with |phi_m| = 1."""

    phi: np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.phi)
        if phi.ndim != 1:
            raise ValueError(f"Reflection vector must be one-dimensional, got shape {phi.shape}")
        if np.any(np.abs(np.abs(phi) - 1.0) > UNIT_MODULUS_TOLERANCE):
            raise ValueError("Reflection coefficients must have unit modulus")

    @classmethod
    def from_phases(cls, phases: np.ndarray) -> 'ReflectionVector':
        return cls(phi=np.exp(1j * np.asarray(phases, dtype=float)))


@dataclass(frozen=True)
class TrainingSet:
    """Ordered stack of Q reflection vectors, one row per training slot."""

    vectors: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        v = np.asarray(self.vectors)
        if v.ndim != 2 or v.shape[0] < 1:
            raise ValueError(f"Training set must be a non-empty (Q, M) array, got shape {v.shape}")
        if np.any(np.abs(np.abs(v) - 1.0) > UNIT_MODULUS_TOLERANCE):
            raise ValueError("Training set entries must have unit modulus")

    def __len__(self) -> int:
        return self.vectors.shape[0]

    @property
    def num_elements(self) -> int:
        return self.vectors.shape[1]

    def prefix(self, num_slots: int) -> 'TrainingSet':
        """First `num_slots` vectors of the set."""
        if not 1 <= num_slots <= len(self):
            raise ValueError(f"Prefix length must lie in [1, {len(self)}], got {num_slots}")
        return TrainingSet(vectors=self.vectors[:num_slots], seed=self.seed)


def generate_training_set(num_slots: int, num_elements: int,
                          rng: Union[None, int, np.random.Generator] = None) -> TrainingSet:
    """
    Draw Q i.i.d. reflection vectors with phases uniform on [0, 2 pi).

    Rows are drawn in order, so the first q rows of a set of size Q equal a
    set of size q drawn from the same generator state.
    """
    if num_slots < 1:
        raise ValueError(f"Training set needs Q >= 1, got {num_slots}")
    if num_elements < 1:
        raise ValueError(f"Need at least one RIS element, got {num_elements}")
    seed = rng if isinstance(rng, int) else None
    generator = as_generator(rng)
    phases = generator.uniform(0.0, 2.0 * np.pi, size=(num_slots, num_elements))
    return TrainingSet(vectors=np.exp(1j * phases), seed=seed)


def run_proposed_scheme(realization: ChannelRealization, training_set: TrainingSet,
                        config: SystemConfig, rng: Optional[np.random.Generator] = None,
                        noise_enabled: bool = True, pilot: Optional[PilotVector] = None,
                        logger: Optional[logging.Logger] = None) -> SchemeOutcome:
    """
    Run the training protocol over every slot and select the best vector.

    Args:
        realization: True channel of the coherence block
        training_set: Reflection vectors tried in slot order
        config: System parameters
        rng: Generator for the uplink noise; slot q consumes the q-th draw
        noise_enabled: If False, the estimates are noiseless
        pilot: Uplink pilot; a seeded constant-modulus pilot by default

    Returns:
        SchemeOutcome holding every slot record; ties go to the lowest index
    """
    log = logger or logging.getLogger(__name__)
    if training_set is None or len(training_set) == 0:
        raise ValueError("Training set is empty")
    if training_set.num_elements != realization.num_elements:
        raise ValueError(
            f"Training set has {training_set.num_elements} elements, channel has {realization.num_elements}")

    pilot = pilot or default_pilot(config.num_subcarriers, config.pilot_seed)
    noise_power = config.noise_ap if noise_enabled else 0.0
    if noise_enabled and rng is None:
        raise ValueError("A random generator is required for noisy training")
    n, n_cp = config.num_subcarriers, config.cp_length

    true_channels = realization.composite_many(training_set.vectors)
    slots = []
    for index, (phi, h) in enumerate(zip(training_set.vectors, true_channels)):
        y = simulate_uplink_training(h, pilot, config.uplink_power, noise_power, rng)
        estimate = ls_estimate(y, pilot, config.uplink_power, order=config.reflected_taps, slot=index)
        estimated_freq = frequency_response(estimate.taps)
        allocation = water_fill(estimated_freq.power, config.noise_ue, config.downlink_power, log=log)
        slots.append(SlotRecord(
            index=index,
            phi=phi,
            estimate=estimate.taps,
            allocation=allocation,
            expected_rate=achievable_rate(estimated_freq, allocation, config.noise_ue, n, n_cp).rate,
            realized_rate=achievable_rate(frequency_response(h), allocation, config.noise_ue, n, n_cp).rate,
        ))

    best = int(np.argmax([slot.expected_rate for slot in slots]))
    chosen = slots[best]
    log.debug(f"Selected slot {best} of {len(slots)} with expected rate {chosen.expected_rate:.4f}")
    return SchemeOutcome(
        chosen_index=best,
        phi=chosen.phi,
        allocation=chosen.allocation,
        expected_rate=chosen.expected_rate,
        realized_rate=chosen.realized_rate,
        training_overhead=len(slots),
        slots=tuple(slots),
    )


class ProposedScheme(BaseScheme):
    """Training-set protocol with Q slots per coherence block."""

    name = 'proposed'

    def __init__(self, config: SystemConfig, num_slots: int, noise_enabled: bool = True,
                 pilot: Optional[PilotVector] = None, logger: Optional[logging.Logger] = None):
        super().__init__(config, pilot=pilot, logger=logger)
        if num_slots < 1:
            raise ValueError(f"Training set needs Q >= 1, got {num_slots}")
        self.num_slots = num_slots
        self.noise_enabled = noise_enabled

    def run(self, realization: ChannelRealization, policy: SeedPolicy, trial: int) -> SchemeOutcome:
        training_set = generate_training_set(self.num_slots, realization.num_elements,
                                             policy.generator(trial, 'training_set'))
        rng = policy.generator(trial, 'uplink_noise') if self.noise_enabled else None
        return run_proposed_scheme(realization, training_set, self.config, rng,
                                   noise_enabled=self.noise_enabled, pilot=self.pilot, logger=self.logger)

    @property
    def training_overhead(self) -> int:
        return self.num_slots

    def complexity_total(self) -> int:
        return complexity_report(self.config.num_elements, self.config.num_subcarriers, self.num_slots,
                                 self.config.reflected_taps, self.config.ao_iterations).proposed_total
