"""Utility functions shared across the simulator."""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Union

import numpy as np

# Stream codes for the per-trial random sources. Every consumer of randomness
# draws from its own stream so that changing one never shifts another.
STREAM_PURPOSES: Dict[str, int] = {
    'channel': 0,
    'training_set': 1,
    'uplink_noise': 2,
    'separate_noise': 3,
    'oracle': 4,
}


def setup_logging(level: Union[int, str] = logging.INFO, log_file: Optional[str] = None) -> None:
    """Set up logging configuration."""
    handlers = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def db_to_linear(value_db: float) -> float:
    """Convert a power ratio from dB to linear scale."""
    return float(10.0 ** (value_db / 10.0))


def dbm_to_watts(value_dbm: float) -> float:
    """Convert a power level from dBm to watts."""
    return float(10.0 ** ((value_dbm - 30.0) / 10.0))


def linear_to_db(value: float) -> float:
    """Convert a linear power ratio to dB."""
    return float(10.0 * np.log10(value))


def as_generator(rng: Union[None, int, np.random.Generator]) -> np.random.Generator:
    """Return `rng` unchanged if it already is a Generator, else seed a new one."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


@dataclass(frozen=True)
class SeedPolicy:
    """
    Deterministic random-source policy.

    Streams are keyed by (master_seed, trial index, purpose); the same key always
    produces the same draws, independent of worker count or execution order.
    """

    master_seed: int

    def sequence(self, trial: int, purpose: str) -> np.random.SeedSequence:
        """Seed sequence of one (trial, purpose) stream."""
        if purpose not in STREAM_PURPOSES:
            raise ValueError(f"Unknown random stream purpose: {purpose}")
        if trial < 0:
            raise ValueError(f"Trial index must be nonnegative, got {trial}")
        return np.random.SeedSequence([int(self.master_seed), int(trial), STREAM_PURPOSES[purpose]])

    def generator(self, trial: int, purpose: str) -> np.random.Generator:
        """Independent generator for one (trial, purpose) stream."""
        return np.random.default_rng(self.sequence(trial, purpose))
