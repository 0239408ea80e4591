"""Reflection optimization schemes: the training-set protocol and its baselines."""

from .base_scheme import BaseScheme, SchemeOutcome, SlotRecord, realized_rate
from .proposed import ProposedScheme, ReflectionVector, TrainingSet, generate_training_set, run_proposed_scheme
from .random_phase import RandomPhaseScheme
from .ao import AoResult, AoScheme, ao_optimize

__all__ = [
    'BaseScheme', 'SchemeOutcome', 'SlotRecord', 'realized_rate',
    'ProposedScheme', 'ReflectionVector', 'TrainingSet', 'generate_training_set', 'run_proposed_scheme',
    'RandomPhaseScheme', 'AoResult', 'AoScheme', 'ao_optimize', 'build_scheme',
]


def build_scheme(name: str, config, num_slots: int = 1, noise_enabled: bool = True, pilot=None) -> BaseScheme:
    """Instantiate a scheme by its scenario name."""
    if name == 'proposed':
        return ProposedScheme(config, num_slots, noise_enabled=noise_enabled, pilot=pilot)
    if name == 'random-phase':
        return RandomPhaseScheme(config, noise_enabled=noise_enabled, pilot=pilot)
    if name == 'ao-perfect-csi':
        return AoScheme(config, perfect_csi=True, pilot=pilot)
    if name == 'ao-estimated-csi':
        return AoScheme(config, perfect_csi=False, noise_enabled=noise_enabled, pilot=pilot)
    raise ValueError(f"Unknown scheme '{name}'")
