"""
Uplink pilot simulation and channel estimation.

Composite estimation: one least-squares estimate of h_q = d + R phi_q per
training slot, truncated to the known channel order. Separate estimation:
M + 1 composite estimates taken under DFT reflection patterns, inverted to
recover d and R.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

PILOT_NORM_TOLERANCE = 1e-9


class EstimationError(ValueError):
    """Raised for unusable pilots or mismatched training data."""


@dataclass(frozen=True)
class PilotVector:
    """Unit-energy frequency-domain pilot x with no zero entry."""

    symbols: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.symbols)
        if x.ndim != 1:
            raise EstimationError(f"Pilot must be a vector, got shape {x.shape}")
        if np.any(x == 0):
            raise EstimationError("Pilot has a zero entry; X would not be invertible")
        energy = float(np.sum(np.abs(x) ** 2))
        if abs(energy - 1.0) > PILOT_NORM_TOLERANCE:
            raise EstimationError(f"Pilot energy must be 1, got {energy}")

    @property
    def num_subcarriers(self) -> int:
        return self.symbols.size


@dataclass(frozen=True)
class CompositeEstimate:
    """Truncated LS estimate of one slot's composite channel."""

    taps: np.ndarray
    slot: int
    order: int
    raw: np.ndarray


@dataclass(frozen=True)
class SeparateEstimate:
    """Estimates of the direct channel d and cascaded matrix R."""

    direct: np.ndarray
    cascaded: np.ndarray


def default_pilot(num_subcarriers: int, seed: Optional[int] = None) -> PilotVector:
    """Constant-modulus pilot x_n = e^{j theta_n} / sqrt(N) from a seeded phase draw."""
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=num_subcarriers)
    return PilotVector(symbols=np.exp(1j * theta) / np.sqrt(num_subcarriers))


def simulate_uplink_training(h: np.ndarray, pilot: PilotVector, uplink_power: float,
                             noise_power: float, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """
    Frequency-domain signal received at the AP in one training slot.

    y = sqrt(P_UL) X F h + z, with z ~ CN(0, sigma_z^2 I)

    Args:
        h: Time-domain composite channel (length N)
        pilot: Pilot vector x
        uplink_power: P_UL
        noise_power: sigma_z^2; zero gives the noiseless signal
        rng: Generator for the noise draw (required when noise_power > 0)
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != pilot.symbols.shape:
        raise ValueError(f"Channel length {h.size} does not match pilot length {pilot.num_subcarriers}")
    if not uplink_power > 0:
        raise ValueError(f"Uplink pilot power must be positive, got {uplink_power}")

    y = np.sqrt(uplink_power) * pilot.symbols * np.fft.fft(h)
    if noise_power > 0:
        if rng is None:
            raise ValueError("A random generator is required for noisy training")
        z = rng.standard_normal((2, h.size))
        y = y + np.sqrt(noise_power / 2.0) * (z[0] + 1j * z[1])
    return y


def ls_estimate(y: np.ndarray, pilot: PilotVector, uplink_power: float,
                order: Optional[int] = None, slot: int = 0) -> CompositeEstimate:
    """
    Least-squares composite-channel estimate (1 / (N sqrt(P_UL))) F^H X^{-1} y.

    Taps beyond `order` (the known channel order L_r) are set to zero.
    """
    y = np.asarray(y, dtype=complex)
    if y.shape != pilot.symbols.shape:
        raise ValueError(f"Received length {y.size} does not match pilot length {pilot.num_subcarriers}")
    if np.any(pilot.symbols == 0):
        raise EstimationError("Pilot has a zero entry")

    raw = np.fft.ifft(y / pilot.symbols) / np.sqrt(uplink_power)
    order = raw.size if order is None else int(order)
    if not 1 <= order <= raw.size:
        raise ValueError(f"Channel order must lie in [1, {raw.size}], got {order}")
    taps = raw.copy()
    taps[order:] = 0.0
    return CompositeEstimate(taps=taps, slot=slot, order=order, raw=raw)


def dft_training_patterns(num_elements: int) -> np.ndarray:
    """
    DFT reflection patterns for separate channel estimation.

    Returns:
        (M+1, M+1) matrix Psi; column q is the augmented vector [1; phi_q]
        and Psi Psi^H = (M+1) I
    """
    if num_elements < 1:
        raise ValueError(f"Need at least one RIS element, got {num_elements}")
    size = num_elements + 1
    index = np.arange(size)
    return np.exp(-2j * np.pi * np.outer(index, index) / size)


def estimate_separate_channels(estimates: Sequence[Union[CompositeEstimate, np.ndarray]],
                               patterns: np.ndarray,
                               direct_taps: Optional[int] = None,
                               reflected_taps: Optional[int] = None) -> SeparateEstimate:
    """
    Recover [d, R] from composite estimates h_q = [d, R] psi_q.

    Args:
        estimates: One composite estimate per column of `patterns`, in order
        patterns: (M+1, M+1) invertible matrix of augmented reflection vectors
        direct_taps: If given, d is truncated to this many taps
        reflected_taps: If given, every column of R is truncated to this many taps

    Returns:
        SeparateEstimate with d (N,) and R (N, M)
    """
    patterns = np.asarray(patterns, dtype=complex)
    if patterns.ndim != 2 or patterns.shape[0] != patterns.shape[1]:
        raise EstimationError(f"Patterns must form a square matrix, got shape {patterns.shape}")
    if len(estimates) != patterns.shape[1]:
        raise EstimationError(
            f"Got {len(estimates)} composite estimates for {patterns.shape[1]} training patterns")

    stacked = np.column_stack([getattr(e, 'taps', e) for e in estimates]).astype(complex)
    # [d, R] Psi = H  =>  Psi^T [d, R]^T = H^T
    separated = np.linalg.solve(patterns.T, stacked.T).T

    direct = separated[:, 0].copy()
    cascaded = separated[:, 1:].copy()
    if direct_taps is not None:
        direct[direct_taps:] = 0.0
    if reflected_taps is not None:
        cascaded[reflected_taps:, :] = 0.0
    return SeparateEstimate(direct=direct, cascaded=cascaded)
