"""
Multipath Rician channel realizations for the direct, AP-RIS and RIS-UE links.

LoS power sits entirely on the first tap with a uniformly random phase; NLoS
power is spread evenly over the remaining taps.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .system import LinkStatistics, SystemConfig

logger = logging.getLogger(__name__)


class ChannelError(ValueError):
    """Raised for inconsistent tap statistics or dimensions."""


def sample_tap_matrix(count: int, taps: int, avg_power: float, los_fraction: float,
                      rng: np.random.Generator) -> np.ndarray:
    """
    Draw `count` independent tap vectors of one link.

    Args:
        count: Number of independent vectors (e.g. RIS elements)
        taps: Tap count L
        avg_power: Expected total power rho^2 of one vector
        los_fraction: LoS share kappa in [0, 1]
        rng: Random generator

    Returns:
        Complex array of shape (count, taps)
    """
    if taps < 1:
        raise ChannelError(f"Tap count must be >= 1, got {taps}")
    if avg_power <= 0:
        raise ChannelError(f"Link power must be positive, got {avg_power}")
    if not 0.0 <= los_fraction <= 1.0:
        raise ChannelError(f"LoS fraction {los_fraction} outside [0, 1]")
    if taps == 1 and los_fraction < 1.0:
        raise ChannelError("A single-tap link must be pure LoS (kappa = 1): no NLoS taps exist")

    out = np.zeros((count, taps), dtype=complex)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=count)
    out[:, 0] = np.sqrt(los_fraction * avg_power) * np.exp(1j * theta)
    if taps > 1:
        tap_var = (1.0 - los_fraction) * avg_power / (taps - 1)
        scatter = rng.standard_normal((count, taps - 1, 2))
        out[:, 1:] = np.sqrt(tap_var / 2.0) * (scatter[..., 0] + 1j * scatter[..., 1])
    return out


def sample_tap_vector(taps: int, avg_power: float, los_fraction: float,
                      rng: np.random.Generator) -> np.ndarray:
    """Draw one tap vector (see sample_tap_matrix)."""
    return sample_tap_matrix(1, taps, avg_power, los_fraction, rng)[0]


def cascade(u: np.ndarray, v: np.ndarray, num_subcarriers: int) -> np.ndarray:
    """Linear convolution of two tap vectors, zero-padded to length N."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    length = u.size + v.size - 1
    if length > num_subcarriers:
        raise ChannelError(f"Cascaded length {length} exceeds {num_subcarriers} samples")
    out = np.zeros(num_subcarriers, dtype=complex)
    out[:length] = np.convolve(u, v)
    return out


def cascade_matrix(ap_ris: np.ndarray, ris_ue: np.ndarray, num_subcarriers: int) -> np.ndarray:
    """
    Column-wise cascade of per-element tap vectors.

    Args:
        ap_ris: (M, L_u) taps
        ris_ue: (M, L_v) taps
        num_subcarriers: Zero-padded length N

    Returns:
        (N, M) matrix whose column m is ap_ris[m] * ris_ue[m] zero-padded
    """
    if ap_ris.shape[0] != ris_ue.shape[0]:
        raise ChannelError(f"Element count mismatch: {ap_ris.shape[0]} vs {ris_ue.shape[0]}")
    num_elements, taps_u = ap_ris.shape
    taps_v = ris_ue.shape[1]
    length = taps_u + taps_v - 1
    if length > num_subcarriers:
        raise ChannelError(f"Cascaded length {length} exceeds {num_subcarriers} samples")
    out = np.zeros((num_subcarriers, num_elements), dtype=complex)
    for shift in range(taps_u):
        out[shift:shift + taps_v, :] += (ap_ris[:, shift:shift + 1] * ris_ue).T
    return out


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the direct taps, per-element link taps and cascaded matrix."""

    direct: np.ndarray      # (N,), zero-padded
    ap_ris: np.ndarray      # (M, L_u)
    ris_ue: np.ndarray      # (M, L_v)
    cascaded: np.ndarray    # (N, M)

    @property
    def num_subcarriers(self) -> int:
        return self.direct.size

    @property
    def num_elements(self) -> int:
        return self.cascaded.shape[1]

    def composite(self, phi: np.ndarray) -> np.ndarray:
        """Composite channel h = d + R phi."""
        phi = np.asarray(phi)
        if phi.shape != (self.num_elements,):
            raise ValueError(f"Reflection vector must have {self.num_elements} entries, got {phi.shape}")
        return self.direct + self.cascaded @ phi

    def composite_many(self, phis: np.ndarray) -> np.ndarray:
        """Composite channels for a (Q, M) stack of reflection vectors, shape (Q, N)."""
        return self.direct[None, :] + (self.cascaded @ np.asarray(phis).T).T


def sample_channel_realization(stats: LinkStatistics, config: SystemConfig,
                               rng: np.random.Generator) -> ChannelRealization:
    """Draw independent direct, AP-RIS and RIS-UE taps and assemble R."""
    n = config.num_subcarriers
    m = config.num_elements

    direct_taps = sample_tap_vector(stats.direct.taps, stats.direct.avg_power,
                                    stats.direct.los_fraction, rng)
    ap_ris = sample_tap_matrix(m, stats.ap_ris.taps, stats.ap_ris.avg_power,
                               stats.ap_ris.los_fraction, rng)
    ris_ue = sample_tap_matrix(m, stats.ris_ue.taps, stats.ris_ue.avg_power,
                               stats.ris_ue.los_fraction, rng)

    if direct_taps.size > n:
        raise ChannelError(f"Direct channel has {direct_taps.size} taps but only {n} samples")
    direct = np.zeros(n, dtype=complex)
    direct[:direct_taps.size] = direct_taps

    return ChannelRealization(
        direct=direct,
        ap_ris=ap_ris,
        ris_ue=ris_ue,
        cascaded=cascade_matrix(ap_ris, ris_ue, n),
    )


def save_realization(path: str, realization: ChannelRealization) -> None:
    """Dump a realization to a numpy .npz file for replay."""
    np.savez(path, direct=realization.direct, ap_ris=realization.ap_ris,
             ris_ue=realization.ris_ue, cascaded=realization.cascaded)
    logger.debug(f"Channel realization written to {path}")


def load_realization(path: str, num_subcarriers: Optional[int] = None) -> ChannelRealization:
    """Load a realization written by save_realization."""
    with np.load(path) as data:
        realization = ChannelRealization(
            direct=data['direct'], ap_ris=data['ap_ris'],
            ris_ue=data['ris_ue'], cascaded=data['cascaded'],
        )
    if num_subcarriers is not None and realization.num_subcarriers != num_subcarriers:
        raise ChannelError(
            f"Stored realization has {realization.num_subcarriers} samples, expected {num_subcarriers}")
    return realization
