"""
Water-filling transmit power allocation over OFDM subcarriers.

The water level is found by an exact active-set solve over the sorted
noise-to-gain thresholds, with bisection as a fallback.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)

POWER_TOLERANCE = 1e-9
_BISECTION_STEPS = 200


@dataclass(frozen=True)
class PowerAllocation:
    """Per-subcarrier powers with the water level that produced them."""

    powers: np.ndarray
    cutoff: float
    total_used: float
    feasible: bool = True

    @property
    def num_active(self) -> int:
        return int(np.count_nonzero(self.powers > 0))


def water_fill(gains: np.ndarray, noise_power: float, total_power: float,
               log: Optional[logging.Logger] = None) -> PowerAllocation:
    """
    KKT-optimal allocation p_n = max(c - sigma^2 / g_n, 0) with sum p_n = P.

    Args:
        gains: Nonnegative channel power gains g_n
        noise_power: Noise power sigma^2
        total_power: Power budget P

    Returns:
        PowerAllocation; if every gain is zero the powers are all zero and
        `feasible` is False
    """
    log = log or logger
    g = np.asarray(gains, dtype=float)
    if g.ndim != 1:
        raise ValueError(f"Gains must be a vector, got shape {g.shape}")
    if np.any(g < 0) or not np.all(np.isfinite(g)):
        raise ValueError("Gains must be finite and nonnegative")
    if not total_power > 0:
        raise ValueError(f"Power budget must be positive, got {total_power}")
    if not noise_power > 0:
        raise ValueError(f"Noise power must be positive, got {noise_power}")

    powers = np.zeros_like(g)
    usable = np.flatnonzero(g > 0)
    if usable.size == 0:
        log.warning("All subcarrier gains are zero; no positive-rate allocation exists")
        return PowerAllocation(powers=powers, cutoff=0.0, total_used=0.0, feasible=False)

    thresholds = noise_power / g[usable]
    order = np.argsort(thresholds, kind='stable')
    sorted_thresholds = thresholds[order]
    levels = (total_power + np.cumsum(sorted_thresholds)) / np.arange(1, usable.size + 1)
    num_active = int(np.flatnonzero(levels > sorted_thresholds)[-1]) + 1
    cutoff = float(levels[num_active - 1])

    active = np.maximum(cutoff - thresholds, 0.0)
    # One refinement pass absorbs the cancellation error of c - sigma^2/g
    on = active > 0
    correction = (total_power - active.sum()) / np.count_nonzero(on)
    active[on] += correction
    cutoff += correction

    if abs(active.sum() - total_power) > POWER_TOLERANCE * total_power or np.any(active < 0):
        log.debug("Active-set water level out of tolerance; falling back to bisection")
        cutoff = _bisect_level(thresholds, total_power)
        active = np.maximum(cutoff - thresholds, 0.0)

    powers[usable] = active
    return PowerAllocation(powers=powers, cutoff=cutoff, total_used=float(powers.sum()))


def _bisect_level(thresholds: np.ndarray, total_power: float) -> float:
    """Water level by bisection on sum(max(c - t, 0)) = P."""
    low = float(thresholds.min())
    high = float(thresholds.max()) + total_power
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (low + high)
        if np.maximum(mid - thresholds, 0.0).sum() > total_power:
            high = mid
        else:
            low = mid
    return 0.5 * (low + high)


def water_fill_batch(gains: np.ndarray, noise_power: float, total_power: float) -> np.ndarray:
    """
    Water-filling for many independent instances at once.

    Args:
        gains: Array of shape (..., N) of nonnegative gains
        noise_power: Noise power sigma^2
        total_power: Power budget P of each instance

    Returns:
        Powers with the same shape as `gains`; rows without a positive gain get zeros
    """
    g = np.asarray(gains, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        thresholds = np.where(g > 0, noise_power / np.where(g > 0, g, 1.0), np.inf)
        sorted_thresholds = np.sort(thresholds, axis=-1)
        counts = np.arange(1, g.shape[-1] + 1)
        levels = (total_power + np.cumsum(sorted_thresholds, axis=-1)) / counts
        num_active = np.count_nonzero(levels > sorted_thresholds, axis=-1)
        index = np.maximum(num_active - 1, 0)[..., None]
        cutoff = np.take_along_axis(levels, index, axis=-1)
        cutoff = np.where(num_active[..., None] > 0, cutoff, 0.0)
        powers = np.maximum(cutoff - thresholds, 0.0)
    return np.where(np.isfinite(powers), powers, 0.0)
