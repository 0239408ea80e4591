"""
Frequency-domain transforms and rate metrics for the OFDM link.

DFT convention: unnormalized forward transform (weights e^{-j 2 pi n k / N}),
inverse scaled by 1/N.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np


@dataclass(frozen=True)
class FrequencyResponse:
    """Per-subcarrier gains f_n^H h."""

    gains: np.ndarray

    @property
    def power(self) -> np.ndarray:
        """|f_n^H h|^2 per subcarrier."""
        return np.abs(self.gains) ** 2

    @property
    def num_subcarriers(self) -> int:
        return self.gains.size


@dataclass(frozen=True)
class RateReport:
    """Achievable rate with its per-subcarrier SNR terms."""

    rate: float
    snr: np.ndarray
    cp_penalty: float


def frequency_response(h: np.ndarray) -> FrequencyResponse:
    """Unnormalized DFT of a time-domain channel."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 1:
        raise ValueError(f"Channel must be a vector, got shape {h.shape}")
    return FrequencyResponse(gains=np.fft.fft(h))


def time_response(gains: np.ndarray) -> np.ndarray:
    """Inverse of frequency_response (1/N scaling)."""
    return np.fft.ifft(np.asarray(gains, dtype=complex))


def achievable_rate(freq: FrequencyResponse, powers, noise_power: float,
                    num_subcarriers: int, cp_length: int) -> RateReport:
    """
    Achievable rate in b/s/Hz of one OFDM symbol.

    R = 1/(N + N_CP) * sum_n log2(1 + |f_n^H h|^2 p_n / sigma_w^2)

    Args:
        freq: Frequency response of the channel
        powers: Per-subcarrier powers (array or PowerAllocation)
        noise_power: Noise power sigma_w^2 at the receiver
        num_subcarriers: N
        cp_length: N_CP

    Returns:
        RateReport with the rate, SNR terms and CP penalty N/(N+N_CP)
    """
    p = np.asarray(getattr(powers, 'powers', powers), dtype=float)
    if p.shape != freq.gains.shape:
        raise ValueError(f"Power vector shape {p.shape} does not match {freq.gains.shape}")
    if np.any(p < 0):
        raise ValueError("Subcarrier powers must be nonnegative")
    snr = freq.power * p / noise_power
    rate = float(np.sum(np.log2(1.0 + snr)) / (num_subcarriers + cp_length))
    return RateReport(rate=rate, snr=snr, cp_penalty=num_subcarriers / (num_subcarriers + cp_length))


def effective_rate(rate: float, training_symbols: Union[int, float], coherence_symbols: Union[int, float]) -> float:
    """Rate discounted by the training share, (1 - tau/T) R, clamped at zero."""
    if coherence_symbols <= 0:
        raise ValueError(f"Coherence time must be positive, got {coherence_symbols}")
    if training_symbols < 0:
        raise ValueError(f"Training overhead must be nonnegative, got {training_symbols}")
    return max(0.0, 1.0 - training_symbols / coherence_symbols) * rate
