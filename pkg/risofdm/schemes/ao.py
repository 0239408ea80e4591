"""
Alternating-optimization baseline.

Element-wise phase updates on separately estimated channels: every sweep fixes
the power allocation, updates one reflection coefficient at a time with the
others held fixed, then re-runs water-filling. An update that lowers the
objective is reverted, so the rate trajectory never decreases.

The rate is not concave in the phases, so a single start can stall in a local
maximum. Without an explicit initial vector, a pool of candidate vectors is
screened by water-filled rate and the best few are refined; the best refined
result is returned.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from ..allocation import PowerAllocation, water_fill, water_fill_batch
from ..analysis import complexity_report
from ..channel import ChannelRealization
from ..config import AO_START_SEED, AO_UPDATE_RULES
from ..estimation import (PilotVector, SeparateEstimate, dft_training_patterns,
                          estimate_separate_channels, ls_estimate, simulate_uplink_training)
from ..system import SystemConfig
from ..utils import SeedPolicy, as_generator
from .base_scheme import BaseScheme, SchemeOutcome, realized_rate
from .proposed import ReflectionVector

# step halvings tried when a closed-form phase overshoots
BACKTRACK_STEPS = 6


@dataclass(frozen=True)
class AoResult:
    """Optimized reflection vector and allocation with the per-iteration rates."""

    phi: np.ndarray
    allocation: PowerAllocation
    rate_trajectory: Tuple[float, ...]
    iterations: int
    reverted_updates: int = 0
    starts: int = 1

    @property
    def rate(self) -> float:
        return self.rate_trajectory[-1]


def _sum_rate(gains: np.ndarray, powers: np.ndarray, noise_power: float, symbols: int) -> np.ndarray:
    return np.sum(np.log2(1.0 + gains * powers / noise_power), axis=0) / symbols


def matched_start(direct_freq: np.ndarray, element_freq: np.ndarray) -> np.ndarray:
    """Per-element phases that co-phase each element with the direct link, summed over subcarriers."""
    alignment = np.sum(np.conj(direct_freq)[:, None] * element_freq, axis=0)
    return np.where(alignment == 0, 1.0 + 0j, np.exp(-1j * np.angle(alignment)))


def screen_starts(direct_freq: np.ndarray, element_freq: np.ndarray, config: SystemConfig,
                  rng: np.random.Generator) -> np.ndarray:
    """
    Rank candidate reflection vectors by their water-filled rate.

    The pool holds the all-ones vector, the matched vector and random vectors up
    to config.ao_candidates entries.

    Returns:
        (K, M) array of the K = min(ao_starts, pool size) best candidates, best first
    """
    num_elements = element_freq.shape[1]
    pool = np.ones((config.ao_candidates, num_elements), dtype=complex)
    if config.ao_candidates > 1:
        pool[1] = matched_start(direct_freq, element_freq)
    if config.ao_candidates > 2:
        pool[2:] = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, (config.ao_candidates - 2, num_elements)))

    gains = np.abs(direct_freq[None, :] + pool @ element_freq.T) ** 2
    powers = water_fill_batch(gains, config.noise_ue, config.downlink_power)
    rates = np.sum(np.log2(1.0 + gains * powers / config.noise_ue), axis=1)
    order = np.argsort(-rates, kind='stable')[:config.ao_starts]
    return pool[order]


def _refine(direct_freq: np.ndarray, element_freq: np.ndarray, phi: np.ndarray, config: SystemConfig,
            iterations: int, update: str, log: logging.Logger) -> AoResult:
    """Element sweeps from one starting vector."""
    noise = config.noise_ue
    symbols = config.num_subcarriers + config.cp_length
    num_elements = element_freq.shape[1]
    phi = phi.copy()
    composite = direct_freq + element_freq @ phi
    grid = np.exp(2j * np.pi * np.arange(config.ao_search_points) / config.ao_search_points)

    allocation = water_fill(np.abs(composite) ** 2, noise, config.downlink_power, log=log)
    trajectory = [float(_sum_rate(np.abs(composite) ** 2, allocation.powers, noise, symbols))]
    reverted = 0

    for sweep in range(iterations):
        p = allocation.powers
        current = float(_sum_rate(np.abs(composite) ** 2, p, noise, symbols))
        for m in range(num_elements):
            b = element_freq[:, m]
            a = composite - b * phi[m]
            if update == 'search':
                candidates = np.concatenate(([phi[m]], grid))
                rates = _sum_rate(np.abs(a[:, None] + b[:, None] * candidates) ** 2, p[:, None], noise, symbols)
                steps = [candidates[int(np.argmax(rates))]]
            else:
                if update == 'gradient':
                    weights = p / (noise + np.abs(composite) ** 2 * p)
                else:
                    weights = p
                alignment = np.sum(weights * b * np.conj(a))
                if alignment == 0:
                    continue
                # shorter arc towards the closed-form phase, halved on overshoot
                delta = np.angle(np.exp(-1j * np.angle(alignment)) * np.conj(phi[m]))
                steps = [phi[m] * np.exp(1j * delta / 2 ** k) for k in range(BACKTRACK_STEPS + 1)]

            for candidate in steps:
                trial_composite = a + b * candidate
                trial_rate = float(_sum_rate(np.abs(trial_composite) ** 2, p, noise, symbols))
                if trial_rate >= current:
                    phi[m] = candidate
                    composite = trial_composite
                    current = trial_rate
                    break
            else:
                reverted += 1

        refreshed = water_fill(np.abs(composite) ** 2, noise, config.downlink_power, log=log)
        refreshed_rate = float(_sum_rate(np.abs(composite) ** 2, refreshed.powers, noise, symbols))
        # keep the previous powers if re-filling loses to rounding
        if refreshed_rate >= current:
            allocation, current = refreshed, refreshed_rate
        trajectory.append(current)
        log.debug(f"AO sweep {sweep + 1}/{iterations}: rate {trajectory[-1]:.4f}")

    return AoResult(phi=phi, allocation=allocation, rate_trajectory=tuple(trajectory),
                    iterations=iterations, reverted_updates=reverted)


def ao_optimize(direct_est: np.ndarray, cascaded_est: np.ndarray, config: SystemConfig,
                iterations: Optional[int] = None, initial_phi: Optional[np.ndarray] = None,
                update: Optional[str] = None, logger: Optional[logging.Logger] = None,
                rng: Union[None, int, np.random.Generator] = None) -> AoResult:
    """
    Maximize the rate on the estimated channel d + R phi.

    Args:
        direct_est: Time-domain direct channel estimate (N,)
        cascaded_est: Time-domain cascaded matrix estimate (N, M)
        config: System parameters
        iterations: Number of sweeps N_i (config.ao_iterations by default)
        initial_phi: Single starting reflection vector; skips the start screening
        update: 'gradient', 'power' or 'search' (config.ao_update by default)
        rng: Source of the random screening candidates (a fixed seed by default)

    Returns:
        AoResult of the best refined start; rate_trajectory[0] is its starting
        rate and entry i the rate after sweep i with re-run water-filling
    """
    log = logger or logging.getLogger(__name__)
    iterations = config.ao_iterations if iterations is None else int(iterations)
    update = update or config.ao_update
    if iterations < 1:
        raise ValueError(f"AO needs at least one iteration, got {iterations}")
    if update not in AO_UPDATE_RULES:
        raise ValueError(f"Unknown AO update rule '{update}', expected one of {AO_UPDATE_RULES}")

    cascaded_est = np.asarray(cascaded_est, dtype=complex)
    if cascaded_est.ndim != 2 or cascaded_est.shape[0] != np.size(direct_est):
        raise ValueError(f"Cascaded estimate shape {cascaded_est.shape} does not match direct length "
                         f"{np.size(direct_est)}")
    num_elements = cascaded_est.shape[1]
    direct_freq = np.fft.fft(np.asarray(direct_est, dtype=complex))
    element_freq = np.fft.fft(cascaded_est, axis=0)

    if initial_phi is not None:
        starts = ReflectionVector(np.asarray(initial_phi, dtype=complex)).phi[None, :]
        if starts.shape[1] != num_elements:
            raise ValueError(f"Initial reflection vector must have {num_elements} entries, got {starts.shape[1]}")
    else:
        starts = screen_starts(direct_freq, element_freq, config,
                               as_generator(AO_START_SEED if rng is None else rng))

    best = None
    reverted = 0
    for index, start in enumerate(starts):
        result = _refine(direct_freq, element_freq, start, config, iterations, update, log)
        reverted += result.reverted_updates
        if best is None or result.rate > best.rate:
            best, best_index = result, index

    if reverted:
        log.debug(f"AO reverted {reverted} non-improving element updates")
    log.debug(f"AO kept start {best_index + 1}/{len(starts)} with rate {best.rate:.4f}")
    return AoResult(phi=best.phi, allocation=best.allocation, rate_trajectory=best.rate_trajectory,
                    iterations=iterations, reverted_updates=reverted, starts=len(starts))


class AoScheme(BaseScheme):
    """AO on perfect channel knowledge or on DFT-trained separate estimates."""

    def __init__(self, config: SystemConfig, perfect_csi: bool, noise_enabled: bool = True,
                 pilot: Optional[PilotVector] = None, logger: Optional[logging.Logger] = None):
        super().__init__(config, pilot=pilot, logger=logger)
        self.perfect_csi = perfect_csi
        self.noise_enabled = noise_enabled

    @property
    def name(self) -> str:
        return 'ao-perfect-csi' if self.perfect_csi else 'ao-estimated-csi'

    def estimate(self, realization: ChannelRealization, rng: Optional[np.random.Generator]) -> SeparateEstimate:
        """Separate estimates of d and R from M + 1 DFT training slots."""
        config = self.config
        patterns = dft_training_patterns(realization.num_elements)
        noise_power = config.noise_ap if self.noise_enabled else 0.0
        composites = realization.direct[:, None] + realization.cascaded @ patterns[1:, :]
        estimates = []
        for slot in range(patterns.shape[1]):
            y = simulate_uplink_training(composites[:, slot], self.pilot, config.uplink_power, noise_power, rng)
            estimates.append(ls_estimate(y, self.pilot, config.uplink_power,
                                         order=config.reflected_taps, slot=slot))
        if config.truncate_separate:
            return estimate_separate_channels(estimates, patterns, direct_taps=config.taps_direct,
                                              reflected_taps=config.reflected_taps)
        return estimate_separate_channels(estimates, patterns)

    def run(self, realization: ChannelRealization, policy: SeedPolicy, trial: int) -> SchemeOutcome:
        if self.perfect_csi:
            direct, cascaded = realization.direct, realization.cascaded
        else:
            rng = policy.generator(trial, 'separate_noise') if self.noise_enabled else None
            separate = self.estimate(realization, rng)
            direct, cascaded = separate.direct, separate.cascaded

        result = ao_optimize(direct, cascaded, self.config, logger=self.logger)
        return SchemeOutcome(
            chosen_index=0,
            phi=result.phi,
            allocation=result.allocation,
            expected_rate=result.rate,
            realized_rate=realized_rate(realization, result.phi, result.allocation, self.config),
            training_overhead=self.training_overhead,
        )

    @property
    def training_overhead(self) -> int:
        return self.config.num_elements + 1

    def complexity_total(self) -> int:
        return complexity_report(self.config.num_elements, self.config.num_subcarriers, 1,
                                 self.config.reflected_taps, self.config.ao_iterations).ao_total
