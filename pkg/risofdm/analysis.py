"""
Closed-form scaling-law machinery, order-statistics oracles and complexity counts.

The expected best composite gain over Q random reflection vectors behaves like
(kappa_d rho_d^2 + M kappa_r rho_r^2) H_Q plus the scattered power, where H_Q is
the Q-th harmonic number (asymptotically log Q + C).

Note: the order-statistics step of the original derivation prints the LoS scale
with squared kappas while the Gaussian tap model and the final bound use plain
kappas. The plain form is the default; `squared_los=True` evaluates the other so
the two can be compared against Monte Carlo.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import EULER_GAMMA
from .system import LinkStatistics, SystemConfig, derive_link_statistics

BOUND_VARIANTS = ('harmonic', 'asymptotic')

# Rows drawn per chunk is this budget divided by Q
_SAMPLE_BUDGET = 2_000_000


def harmonic_number(q: int) -> float:
    """H_Q = sum_{j=1..Q} 1/j."""
    if q < 1:
        raise ValueError(f"Harmonic number needs Q >= 1, got {q}")
    # smallest terms first
    return float(np.sum(1.0 / np.arange(q, 0, -1, dtype=float)))


@dataclass(frozen=True)
class Prop1Inputs:
    """Link statistics and system scalars entering the scaling-law bound."""

    los_direct: float
    los_reflected: float
    power_direct: float
    power_reflected: float
    num_elements: int
    num_slots: int
    num_subcarriers: int
    cp_length: int
    downlink_power: float
    noise_power: float

    def __post_init__(self):
        for name in ('los_direct', 'los_reflected'):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {getattr(self, name)}")
        if self.num_slots < 1:
            raise ValueError(f"Q must be >= 1, got {self.num_slots}")

    @classmethod
    def from_config(cls, config: SystemConfig, num_slots: int,
                    stats: Optional[LinkStatistics] = None) -> 'Prop1Inputs':
        stats = stats or derive_link_statistics(config)
        return cls(
            los_direct=stats.direct.los_fraction,
            los_reflected=stats.reflected.los_fraction,
            power_direct=stats.direct.avg_power,
            power_reflected=stats.reflected.avg_power,
            num_elements=config.num_elements,
            num_slots=num_slots,
            num_subcarriers=config.num_subcarriers,
            cp_length=config.cp_length,
            downlink_power=config.downlink_power,
            noise_power=config.noise_ue,
        )


def prop1_gain_bound(inputs: Prop1Inputs, variant: str = 'harmonic', squared_los: bool = False) -> float:
    """
    Expected maximum composite channel gain E[max_q ||h_q||^2].

    Args:
        inputs: Bound inputs
        variant: 'harmonic' uses the exact finite-Q factor H_Q, 'asymptotic'
            uses log Q + C
        squared_los: Scale the LoS term by squared kappas instead of kappas

    Returns:
        Expected best gain in linear units
    """
    if variant not in BOUND_VARIANTS:
        raise ValueError(f"Unknown bound variant '{variant}', expected one of {BOUND_VARIANTS}")
    k_d, k_r = inputs.los_direct, inputs.los_reflected
    rho_d, rho_r, m = inputs.power_direct, inputs.power_reflected, inputs.num_elements

    los_scale = (k_d ** 2 * rho_d + m * k_r ** 2 * rho_r) if squared_los else (k_d * rho_d + m * k_r * rho_r)
    if variant == 'harmonic':
        order_factor = harmonic_number(inputs.num_slots)
    else:
        order_factor = math.log(inputs.num_slots) + EULER_GAMMA
    scattered = (1.0 - k_d) * rho_d + m * (1.0 - k_r) * rho_r
    return los_scale * order_factor + scattered


def prop1_rate_bound(inputs: Prop1Inputs, variant: str = 'harmonic', squared_los: bool = False) -> float:
    """Ergodic rate bound (N/(N+N_CP)) log2(1 + P_DL G / (N sigma_w^2))."""
    n = inputs.num_subcarriers
    gain = prop1_gain_bound(inputs, variant=variant, squared_los=squared_los)
    snr = inputs.downlink_power * gain / (n * inputs.noise_power)
    return n / (n + inputs.cp_length) * math.log2(1.0 + snr)


def _chunks(trials: int, q: int):
    rows = max(1, _SAMPLE_BUDGET // max(q, 1))
    for start in range(0, trials, rows):
        yield min(rows, trials - start)


def sample_max_direct(q: int, variance: float, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Samples of max over Q draws of |CN(0, variance)|^2."""
    if trials < 1 or q < 1:
        raise ValueError(f"Need trials >= 1 and Q >= 1, got {trials}, {q}")
    out = []
    for rows in _chunks(trials, q):
        z = rng.standard_normal((2, rows, q))
        out.append((variance / 2.0 * (z[0] ** 2 + z[1] ** 2)).max(axis=1))
    return np.concatenate(out)


def sample_max_spacings(q: int, variance: float, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Samples of variance * sum_j gamma_j / (Q - j + 1) with i.i.d. standard exponentials."""
    if trials < 1 or q < 1:
        raise ValueError(f"Need trials >= 1 and Q >= 1, got {trials}, {q}")
    weights = 1.0 / np.arange(q, 0, -1, dtype=float)
    out = []
    for rows in _chunks(trials, q):
        out.append(variance * rng.standard_exponential((rows, q)) @ weights)
    return np.concatenate(out)


def order_statistic_oracle(q: int, variance: float, trials: int, rng: np.random.Generator,
                           method: str = 'direct') -> float:
    """Empirical E[max] of Q exponential draws; equals variance * H_Q in expectation."""
    if method == 'direct':
        samples = sample_max_direct(q, variance, trials, rng)
    elif method == 'spacings':
        samples = sample_max_spacings(q, variance, trials, rng)
    else:
        raise ValueError(f"Unknown sampling method '{method}'")
    return float(samples.mean())


@dataclass(frozen=True)
class ComplexityReport:
    """Real-multiplication counts of estimation and optimization."""

    conventional_estimation: int
    proposed_estimation: int
    ao_optimization: int
    proposed_optimization: int

    @property
    def ao_total(self) -> int:
        return self.conventional_estimation + self.ao_optimization

    @property
    def proposed_total(self) -> int:
        return self.proposed_estimation + self.proposed_optimization


def complexity_report(num_elements: int, num_subcarriers: int, num_slots: int,
                      reflected_taps: int, ao_iterations: int) -> ComplexityReport:
    """
    Analytic multiplication counts.

    conventional estimation 2N(M+1), proposed estimation 2NQ,
    AO N_i M (4 M L_r + N (6 L_r + 2) + 4), proposed optimization Q N (6 L_r + 2).
    """
    for name, value in (('M', num_elements), ('N', num_subcarriers), ('Q', num_slots),
                        ('L_r', reflected_taps), ('N_i', ao_iterations)):
        if value < 1:
            raise ValueError(f"{name} must be positive, got {value}")
    m, n, q, l_r, n_i = num_elements, num_subcarriers, num_slots, reflected_taps, ao_iterations
    return ComplexityReport(
        conventional_estimation=2 * n * (m + 1),
        proposed_estimation=2 * n * q,
        ao_optimization=n_i * m * (4 * m * l_r + n * (6 * l_r + 2) + 4),
        proposed_optimization=q * n * (6 * l_r + 2),
    )
