"""
Monte Carlo scenario orchestration.

A Scenario names one scheme and one sweep axis. run_monte_carlo draws the
trials of every axis value, fans them out to a process pool and aggregates
realized rates in trial-index order, so the output depends only on the
configuration, the scenario and its seed.
"""

import csv
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .analysis import Prop1Inputs, complexity_report, harmonic_number, prop1_gain_bound, prop1_rate_bound
from .channel import sample_channel_realization, save_realization
from .config import PRESETS, RECOMMEND_Q_CANDIDATES, RESULT_HEADER, TRIALS_RATE_CURVES
from .config_loader import override_config, system_config_from_dict
from .ofdm import effective_rate
from .schemes import build_scheme, generate_training_set
from .system import SystemConfig, derive_link_statistics
from .utils import SeedPolicy, dbm_to_watts
from .validators.scenario_validator import ScenarioValidator

logger = logging.getLogger(__name__)


class ScenarioError(ValueError):
    """Raised for an invalid scenario or an unknown preset."""


@dataclass(frozen=True)
class Scenario:
    """One scheme swept along one axis."""

    name: str
    scheme: str
    axis: str
    values: Tuple[float, ...]
    trials: int = TRIALS_RATE_CURVES
    seed: int = 1
    noise_enabled: bool = True
    q: int = 10
    coherence_time: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, 'values', tuple(self.values))
        validator = ScenarioValidator()
        if not validator.validate(self):
            raise ScenarioError(f"Invalid scenario '{self.name}': {validator.error_summary()}")

    @property
    def num_slots(self) -> int:
        """Training set size used by a run; a Q sweep runs its largest Q once."""
        if self.scheme == 'random-phase':
            return 1
        if self.axis == 'Q':
            return int(self.values[-1])
        return self.q


@dataclass(frozen=True)
class ResultRow:
    """Aggregated Monte Carlo result of one axis value."""

    scenario: str
    axis: str
    axis_value: float
    mean_rate: float
    stderr: float
    effective_rate: Optional[float]
    bound: Optional[float]
    complexity: int
    trials: int
    seed: int
    wall_clock: float = field(default=0.0, compare=False)

    def as_record(self) -> List[Any]:
        """Field values in RESULT_HEADER order."""
        return [getattr(self, name) for name in RESULT_HEADER]


@dataclass(frozen=True)
class EffectiveRateEntry:
    """One line of the coherence-time recommendation table."""

    scheme: str
    q: int
    training_overhead: int
    mean_rate: float
    effective_rate: float


@dataclass(frozen=True)
class CoherenceRecommendation:
    """Best training set size for a coherence time, with the full comparison."""

    coherence_time: float
    recommended_q: int
    entries: Tuple[EffectiveRateEntry, ...]

    def best_entry(self) -> EffectiveRateEntry:
        return next(e for e in self.entries if e.scheme == 'proposed' and e.q == self.recommended_q)


def _run_trial(task: Tuple[str, SystemConfig, int, bool, int, int, Optional[Tuple[int, ...]]]) -> Tuple[float, ...]:
    """Realized rates of one trial; one entry per requested prefix length."""
    scheme_name, config, num_slots, noise_enabled, seed, trial, prefixes = task
    policy = SeedPolicy(seed)
    realization = sample_channel_realization(derive_link_statistics(config), config,
                                             policy.generator(trial, 'channel'))
    scheme = build_scheme(scheme_name, config, num_slots=num_slots, noise_enabled=noise_enabled)
    outcome = scheme.run(realization, policy, trial)
    if prefixes is None:
        return (outcome.realized_rate,)
    return tuple(outcome.prefix(q).realized_rate for q in prefixes)


def _map_trials(tasks: List[tuple], workers: int) -> List[Tuple[float, ...]]:
    if workers <= 1 or len(tasks) <= 1:
        return [_run_trial(task) for task in tasks]
    chunksize = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        # map yields in submission order
        return list(executor.map(_run_trial, tasks, chunksize=chunksize))


def _mean_and_stderr(rates: np.ndarray) -> Tuple[float, float]:
    mean = float(np.mean(rates))
    if rates.size < 2:
        return mean, 0.0
    return mean, float(np.std(rates, ddof=1) / math.sqrt(rates.size))


def _axis_config(config: SystemConfig, axis: str, value: float) -> SystemConfig:
    if axis == 'M':
        return config.replace(num_elements=int(value))
    if axis == 'P_UL':
        return config.replace(uplink_power=dbm_to_watts(float(value)))
    return config


def _axis_label(axis: str, value: float):
    return int(value) if axis in ('Q', 'M') else float(value)


def _bound(scheme: str, config: SystemConfig, num_slots: int) -> Optional[float]:
    if scheme not in ('proposed', 'random-phase'):
        return None
    return prop1_rate_bound(Prop1Inputs.from_config(config, num_slots))


def run_monte_carlo(scenario: Scenario, config: SystemConfig, workers: int = 1,
                    dump_dir: Optional[str] = None,
                    log: Optional[logging.Logger] = None) -> List[ResultRow]:
    """
    Run every trial of a scenario and aggregate one row per axis value.

    Args:
        scenario: Scheme, axis grid, trial count and seed
        config: Base system configuration; M and P_UL sweeps replace one field
        workers: Worker processes; results do not depend on this
        dump_dir: If set, the first trial's channel of each axis value is saved there

    Returns:
        ResultRow list in axis-value order
    """
    log = log or logger
    if workers < 1:
        raise ScenarioError(f"Worker count must be at least 1, got {workers}")
    log.info(f"Running scenario '{scenario.name}': {scenario.scheme} over {scenario.axis} "
             f"{list(scenario.values)} with {scenario.trials} trials")

    # Q and T sweeps reuse one set of runs; M and P_UL need one set per value
    if scenario.axis in ('Q', 'T'):
        groups = [(scenario.values, config)]
    else:
        groups = [((value,), _axis_config(config, scenario.axis, value)) for value in scenario.values]

    rows = []
    for values, value_config in groups:
        started = time.perf_counter()
        prefixes = tuple(int(v) for v in values) if scenario.axis == 'Q' else None
        tasks = [(scenario.scheme, value_config, scenario.num_slots, scenario.noise_enabled,
                  scenario.seed, trial, prefixes) for trial in range(scenario.trials)]
        rates = np.asarray(_map_trials(tasks, workers), dtype=float)
        elapsed = time.perf_counter() - started

        if dump_dir:
            _dump_first_trial(scenario, values, value_config, dump_dir)

        for column, value in enumerate(values):
            num_slots = int(value) if scenario.axis == 'Q' else scenario.num_slots
            scheme = build_scheme(scenario.scheme, value_config, num_slots=num_slots,
                                  noise_enabled=scenario.noise_enabled)
            mean, stderr = _mean_and_stderr(rates[:, column if prefixes else 0])
            coherence = float(value) if scenario.axis == 'T' else scenario.coherence_time
            rows.append(ResultRow(
                scenario=scenario.name,
                axis=scenario.axis,
                axis_value=_axis_label(scenario.axis, value),
                mean_rate=mean,
                stderr=stderr,
                effective_rate=None if coherence is None else
                effective_rate(mean, scheme.training_overhead, coherence),
                bound=_bound(scenario.scheme, value_config, num_slots),
                complexity=scheme.complexity_total(),
                trials=scenario.trials,
                seed=scenario.seed,
                wall_clock=elapsed / len(values),
            ))
            log.info(f"  {scenario.axis}={rows[-1].axis_value}: mean rate {mean:.4f} "
                     f"(stderr {stderr:.4f}) b/s/Hz")
    return rows


def _dump_first_trial(scenario: Scenario, values: Sequence[float], config: SystemConfig, dump_dir: str):
    os.makedirs(dump_dir, exist_ok=True)
    policy = SeedPolicy(scenario.seed)
    realization = sample_channel_realization(derive_link_statistics(config), config,
                                             policy.generator(0, 'channel'))
    for value in values:
        path = os.path.join(dump_dir, f"{scenario.name}-{scenario.axis}{_axis_label(scenario.axis, value)}.npz")
        save_realization(path, realization)


def max_gain_monte_carlo(config: SystemConfig, qs: Sequence[int], trials: int, seed: int) -> np.ndarray:
    """
    Empirical E[max_q ||h_q||^2] over nested training sets of sizes `qs`.

    Channels and training sets come from the same streams the schemes use, so
    the values line up with noiseless scheme runs of the same seed.
    """
    qs = [int(q) for q in qs]
    if not qs or min(qs) < 1:
        raise ValueError(f"Training set sizes must be positive, got {qs}")
    if trials < 1:
        raise ValueError(f"Need at least one trial, got {trials}")
    policy = SeedPolicy(seed)
    stats = derive_link_statistics(config)
    largest = max(qs)
    totals = np.zeros(len(qs))
    for trial in range(trials):
        realization = sample_channel_realization(stats, config, policy.generator(trial, 'channel'))
        training_set = generate_training_set(largest, config.num_elements,
                                             policy.generator(trial, 'training_set'))
        gains = np.sum(np.abs(realization.composite_many(training_set.vectors)) ** 2, axis=1)
        running = np.maximum.accumulate(gains)
        totals += running[np.asarray(qs) - 1]
    return totals / trials


def best_q_for_coherence(config: SystemConfig, coherence_time: float,
                         candidate_qs: Sequence[int] = RECOMMEND_Q_CANDIDATES,
                         trials: int = TRIALS_RATE_CURVES, seed: int = 1, workers: int = 1,
                         noise_enabled: bool = True) -> CoherenceRecommendation:
    """
    Pick the training set size with the best effective rate for coherence time T.

    Proposed scheme entries use tau = Q; the random-phase baseline uses tau = 1
    and the estimated-CSI AO baseline tau = M + 1.
    """
    if not coherence_time > 0:
        raise ValueError(f"Coherence time must be positive, got {coherence_time}")
    qs = sorted({int(q) for q in candidate_qs})
    if not qs:
        raise ValueError("At least one candidate Q is required")

    proposed = run_monte_carlo(
        Scenario(name='recommend-proposed', scheme='proposed', axis='Q', values=tuple(qs),
                 trials=trials, seed=seed, noise_enabled=noise_enabled), config, workers)
    entries = [EffectiveRateEntry('proposed', int(row.axis_value), int(row.axis_value), row.mean_rate,
                                  effective_rate(row.mean_rate, int(row.axis_value), coherence_time))
               for row in proposed]

    for scheme, overhead in (('random-phase', 1), ('ao-estimated-csi', config.num_elements + 1)):
        row = run_monte_carlo(
            Scenario(name=f'recommend-{scheme}', scheme=scheme, axis='M', values=(config.num_elements,),
                     trials=trials, seed=seed, noise_enabled=noise_enabled), config, workers)[0]
        entries.append(EffectiveRateEntry(scheme, 1 if scheme == 'random-phase' else 0, overhead,
                                          row.mean_rate, effective_rate(row.mean_rate, overhead, coherence_time)))

    candidates = [e for e in entries if e.scheme == 'proposed']
    best = max(range(len(candidates)), key=lambda i: (candidates[i].effective_rate, -i))
    recommended = candidates[best].q
    logger.info(f"Recommended Q = {recommended} for T = {coherence_time:g}")
    return CoherenceRecommendation(coherence_time=float(coherence_time), recommended_q=recommended,
                                   entries=tuple(entries))


def preset_scenarios(name: str, base_config: Dict[str, Any], trials: Optional[int] = None,
                     seed: int = 1) -> List[Tuple[Scenario, SystemConfig]]:
    """
    Scenarios and configurations of a named preset.

    Args:
        name: Preset name
        base_config: Config dictionary (file units) the preset overrides apply to
        trials: Trial count for every scenario; preset or default counts otherwise
        seed: Master seed shared by all scenarios, so they see paired channels
    """
    if name not in PRESETS:
        raise ScenarioError(f"Unknown preset '{name}', expected one of {sorted(PRESETS)}")
    built = []
    for entry in PRESETS[name]:
        config = system_config_from_dict(override_config(base_config, entry.get('overrides', {})))
        built.append((Scenario(
            name=entry['name'],
            scheme=entry['scheme'],
            axis=entry['axis'],
            values=tuple(entry['values']),
            trials=trials or entry.get('trials', TRIALS_RATE_CURVES),
            seed=seed,
            noise_enabled=entry.get('noise', True),
            q=entry.get('q', 10),
        ), config))
    return built


def _format_value(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_results(rows: Sequence[ResultRow], destination: str) -> None:
    """Write rows as CSV under RESULT_HEADER; floats keep full precision."""
    with open(destination, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(RESULT_HEADER)
        for row in rows:
            writer.writerow([_format_value(value) for value in row.as_record()])
    logger.debug(f"Wrote {len(rows)} result rows to {destination}")


def _parse_number(text: str):
    if text == '':
        return None
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_results(source: str) -> List[ResultRow]:
    """Parse a CSV written by emit_results."""
    with open(source, 'r', newline='', encoding='utf-8') as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != RESULT_HEADER:
            raise ValueError(f"Unexpected result header in {source}: {header}")
        rows = []
        for record in reader:
            values = dict(zip(RESULT_HEADER, record))
            rows.append(ResultRow(
                scenario=values['scenario'],
                axis=values['axis'],
                axis_value=_parse_number(values['axis_value']),
                mean_rate=float(values['mean_rate']),
                stderr=float(values['stderr']),
                effective_rate=_parse_number(values['effective_rate']),
                bound=_parse_number(values['bound']),
                complexity=int(values['complexity']),
                trials=int(values['trials']),
                seed=int(values['seed']),
            ))
    return rows


def write_plot_script(rows: Sequence[ResultRow], csv_path: str, script_path: str) -> None:
    """Write a gnuplot script plotting every scenario of a result CSV."""
    scenarios = list(dict.fromkeys(row.scenario for row in rows))
    axes = {row.scenario: row.axis for row in rows}
    use_effective = any(row.axis == 'T' for row in rows)
    column = 6 if use_effective else 4
    data_file = os.path.basename(csv_path)

    lines = [
        "set datafile separator ','",
        "set key outside right",
        "set grid",
        f"set xlabel '{axes[scenarios[0]] if scenarios else ''}'",
        f"set ylabel '{'effective rate' if use_effective else 'rate'} (b/s/Hz)'",
    ]
    if scenarios and all(axes[s] == 'Q' for s in scenarios):
        lines.append("set logscale x")
    plots = [f"'{data_file}' using 3:(strcol(1) eq '{name}' ? ${column} : 1/0) "
             f"with linespoints title '{name}'" for name in scenarios]
    lines.append("plot " + ", \\\n     ".join(plots) if plots else "# no rows")
    with open(script_path, 'w', encoding='utf-8') as f:
        f.write('\n'.join(lines) + '\n')
    logger.debug(f"Wrote plot script {script_path}")


def bound_table(config: SystemConfig, qs: Sequence[int]) -> List[List[Any]]:
    """Rows of BOUND_HEADER: both bound variants over training set sizes."""
    rows = []
    for q in qs:
        inputs = Prop1Inputs.from_config(config, int(q))
        rows.append([
            int(q),
            harmonic_number(int(q)),
            prop1_gain_bound(inputs, 'harmonic'),
            prop1_gain_bound(inputs, 'asymptotic'),
            prop1_rate_bound(inputs, 'harmonic'),
            prop1_rate_bound(inputs, 'asymptotic'),
        ])
    return rows


def complexity_table(config: SystemConfig, element_counts: Sequence[int], qs: Sequence[int]) -> List[List[Any]]:
    """Rows of COMPLEXITY_HEADER over an (M, Q) grid."""
    rows = []
    for m in element_counts:
        for q in qs:
            report = complexity_report(int(m), config.num_subcarriers, int(q),
                                       config.reflected_taps, config.ao_iterations)
            rows.append([int(m), int(q), report.conventional_estimation, report.proposed_estimation,
                         report.ao_optimization, report.proposed_optimization])
    return rows


def write_table(header: Sequence[str], rows: Sequence[Sequence[Any]], destination: str) -> None:
    """Write a plain CSV table with full-precision floats."""
    with open(destination, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_value(value) for value in row])
