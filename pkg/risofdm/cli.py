"""
Command-line interface.

Subcommands:
    simulate     one scheme swept along one axis
    sweep        several schemes on paired channels, or a named preset
    analyze      closed-form bound and complexity tables, no Monte Carlo
    recommend-q  best training set size for a coherence time
"""

import argparse
import logging
import sys
from typing import List, Optional, Sequence

from . import __version__
from .channel import ChannelError
from .config import (BOUND_HEADER, COMPLEXITY_HEADER, COMPLEXITY_M_VALUES, COMPLEXITY_Q_VALUES, PRESETS,
                     BOUND_Q_VALUES, RECOMMEND_Q_CANDIDATES, SCHEMES, AXES)
from .config_loader import ConfigLoader
from .estimation import EstimationError
from .harness import (Scenario, ScenarioError, best_q_for_coherence, bound_table, complexity_table,
                      emit_results, preset_scenarios, run_monte_carlo, write_plot_script, write_table)
from .system import ConfigError
from .utils import setup_logging

logger = logging.getLogger(__name__)


def _parse_values(raw: Optional[Sequence[str]]) -> List[float]:
    """Accept '--values 1 2 5' as well as '--values 1,2,5'."""
    values = []
    for item in raw or []:
        for part in item.split(','):
            if part.strip():
                values.append(float(part))
    return values


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, help='Path to a JSON or YAML configuration file')
    common.add_argument('--set', dest='overrides', action='append', default=[], metavar='SECTION.KEY=VALUE',
                        help='Override one configuration entry (repeatable)')
    common.add_argument('--seed', type=int, help='Master seed (default: simulation.seed)')
    common.add_argument('--trials', type=int, help='Monte Carlo trials per axis value')
    common.add_argument('--workers', type=int, help='Worker processes (default: simulation.workers)')
    common.add_argument('--out', type=str, help='Output CSV path')
    common.add_argument('--log-level', default='INFO', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Logging level')
    common.add_argument('--log-file', type=str, help='Also write the log to this file')
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with all subcommands."""
    common = _common_arguments()
    parser = argparse.ArgumentParser(prog='risofdm', description='RIS-assisted OFDM link simulator')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', required=True)

    simulate = subparsers.add_parser('simulate', parents=[common], help='Run one scenario')
    simulate.add_argument('--scheme', choices=SCHEMES, default='proposed', help='Scheme to run')
    simulate.add_argument('--axis', choices=AXES, default='Q', help='Sweep axis')
    simulate.add_argument('--values', nargs='+', help='Axis values (P_UL in dBm)')
    simulate.add_argument('--name', type=str, help='Scenario id written to the CSV')
    simulate.add_argument('--q', type=int, default=10, help='Training set size when Q is not swept')
    simulate.add_argument('--coherence', type=float, help='Coherence time T for effective rates')
    simulate.add_argument('--no-noise', action='store_true', help='Noiseless channel estimation')
    simulate.add_argument('--dump-channels', type=str, metavar='DIR',
                          help='Save the first trial channel of each axis value to DIR')
    simulate.add_argument('--plot-script', type=str, help='Also write a gnuplot script')

    sweep = subparsers.add_parser('sweep', parents=[common], help='Run a scenario grid')
    sweep.add_argument('--preset', choices=sorted(PRESETS), help='Named scenario grid')
    sweep.add_argument('--scheme', dest='schemes', nargs='+', choices=SCHEMES,
                       help='Schemes to compare on paired channels')
    sweep.add_argument('--axis', choices=AXES, default='M', help='Sweep axis')
    sweep.add_argument('--values', nargs='+', help='Axis values (P_UL in dBm)')
    sweep.add_argument('--q', type=int, default=10, help='Training set size when Q is not swept')
    sweep.add_argument('--coherence', type=float, help='Coherence time T for effective rates')
    sweep.add_argument('--no-noise', action='store_true', help='Noiseless channel estimation')
    sweep.add_argument('--plot-script', type=str, help='Also write a gnuplot script')

    analyze = subparsers.add_parser('analyze', parents=[common], help='Closed-form tables')
    analyze.add_argument('--values', nargs='+', help=f'Training set sizes (default {BOUND_Q_VALUES})')
    analyze.add_argument('--complexity-out', type=str, default='complexity.csv',
                         help='Complexity table path')

    recommend = subparsers.add_parser('recommend-q', parents=[common], help='Best Q for a coherence time')
    recommend.add_argument('--coherence', type=float, required=True, help='Coherence time T in symbols')
    recommend.add_argument('--values', nargs='+', help=f'Candidate Q values (default {RECOMMEND_Q_CANDIDATES})')
    recommend.add_argument('--no-noise', action='store_true', help='Noiseless channel estimation')

    return parser


class Session:
    """Resolved configuration and run settings of one invocation."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.loader = ConfigLoader(args.config)
        self.loader.load_config()
        self.loader.apply_overrides(args.overrides)
        self.config_dict = self.loader.load_config()
        self.config = self.loader.build_system_config()
        simulation = self.config_dict['simulation']
        self.seed = args.seed if args.seed is not None else int(simulation['seed'])
        self.trials = args.trials if args.trials is not None else int(simulation['trials'])
        self.workers = args.workers if args.workers is not None else int(simulation['workers'])
        if self.trials < 1:
            raise ScenarioError(f"Trial count must be at least 1, got {self.trials}")


def _finish_results(rows, args, default_out: str) -> None:
    out = args.out or default_out
    emit_results(rows, out)
    print(f"✓ Wrote {len(rows)} rows to {out}")
    if getattr(args, 'plot_script', None):
        write_plot_script(rows, out, args.plot_script)
        print(f"✓ Wrote plot script {args.plot_script}")


def cmd_simulate(args: argparse.Namespace) -> int:
    session = Session(args)
    values = _parse_values(args.values)
    if not values:
        if args.axis not in ('Q', 'M'):
            raise ScenarioError(f"--values is required when sweeping {args.axis}")
        values = [args.q if args.axis == 'Q' else session.config.num_elements]
    scenario = Scenario(
        name=args.name or f'{args.scheme}-{args.axis}',
        scheme=args.scheme,
        axis=args.axis,
        values=tuple(values),
        trials=session.trials,
        seed=session.seed,
        noise_enabled=not args.no_noise,
        q=args.q,
        coherence_time=args.coherence,
    )
    rows = run_monte_carlo(scenario, session.config, workers=session.workers, dump_dir=args.dump_channels)
    _finish_results(rows, args, 'results.csv')
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    session = Session(args)
    if args.preset:
        scenarios = preset_scenarios(args.preset, session.config_dict, trials=args.trials, seed=session.seed)
    elif args.schemes:
        values = _parse_values(args.values)
        if not values:
            raise ScenarioError("sweep needs --values when no preset is given")
        scenarios = [(Scenario(name=f'{scheme}-{args.axis}', scheme=scheme, axis=args.axis,
                               values=tuple(values), trials=session.trials, seed=session.seed,
                               noise_enabled=not args.no_noise, q=args.q, coherence_time=args.coherence),
                      session.config) for scheme in args.schemes]
    else:
        raise ScenarioError("sweep needs either --preset or --scheme")

    rows = []
    for scenario, config in scenarios:
        rows.extend(run_monte_carlo(scenario, config, workers=session.workers))
    _finish_results(rows, args, f'{args.preset or "sweep"}.csv')
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    session = Session(args)
    qs = [int(q) for q in _parse_values(args.values)] or BOUND_Q_VALUES
    out = args.out or 'bounds.csv'
    write_table(BOUND_HEADER, bound_table(session.config, qs), out)
    print(f"✓ Wrote bound table to {out}")
    write_table(COMPLEXITY_HEADER, complexity_table(session.config, COMPLEXITY_M_VALUES, COMPLEXITY_Q_VALUES),
                args.complexity_out)
    print(f"✓ Wrote complexity table to {args.complexity_out}")
    return 0


def cmd_recommend_q(args: argparse.Namespace) -> int:
    session = Session(args)
    candidates = [int(q) for q in _parse_values(args.values)] or RECOMMEND_Q_CANDIDATES
    recommendation = best_q_for_coherence(session.config, args.coherence, candidates,
                                          trials=session.trials, seed=session.seed,
                                          workers=session.workers, noise_enabled=not args.no_noise)
    print(f"T = {args.coherence:g} symbols")
    print(f"{'scheme':<18}{'Q':>5}{'tau':>7}{'rate':>12}{'effective':>12}")
    for entry in recommendation.entries:
        print(f"{entry.scheme:<18}{entry.q:>5}{entry.training_overhead:>7}"
              f"{entry.mean_rate:>12.4f}{entry.effective_rate:>12.4f}")
    print(f"Recommended Q: {recommendation.recommended_q}")
    if args.out:
        write_table(['scheme', 'q', 'training_overhead', 'mean_rate', 'effective_rate'],
                    [[e.scheme, e.q, e.training_overhead, e.mean_rate, e.effective_rate]
                     for e in recommendation.entries], args.out)
        print(f"✓ Wrote table to {args.out}")
    return 0


COMMANDS = {
    'simulate': cmd_simulate,
    'sweep': cmd_sweep,
    'analyze': cmd_analyze,
    'recommend-q': cmd_recommend_q,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point; returns the process exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        setup_logging(getattr(logging, args.log_level), args.log_file)
        return COMMANDS[args.command](args)
    except (ConfigError, ScenarioError, ChannelError, EstimationError, ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return 1


if __name__ == '__main__':
    sys.exit(main())
