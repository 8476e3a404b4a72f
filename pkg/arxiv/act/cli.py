"""
Command-line interface: ``act <command> ...``.

Payloads (JSON or CSV) go to standard output, diagnostics to standard error.
Exit codes: 0 success, 2 malformed input or unknown name, 3 sample count
mismatch, 4 fixed-point overflow, 1 anything else.
"""

from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence
from dataclasses import replace
import argparse
import json
import math
import os
import sys

from . import formats, metrics
from .arch_sim.fixedpoint import (FixedPointOverflow, ROUNDING_MODES,
                                  OVERFLOW_MODES)
from .arch_sim.graph import (ARCHITECTURES, build_graph, count_complexity,
                             graph_to_json)
from .arch_sim.schedule import (QuantizationSchedule, default_schedule,
                                schedule_from_json, schedule_to_json)
from .arch_sim.simulator import simulate_detailed
from .linalg import Matrix, RationalMatrix
from .manager import ConfigManager, OperatorManager, TransformRequest
from .sampling import (NonUniformSamples, SamplingGrid, UniformSignal,
                       build_grid, grid_from_json, grid_to_json,
                       interpolate)

import logging
logger = logging.getLogger(__name__)
logger.propagate = False

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_MALFORMED = 2
EXIT_LENGTH = 3
EXIT_OVERFLOW = 4

MATRIX_NAMES = ('W', 'Wplus', 'T', 'Mo', 'D1', 'S', 'Me', 'mean-weights')


class InputError(ValueError):
    """An input file or argument could not be used."""


class LengthMismatch(ValueError):
    """An input holds the wrong number of samples."""


def _read_json(path: str) -> Any:
    try:
        with open(path) as f:
            return json.load(f)
    except (OSError, ValueError) as e:
        raise InputError(f'Could not read JSON from {path}: {e}') from e


def _numbers(values: Any) -> List[float]:
    if not isinstance(values, list):
        raise InputError('Samples must be a JSON array of numbers')
    out = []
    for value in values:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InputError(f'Not a number: {value!r}')
        if not math.isfinite(value):
            raise InputError(f'Samples must be finite, got {value}')
        out.append(float(value))
    return out


def load_samples(path: str, grid: SamplingGrid,
                 from_uniform: bool = False) -> NonUniformSamples:
    """
    Read samples from a JSON file.

    The file holds either an array of numbers or an object with a
    ``samples`` array and, optionally, the ``grid`` it was taken on (which
    must be ``grid``). Non-uniform samples are in ascending grid order; with
    ``from_uniform`` the file holds the ``n`` uniform samples instead and
    they are interpolated.
    """
    payload = _read_json(path)
    if isinstance(payload, dict):
        if 'grid' in payload:
            try:
                embedded = grid_from_json(payload['grid'])
            except ValueError as e:
                raise InputError('Embedded grid is malformed') from e
            if embedded.points != grid.points:
                raise InputError('Embedded grid is not the transform grid')
        if 'samples' not in payload:
            raise InputError('No samples in input')
        payload = payload['samples']
    values = _numbers(payload)
    expected = grid.n if from_uniform else grid.size
    if len(values) != expected:
        raise LengthMismatch(f'Expected {expected} samples, got {len(values)}')
    if from_uniform:
        return interpolate(UniformSignal(values), grid)
    return NonUniformSamples(grid, values)


def cmd_transform(args: argparse.Namespace, config: ConfigManager) -> str:
    """Coefficients of one set of samples as a JSON array."""
    manager = OperatorManager()
    grid = manager.get().grid
    request = TransformRequest.factory(args.mode)
    samples = load_samples(args.input, grid, args.from_uniform)
    coefficients = manager.transform(request, samples)
    values = coefficients.values if coefficients.has_dc \
        else coefficients.ac()
    return formats.dumps(values)


def cmd_matrices(args: argparse.Namespace, config: ConfigManager) -> str:
    """One of the transform's matrices as CSV."""
    operators = OperatorManager().get()
    bundle = operators.factorization
    assert bundle is not None
    matrices: Mapping[str, Callable[[], Matrix]] = {
        'W': lambda: operators.w,
        'Wplus': lambda: operators.w_plus,
        'T': lambda: bundle.t,
        'Mo': lambda: bundle.mo,
        'D1': lambda: bundle.d1,
        'S': lambda: bundle.s,
        'Me': lambda: bundle.me,
        'mean-weights': lambda: Matrix([list(operators.mean_weights)]),
    }
    matrix = matrices[args.name]()
    if isinstance(matrix, RationalMatrix):
        if not args.exact:
            matrix = matrix.to_float()
    elif args.exact:
        raise InputError(f'{args.name} has no exact form')
    return formats.matrix_to_csv(matrix)


def _schedule(args: argparse.Namespace, config: ConfigManager,
              graph: Any) -> QuantizationSchedule:
    if getattr(args, 'schedule', None):
        try:
            schedule = schedule_from_json(_read_json(args.schedule))
        except ValueError as e:
            raise InputError(str(e)) from e
        if args.L is not None:
            schedule = schedule.with_base_l(args.L)
        if not schedule.covers(graph):
            raise InputError(f'Schedule does not cover architecture '
                             f'{graph.arch}')
        return schedule
    schedule = default_schedule(graph, args.L or 16)
    rounding = getattr(args, 'rounding', None) or config.rounding
    overflow = getattr(args, 'overflow', None) or config.overflow
    if rounding:
        schedule = replace(schedule, rounding=rounding)
    if overflow:
        schedule = replace(schedule, overflow=overflow)
    return schedule


def cmd_simulate(args: argparse.Namespace, config: ConfigManager) -> str:
    """Fixed-point outputs, raw and descaled, for one set of samples."""
    graph = build_graph(args.arch)
    schedule = _schedule(args, config, graph)
    grid = OperatorManager().get().grid
    samples = load_samples(args.input, grid, args.from_uniform)
    result = simulate_detailed(graph, samples, schedule, trace=args.trace)
    payload: Dict[str, Any] = {
        'arch': graph.arch,
        'L': schedule.base_l,
        'frac_bits': result.frac_bits,
        'coefficients': result.coefficients.values,
        'outputs': [{'index': port, 'raw': raw, 'scale': result.scales[port]}
                    for port, raw in sorted(result.raw_outputs.items())]
    }
    if result.trace is not None:
        payload['trace'] = {str(node_id): raw
                            for node_id, raw in result.trace.items()}
    return formats.dumps(payload)


def cmd_sweep(args: argparse.Namespace, config: ConfigManager) -> str:
    """Word-length sweep as CSV (or JSON)."""
    cfg = metrics.TrialConfig(
        trials=args.trials if args.trials is not None else config.trials,
        seed=args.seed if args.seed is not None else config.seed,
        word_lengths=tuple(args.L),
        arch=args.arch
    )
    template = None
    if args.schedule:
        try:
            template = schedule_from_json(_read_json(args.schedule))
        except ValueError as e:
            raise InputError(str(e)) from e
        if not template.covers(build_graph(args.arch)):
            raise InputError(f'Schedule does not cover architecture '
                             f'{args.arch}')
    workers = args.workers if args.workers is not None else config.workers
    report = metrics.run_experiment(
        cfg, template, workers=workers,
        rounding=args.rounding or config.rounding,
        overflow=args.overflow or config.overflow
    )
    if args.format == 'json':
        return metrics.report_to_json(report, cfg)
    return metrics.report_to_csv(report)


def cmd_complexity(args: argparse.Namespace, config: ConfigManager) -> str:
    """Multiplier, adder and shift counts with a per-stage breakdown."""
    report = count_complexity(build_graph(args.arch))
    return formats.dumps({'arch': args.arch,
                          'multipliers': report.multipliers,
                          'two_input_adders': report.two_input_adders,
                          'shifts': report.shifts,
                          'breakdown': report.breakdown})


def cmd_grid(args: argparse.Namespace, config: ConfigManager) -> str:
    """The sampling grid as JSON."""
    try:
        grid = build_grid(args.n)
    except ValueError as e:
        raise InputError(str(e)) from e
    return formats.dumps(grid_to_json(grid))


def cmd_schedule(args: argparse.Namespace, config: ConfigManager) -> str:
    """The default schedule of an architecture as JSON."""
    graph = build_graph(args.arch)
    return formats.dumps(schedule_to_json(_schedule(args, config, graph)))


def cmd_graph(args: argparse.Namespace, config: ConfigManager) -> str:
    """An architecture's node list as JSON."""
    return formats.dumps(graph_to_json(build_graph(args.arch)))


def _word_length(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError('word-length must be at least 2')
    return value


def build_parser() -> argparse.ArgumentParser:
    """Describe every command and its flags."""
    parser = argparse.ArgumentParser(
        prog='act', description='Arithmetic cosine transform toolkit.'
    )
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='log to stderr (repeat for more detail)')
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    def arch_flag(sub: argparse.ArgumentParser) -> None:
        sub.add_argument('--arch', choices=ARCHITECTURES, default='I')

    def mode_flags(sub: argparse.ArgumentParser) -> None:
        sub.add_argument('--rounding', choices=ROUNDING_MODES)
        sub.add_argument('--overflow', choices=OVERFLOW_MODES)

    sub = commands.add_parser('transform', help='compute coefficients')
    sub.add_argument('input', help='JSON file of samples')
    sub.add_argument('--mode', choices=TransformRequest.modes(),
                     default='mertens')
    sub.add_argument('--from-uniform', action='store_true',
                     help='input holds uniform samples; interpolate first')
    sub.set_defaults(func=cmd_transform)

    sub = commands.add_parser('matrices', help='dump a matrix as CSV')
    sub.add_argument('name', choices=MATRIX_NAMES)
    sub.add_argument('--exact', action='store_true',
                     help='print rational entries')
    sub.set_defaults(func=cmd_matrices)

    sub = commands.add_parser('simulate', help='run a fixed-point model')
    sub.add_argument('input', help='JSON file of samples')
    arch_flag(sub)
    sub.add_argument('--L', type=_word_length)
    sub.add_argument('--schedule', help='JSON schedule file')
    sub.add_argument('--trace', action='store_true')
    sub.add_argument('--from-uniform', action='store_true')
    mode_flags(sub)
    sub.set_defaults(func=cmd_simulate)

    sub = commands.add_parser('sweep', help='error versus word-length')
    arch_flag(sub)
    sub.add_argument('--L', type=_word_length, nargs='+',
                     default=list(metrics.DEFAULT_WORD_LENGTHS))
    sub.add_argument('--trials', type=int)
    sub.add_argument('--seed', type=int)
    sub.add_argument('--workers', type=int)
    sub.add_argument('--schedule', help='JSON schedule file')
    sub.add_argument('--format', choices=('csv', 'json'), default='csv')
    sub.add_argument('--out', help='write here instead of stdout')
    mode_flags(sub)
    sub.set_defaults(func=cmd_sweep)

    sub = commands.add_parser('complexity', help='count operations')
    arch_flag(sub)
    sub.set_defaults(func=cmd_complexity)

    sub = commands.add_parser('grid', help='dump the sampling grid')
    sub.add_argument('--n', type=int, default=8)
    sub.set_defaults(func=cmd_grid)

    sub = commands.add_parser('schedule', help='dump a default schedule')
    arch_flag(sub)
    sub.add_argument('--L', type=_word_length)
    mode_flags(sub)
    sub.set_defaults(func=cmd_schedule)

    sub = commands.add_parser('graph', help='dump an architecture graph')
    arch_flag(sub)
    sub.set_defaults(func=cmd_graph)
    return parser


def configure_logging(level: int) -> None:
    """Send every ``arxiv.act`` logger to stderr at ``level``."""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('%(name)s %(levelname)s: '
                                           '%(message)s'))
    for name in list(logging.Logger.manager.loggerDict):
        if name == 'arxiv.act' or name.startswith('arxiv.act.'):
            package_logger = logging.getLogger(name)
            package_logger.handlers = [handler]
            package_logger.setLevel(level)


def _level(verbose: int, config: ConfigManager) -> int:
    if verbose >= 2:
        return logging.DEBUG
    if verbose == 1:
        return logging.INFO
    level = logging.getLevelName(config.log_level)
    return level if isinstance(level, int) else logging.WARNING


def _emit(text: str, out: Optional[str]) -> None:
    if not text.endswith('\n'):
        text += '\n'
    if out:
        with open(out, 'w') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the exit code."""
    args = build_parser().parse_args(argv)
    try:
        config = ConfigManager(os.environ)
    except ValueError as e:
        sys.stderr.write(f'act: {e}\n')
        return EXIT_MALFORMED
    configure_logging(_level(args.verbose, config))
    try:
        _emit(args.func(args, config), getattr(args, 'out', None))
    except LengthMismatch as e:
        sys.stderr.write(f'act: {e}\n')
        return EXIT_LENGTH
    except FixedPointOverflow as e:
        sys.stderr.write(f'act: {e}\n')
        return EXIT_OVERFLOW
    except metrics.ExperimentError as e:
        sys.stderr.write(f'act: {e}\n')
        if e.node_id is not None:
            return EXIT_OVERFLOW
        return EXIT_FAILURE
    except ValueError as e:
        sys.stderr.write(f'act: {e}\n')
        return EXIT_MALFORMED
    except Exception as e:
        logger.exception('Command failed')
        sys.stderr.write(f'act: {e}\n')
        return EXIT_FAILURE
    return EXIT_OK
