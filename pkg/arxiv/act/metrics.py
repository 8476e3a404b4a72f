"""
Error metrics and the randomized word-length experiment.

The experiment draws uniform random 8-point signals, interpolates them onto
the sampling grid in double precision, runs a fixed-point architecture on
every trial at every word-length, and compares the descaled outputs with a
direct DCT-II.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple, Union
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
import math

import numpy as np

from . import formats, linalg
from .arch_sim.fixedpoint import FixedPointOverflow
from .arch_sim.graph import ARCHITECTURES, ArchitectureGraph, build_graph
from .arch_sim.schedule import QuantizationSchedule, default_schedule
from .arch_sim.simulator import Simulator
from .core import SpectralCoefficients, dct2_matrix
from .linalg import Matrix
from .sampling import build_grid, build_w

import logging
logger = logging.getLogger(__name__)
logger.propagate = False

PSNR_CAP = 400.0
"""Reported in place of infinity when there is no error at all."""

PEAK = 1.0
"""PSNR peak: the input amplitude bound."""

REFERENCE_TOLERANCE = 1e-12
"""Below this reference magnitude the percentage error is zero."""

DEFAULT_WORD_LENGTHS = (8, 12, 16, 20, 24, 28, 32)

CSV_HEADER = 'L,arch,avg_pct_error,psnr_db,trials,seed'

Coefficients = Union[SpectralCoefficients, Sequence[float], np.ndarray]


class ExperimentError(RuntimeError):
    """A trial failed at a particular word-length."""

    def __init__(self, trial: int, word_length: int,
                 node_id: Optional[int] = None) -> None:
        """Record where the experiment stopped and the overflowing node."""
        where = f', overflow at node {node_id}' if node_id is not None else ''
        super(ExperimentError, self).__init__(
            f'Trial {trial} failed at L={word_length}{where}'
        )
        self.trial = trial
        self.word_length = word_length
        self.node_id = node_id

    def __reduce__(self) -> Tuple:
        return type(self), (self.trial, self.word_length, self.node_id)


@dataclass(frozen=True)
class TrialConfig:
    """Parameters of a word-length sweep."""

    trials: int = 10000
    seed: int = 0
    input_range: Tuple[float, float] = (-1.0, 1.0)
    word_lengths: Tuple[int, ...] = DEFAULT_WORD_LENGTHS
    arch: str = 'I'

    def __post_init__(self) -> None:
        """Check counts, ranges and the architecture name."""
        if self.trials < 1:
            raise ValueError(f'Need at least one trial, got {self.trials}')
        if not self.word_lengths:
            raise ValueError('Need at least one word-length')
        low, high = self.input_range
        if not low < high:
            raise ValueError(f'Empty input range {self.input_range}')
        if self.arch not in ARCHITECTURES:
            raise ValueError(f'No such architecture: {self.arch}')
        object.__setattr__(self, 'word_lengths',
                           tuple(int(l) for l in self.word_lengths))


@dataclass(frozen=True)
class LevelMetrics:
    """Aggregate error at one word-length."""

    avg_pct_error: float
    psnr_db: float


@dataclass
class MetricsReport:
    """Results of :func:`run_experiment`, one entry per word-length."""

    arch: str
    trials: int
    seed: int
    per_l: Dict[int, LevelMetrics] = field(default_factory=dict)


def _as_array(values: Coefficients) -> np.ndarray:
    if isinstance(values, SpectralCoefficients):
        return values.values
    return np.asarray(values, dtype=float)


def pct_error(estimate: Coefficients, reference: Coefficients) -> float:
    """
    Signed mean error as a percentage of the largest reference magnitude.

    Parameters
    ----------
    estimate : :class:`.SpectralCoefficients` or sequence
    reference : :class:`.SpectralCoefficients` or sequence

    Returns
    -------
    float
        ``100·mean_k (V̂_k - V_k) / max_j |V_j|``; zero when the reference
        is (numerically) zero.

    """
    estimate, reference = _as_array(estimate), _as_array(reference)
    if estimate.shape != reference.shape:
        raise ValueError(f'Cannot compare {estimate.shape} with '
                         f'{reference.shape}')
    largest = float(np.max(np.abs(reference))) if reference.size else 0.0
    if largest < REFERENCE_TOLERANCE:
        return 0.0
    return 100 * float(np.mean(estimate - reference)) / largest


def psnr_from_mse(mse: float, peak: float = PEAK) -> float:
    """``10·log10(peak²/mse)``, capped at :data:`PSNR_CAP`."""
    if peak <= 0:
        raise ValueError(f'Peak must be positive, got {peak}')
    if mse <= 0:
        return PSNR_CAP
    return min(PSNR_CAP, 10 * math.log10(peak ** 2 / mse))


def psnr(estimate: Coefficients, reference: Coefficients,
         peak: float = PEAK) -> float:
    """PSNR in decibels over all entries of ``estimate``."""
    estimate, reference = _as_array(estimate), _as_array(reference)
    if estimate.shape != reference.shape:
        raise ValueError(f'Cannot compare {estimate.shape} with '
                         f'{reference.shape}')
    return psnr_from_mse(float(np.mean((estimate - reference) ** 2)), peak)


def trial_signals(cfg: TrialConfig, n: int = 8) -> np.ndarray:
    """
    Draw the uniform signals for every trial.

    Trial ``t`` uses its own PCG64 stream seeded with ``(seed, t)``, so any
    trial can be regenerated alone and chunked evaluation sees the same
    numbers as a serial run.

    Returns
    -------
    :class:`numpy.ndarray`
        ``trials x n``.

    """
    low, high = cfg.input_range
    signals = np.empty((cfg.trials, n))
    for trial in range(cfg.trials):
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, trial]))
        signals[trial] = rng.uniform(low, high, n)
    return signals


def _evaluate_chunk(graph: ArchitectureGraph, schedule: QuantizationSchedule,
                    samples: np.ndarray, references: np.ndarray,
                    first_trial: int) -> Tuple[List[float], List[float]]:
    """Per-trial squared error sums and percentage errors for a chunk."""
    simulator = Simulator(graph, schedule)
    squared, percentages = [], []
    for offset, (row, reference) in enumerate(zip(samples.tolist(),
                                                  references)):
        try:
            estimate = simulator.run(row).coefficients.values
        except FixedPointOverflow as e:
            raise ExperimentError(first_trial + offset, schedule.base_l,
                                  e.node_id) from e
        error = estimate - reference
        squared.append(float(np.sum(error * error)))
        percentages.append(pct_error(estimate, reference))
    return squared, percentages


def _chunks(trials: int, workers: int) -> List[Tuple[int, int]]:
    size = -(-trials // workers)
    return [(start, min(start + size, trials))
            for start in range(0, trials, size)]


def _evaluate(graph: ArchitectureGraph, schedule: QuantizationSchedule,
              samples: np.ndarray, references: np.ndarray,
              workers: int) -> Tuple[np.ndarray, np.ndarray]:
    trials = samples.shape[0]
    if workers <= 1:
        squared, percentages = _evaluate_chunk(graph, schedule, samples,
                                               references, 0)
        return np.array(squared), np.array(percentages)
    bounds = _chunks(trials, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_evaluate_chunk, graph, schedule,
                               samples[start:stop], references[start:stop],
                               start)
                   for start, stop in bounds]
        results = [future.result() for future in futures]
    squared = [value for chunk, _ in results for value in chunk]
    percentages = [value for _, chunk in results for value in chunk]
    return np.array(squared), np.array(percentages)


def run_experiment(cfg: TrialConfig,
                   schedule_template: Optional[QuantizationSchedule] = None,
                   workers: int = 1, rounding: Optional[str] = None,
                   overflow: Optional[str] = None) -> MetricsReport:
    """
    Sweep the word-length for one architecture.

    Parameters
    ----------
    cfg : :class:`.TrialConfig`
    schedule_template : :class:`.QuantizationSchedule`, optional
        Headroom and modes to use at every word-length (its ``base_l`` is
        replaced). By default each word-length gets
        :func:`.arch_sim.schedule.default_schedule`.
    workers : int
        Processes to spread trials over. Results do not depend on it.
    rounding : str, optional
        Replaces the rounding mode of the default schedules.
    overflow : str, optional
        Replaces the overflow policy of the default schedules.

    Returns
    -------
    :class:`.MetricsReport`

    Raises
    ------
    :class:`.ExperimentError`
        If a trial overflows; chained to the
        :class:`.arch_sim.fixedpoint.FixedPointOverflow`.

    """
    grid = build_grid()
    graph = build_graph(cfg.arch, grid)
    signals = trial_signals(cfg, grid.n)
    if cfg.arch == 'I':
        # The null-mean architecture only handles zero-mean signals.
        signals = signals - np.mean(signals, axis=1, keepdims=True)
    uniform = Matrix(signals)
    samples = linalg.matmul(uniform, linalg.transpose(build_w(grid))).values
    references = linalg.matmul(uniform,
                               linalg.transpose(dct2_matrix(grid.n))).values
    if cfg.arch == 'I':
        references = references.copy()
        references[:, 0] = 0.0

    report = MetricsReport(cfg.arch, cfg.trials, cfg.seed)
    for word_length in cfg.word_lengths:
        if schedule_template is None:
            schedule = default_schedule(graph, word_length)
            if rounding:
                schedule = replace(schedule, rounding=rounding)
            if overflow:
                schedule = replace(schedule, overflow=overflow)
        else:
            schedule = schedule_template.with_base_l(word_length)
        squared, percentages = _evaluate(graph, schedule, samples,
                                         references, workers)
        mse = float(np.sum(squared)) / (cfg.trials * grid.n)
        report.per_l[word_length] = LevelMetrics(
            avg_pct_error=float(np.mean(percentages)),
            psnr_db=psnr_from_mse(mse)
        )
        logger.debug('Arch %s at L=%s: %s', cfg.arch, word_length,
                     report.per_l[word_length])
    return report


def psnr_slope(report: MetricsReport) -> float:
    """Least-squares slope of PSNR against word-length, in dB per bit."""
    if len(report.per_l) < 2:
        raise ValueError('Need at least two word-lengths for a slope')
    lengths = sorted(report.per_l)
    values = [report.per_l[l].psnr_db for l in lengths]
    slope, _ = np.polyfit(np.array(lengths, dtype=float), np.array(values), 1)
    return float(slope)


def report_rows(report: MetricsReport) -> List[Dict[str, Any]]:
    """One record per word-length, in ascending order."""
    return [{'L': l, 'arch': report.arch,
             'avg_pct_error': report.per_l[l].avg_pct_error,
             'psnr_db': report.per_l[l].psnr_db,
             'trials': report.trials, 'seed': report.seed}
            for l in sorted(report.per_l)]


def report_to_csv(report: MetricsReport) -> str:
    """CSV with one row per word-length, under :data:`CSV_HEADER`."""
    header = CSV_HEADER.split(',')
    return formats.rows_to_csv(header, ([row[column] for column in header]
                                        for row in report_rows(report)))


def report_to_json(report: MetricsReport, cfg: TrialConfig) -> str:
    """JSON report echoing the configuration it was produced with."""
    return formats.dumps({
        'config': {'arch': cfg.arch, 'trials': cfg.trials, 'seed': cfg.seed,
                   'input_range': list(cfg.input_range),
                   'word_lengths': list(cfg.word_lengths)},
        'results': report_rows(report)
    })
