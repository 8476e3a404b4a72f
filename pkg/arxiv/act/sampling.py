"""
Non-uniform sampling grid, interpolation weights and mean recovery.

The transform reads its input at the instants ``r = 2mn/k - 1/2``. Instants
past ``n - 1/2`` are reflected back into range using the even symmetry of the
cosine series about ``n - 1/2``; what remains is a short, sorted set of
distinct rationals, and that order is the channel order used everywhere
else in the package.
"""

from typing import Any, Dict, List, Mapping, Sequence, Tuple
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import math

import numpy as np

from . import linalg
from .linalg import Matrix, RationalMatrix

import logging
logger = logging.getLogger(__name__)
logger.propagate = False

POLE_TOLERANCE = 1e-12
"""Below this ``|sin(x/2)|`` the Dirichlet kernel returns its limit."""

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SamplingGrid:
    """The sorted set of sampling instants for an ``n``-point transform."""

    n: int
    """Transform length."""

    points: Tuple[Fraction, ...]
    """Distinct instants in ascending order, within ``[-1/2, n - 1/2]``."""

    multiplicity: Dict[Tuple[int, int], int] = field(default_factory=dict)
    """Occurrences of point ``j`` among the instants for ``k``: ``(k, j)``."""

    def __post_init__(self) -> None:
        """Enforce ordering, range and multiplicity totals."""
        points = tuple(Fraction(p) for p in self.points)
        object.__setattr__(self, 'points', points)
        if any(b <= a for a, b in zip(points, points[1:])):
            raise ValueError('Grid points must be distinct and ascending')
        if points and (points[0] < -HALF or points[-1] > self.n - HALF):
            raise ValueError(f'Grid points must lie in [-1/2, {self.n}-1/2]')
        if self.multiplicity:
            totals: Counter = Counter()
            for (k, j), count in self.multiplicity.items():
                if not 0 <= j < len(points):
                    raise ValueError(f'Multiplicity refers to point {j}')
                totals[k] += count
            for k in range(1, self.n):
                if totals[k] != k:
                    raise ValueError(f'Multiplicities for k={k} sum to '
                                     f'{totals[k]}, expected {k}')

    def __hash__(self) -> int:
        return hash((self.n, self.points))

    @property
    def size(self) -> int:
        """Number of distinct sampling instants, ``|R|``."""
        return len(self.points)

    def index(self, point: Any) -> int:
        """Position of ``point`` in channel order."""
        return self.points.index(Fraction(point))


@dataclass(frozen=True, eq=False)
class UniformSignal:
    """An ``n``-point uniformly sampled signal."""

    values: np.ndarray

    def __post_init__(self) -> None:
        """Store a read-only float copy."""
        values = np.array(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError('A signal is a one-dimensional sequence')
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def n(self) -> int:
        """Signal length."""
        return int(self.values.shape[0])

    def mean(self) -> float:
        """Arithmetic mean of the samples."""
        return float(np.mean(self.values))


@dataclass(frozen=True, eq=False)
class NonUniformSamples:
    """Signal values at the instants of a :class:`.SamplingGrid`."""

    grid: SamplingGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        """Store a read-only float copy and check its length."""
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.size,):
            raise ValueError(f'Expected {self.grid.size} samples, got '
                             f'{values.shape}')
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)


def _raw_instants(n: int) -> List[Tuple[int, int, Fraction, Fraction]]:
    """Enumerate ``(k, m, r, folded r)`` for ``k = 1..n-1``."""
    top = n - HALF
    out = []
    for k in range(1, n):
        for m in range(k):
            r = Fraction(2 * m * n, k) - HALF
            folded = (2 * n - 1) - r if r > top else r
            out.append((k, m, r, folded))
    return out


def raw_points(n: int) -> List[Tuple[int, int, Fraction, Fraction]]:
    """
    Get every raw instant with its folded counterpart, for auditing.

    Returns
    -------
    list
        ``(k, m, r, folded)`` tuples in ``k``-major order.

    """
    if n < 2:
        raise ValueError(f'Transform length must be at least 2, got {n}')
    return _raw_instants(n)


def build_grid(n: int = 8) -> SamplingGrid:
    """
    Generate the sampling grid for an ``n``-point transform.

    Parameters
    ----------
    n : int
        Even transform length, at least 2.

    Returns
    -------
    :class:`.SamplingGrid`
        Distinct folded instants in ascending order, with per-``k``
        multiplicities.

    """
    if n < 2:
        raise ValueError(f'Transform length must be at least 2, got {n}')
    if n % 2:
        raise ValueError(f'Transform length must be even, got {n}')
    counts: Counter = Counter()
    for k, _, _, folded in _raw_instants(n):
        counts[(k, folded)] += 1
    points = tuple(sorted({point for _, point in counts}))
    multiplicity = {(k, points.index(point)): count
                    for (k, point), count in sorted(counts.items())}
    logger.debug('Built %s-point grid with %s instants', n, len(points))
    return SamplingGrid(n, points, multiplicity)


def grid_from_points(n: int, points: Sequence[Any]) -> SamplingGrid:
    """Build a grid with no multiplicity table, e.g. for synthetic tests."""
    return SamplingGrid(n, tuple(sorted(Fraction(p) for p in points)))


def multiplicity_matrix(grid: SamplingGrid) -> RationalMatrix:
    """Get the ``(n-1) x |R|`` integer matrix of multiplicities."""
    rows = [[grid.multiplicity.get((k, j), 0) for j in range(grid.size)]
            for k in range(1, grid.n)]
    return RationalMatrix(rows)


def dirichlet(order: int, x: float) -> float:
    """
    Evaluate the Dirichlet kernel ``sin((order + 1/2)x) / sin(x/2)``.

    The kernel is ``2π``-periodic; at multiples of ``2π`` (where the
    denominator vanishes) it takes its limiting value ``2·order + 1``.
    """
    denominator = math.sin(x / 2)
    if abs(denominator) < POLE_TOLERANCE:
        return float(2 * order + 1)
    return math.sin((order + 0.5) * x) / denominator


def interp_weight(n: int, sample_index: int, r: Any) -> float:
    """
    Weight of uniform sample ``sample_index`` in the interpolant at ``r``.

    Parameters
    ----------
    n : int
        Transform length.
    sample_index : int
        Index of the uniform sample, ``0..n-1``.
    r : rational or float
        Sampling instant.

    Returns
    -------
    float

    """
    if not 0 <= sample_index < n:
        raise ValueError(f'Sample index {sample_index} outside 0..{n - 1}')
    r = Fraction(r)
    left = math.pi * float(sample_index + r + 1) / n
    right = math.pi * float(sample_index - r) / n
    return (dirichlet(n - 1, left) + dirichlet(n - 1, right)) / (2 * n)


@lru_cache(maxsize=None)
def _weights(n: int, points: Tuple[Fraction, ...]) -> Matrix:
    return Matrix([[interp_weight(n, i, r) for i in range(n)]
                   for r in points])


def build_w(grid: SamplingGrid) -> Matrix:
    """
    Get the ``|R| x n`` interpolation matrix ``W``.

    Row ``j`` holds the weights that produce the sample at ``grid.points[j]``
    from the uniform samples.
    """
    return _weights(grid.n, grid.points)


def interpolate(v: UniformSignal, grid: SamplingGrid) -> NonUniformSamples:
    """Produce the non-uniform samples ``W·v`` of a uniform signal."""
    if v.n != grid.n:
        raise ValueError(f'Signal has {v.n} samples, grid expects {grid.n}')
    w = build_w(grid)
    column = linalg.matmul(w, Matrix(v.values.reshape(-1, 1)))
    return NonUniformSamples(grid, column.values[:, 0])


@lru_cache(maxsize=None)
def _w_plus(n: int, points: Tuple[Fraction, ...]) -> Matrix:
    return linalg.pseudo_inverse(_weights(n, points))


def _require_rank(grid: SamplingGrid) -> None:
    if grid.size < grid.n:
        raise ValueError(f'The {grid.n}-point grid has only {grid.size} '
                         f'instants; W has no left inverse')


def build_w_plus(grid: SamplingGrid) -> Matrix:
    """
    Get the ``n x |R|`` pseudo-inverse ``W⁺`` of the interpolation matrix.

    Raises
    ------
    ValueError
        If the grid has fewer instants than ``n`` (``n = 2`` and ``n = 4``).

    """
    _require_rank(grid)
    return _w_plus(grid.n, grid.points)


@lru_cache(maxsize=None)
def _mean_weights(n: int, points: Tuple[Fraction, ...]) -> Tuple[float, ...]:
    sums = linalg.column_sums(_w_plus(n, points))
    logger.debug('Mean weights for %s-point grid of %s instants',
                 n, len(points))
    return tuple(total / n for total in sums.row(0))


def mean_weights(grid: SamplingGrid) -> Tuple[float, ...]:
    """
    Get the weights that recover the signal mean from its samples.

    These are the column sums of ``W⁺`` divided by ``n``.

    Raises
    ------
    ValueError
        If the grid has fewer instants than ``n``.
    :class:`.linalg.SingularMatrixError`
        If ``W`` does not have full column rank.

    """
    _require_rank(grid)
    return _mean_weights(grid.n, grid.points)


def mean_from_nonuniform(samples: NonUniformSamples) -> float:
    """
    Recover the mean of the generating uniform signal.

    Parameters
    ----------
    samples : :class:`.NonUniformSamples`

    Returns
    -------
    float
        The dot product of :func:`mean_weights` with the sample values,
        accumulated in channel order.

    """
    weights = mean_weights(samples.grid)
    if len(weights) != samples.values.shape[0]:
        raise ValueError('Sample count does not match the grid')
    total = 0.0
    for weight, value in zip(weights, samples.values.tolist()):
        total += weight * value
    return total


def lebesgue_constant(grid: SamplingGrid) -> float:
    """Largest row ℓ1 norm of ``W``: the worst-case sample amplification."""
    w = build_w(grid).values
    return float(np.max(np.sum(np.abs(w), axis=1)))


def grid_to_json(grid: SamplingGrid) -> Dict[str, Any]:
    """Describe a grid as JSON-ready data."""
    return {
        'n': grid.n,
        'points': [{'numerator': p.numerator, 'denominator': p.denominator}
                   for p in grid.points],
        'multiplicity': [{'k': k, 'index': j, 'count': count}
                         for (k, j), count in sorted(grid.multiplicity.items())]
    }


def grid_from_json(payload: Mapping[str, Any]) -> SamplingGrid:
    """Rebuild a grid from :func:`grid_to_json` output."""
    try:
        points = tuple(Fraction(int(p['numerator']), int(p['denominator']))
                       for p in payload['points'])
        multiplicity = {(int(m['k']), int(m['index'])): int(m['count'])
                        for m in payload.get('multiplicity', [])}
        n = int(payload['n'])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise ValueError('Could not use grid description') from e
    return SamplingGrid(n, points, multiplicity)
