"""
The arithmetic cosine transform in floating-point and rational form.

The transform computes orthonormal DCT-II coefficients of a signal from its
values on the non-uniform grid of :mod:`.sampling`. Per-frequency averages
of the samples are combined with Möbius weights; for signals with non-zero
mean a Mertens-weighted correction is subtracted, with the mean itself
recovered from the same samples. For ``n = 8`` the whole operator factors
into small integer and rational matrices (:func:`build_factorization`).
"""

from typing import List, Optional, Sequence, Tuple
from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from . import linalg
from .linalg import Matrix, RationalMatrix
from .numtheory import mertens, moebius
from .sampling import (SamplingGrid, NonUniformSamples, UniformSignal,
                       build_w_plus, mean_from_nonuniform,
                       multiplicity_matrix)

import logging
logger = logging.getLogger(__name__)
logger.propagate = False

FACTORIZED_LENGTH = 8
"""The factorization is only derived for the 8-point transform."""

# Reference values for the 8-point factors. Built matrices must match these.
REFERENCE_MO = (
    (1, -1, -1, 0, -1, 1, -1),
    (0, 1, 0, -1, 0, -1, 0),
    (0, 0, 1, 0, 0, -1, 0),
    (0, 0, 0, 1, 0, 0, 0),
    (0, 0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 0, 1, 0),
    (0, 0, 0, 0, 0, 0, 1),
)
REFERENCE_D1_DIAGONAL = tuple(Fraction(1, k) for k in range(1, 8))
REFERENCE_S = (
    (1, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (1, 0, 0, 0, 0, 0, 2, 0, 0, 0),
    (1, 0, 0, 0, 2, 0, 0, 0, 0, 1),
    (1, 0, 0, 2, 0, 0, 0, 2, 0, 0),
    (1, 0, 2, 0, 0, 0, 2, 0, 0, 1),
    (1, 2, 0, 0, 0, 2, 0, 0, 2, 0),
)
REFERENCE_ME_DIAGONAL = (Fraction(1, 2), Fraction(1, 4), Fraction(0),
                         Fraction(-1, 4), Fraction(-1, 4), Fraction(-1, 4),
                         Fraction(-1, 4))


class FactorizationMismatch(RuntimeError):
    """A constructed factor differs from its reference values."""

    def __init__(self, name: str) -> None:
        """Name the offending factor."""
        super(FactorizationMismatch, self).__init__(
            f'Constructed {name} does not match its reference values'
        )
        self.name = name


@dataclass(frozen=True, eq=False)
class SpectralCoefficients:
    """Orthonormal DCT-II coefficients ``V_0..V_{n-1}``."""

    values: np.ndarray

    has_dc: bool = True
    """False when ``V_0`` was not computed (it is then held at zero)."""

    def __post_init__(self) -> None:
        """Store a read-only float copy."""
        values = np.array(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError('Coefficients are a one-dimensional sequence')
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def n(self) -> int:
        """Transform length."""
        return int(self.values.shape[0])

    def ac(self) -> np.ndarray:
        """Get ``V_1..V_{n-1}``."""
        return self.values[1:]


@dataclass(frozen=True)
class ActAverages:
    """The per-frequency sample averages ``S_1..S_{n-1}``."""

    values: Tuple[float, ...]

    def average(self, k: int) -> float:
        """Get ``S_k`` (1-based)."""
        if not 1 <= k <= len(self.values):
            raise IndexError(f'No average for k={k}')
        return self.values[k - 1]


@dataclass(frozen=True, eq=False)
class FactorizationBundle:
    """The 8-point operator ``T = 2·Mo·D1·S + Me·W⁺`` and its factors."""

    mo: RationalMatrix
    """Möbius combination, ``(k, j) -> μ(j/k)`` when ``k`` divides ``j``."""

    d1: RationalMatrix
    """Diagonal of ``1/k``."""

    s: RationalMatrix
    """Sample multiplicities per ``k``."""

    me: RationalMatrix
    """Mertens correction, ``7 x 8``: a diagonal times a matrix of ones."""

    w_plus: Matrix
    """Left inverse of the interpolation matrix."""

    t: Matrix
    """The assembled ``7 x 10`` operator."""


def _require_multiplicity(grid: SamplingGrid) -> None:
    if not grid.multiplicity:
        raise ValueError('Grid has no multiplicity table')


def act_averages(samples: NonUniformSamples) -> ActAverages:
    """
    Average the samples belonging to each frequency ``k``.

    ``S_k = (1/k)·Σ_j multiplicity(k, j)·v_j``, accumulated in channel order.

    Parameters
    ----------
    samples : :class:`.NonUniformSamples`

    Returns
    -------
    :class:`.ActAverages`

    """
    grid = samples.grid
    _require_multiplicity(grid)
    values = samples.values.tolist()
    averages = []
    for k in range(1, grid.n):
        total = 0.0
        for j, value in enumerate(values):
            count = grid.multiplicity.get((k, j), 0)
            if count:
                total += count * value
        averages.append(total / k)
    return ActAverages(tuple(averages))


def _moebius_sums(n: int, averages: Sequence) -> List:
    """``Σ_l μ(l)·S_{kl}`` for ``k = 1..n-1`` over any numeric type."""
    sums = []
    for k in range(1, n):
        total = averages[k - 1] * 0
        for l in range(1, (n - 1) // k + 1):
            mu = moebius(l)
            if mu:
                total += mu * averages[k * l - 1]
        sums.append(total)
    return sums


def act_null_mean(samples: NonUniformSamples) -> SpectralCoefficients:
    """
    Compute ``V_1..V_{n-1}`` of a signal assumed to have zero mean.

    ``V_k = √(n/2)·Σ_{l ≤ (n-1)/k} μ(l)·S_{kl}``. The zero-mean assumption is
    not checked; ``V_0`` is reported as zero.

    Parameters
    ----------
    samples : :class:`.NonUniformSamples`

    Returns
    -------
    :class:`.SpectralCoefficients`

    """
    n = samples.grid.n
    averages = act_averages(samples).values
    factor = math.sqrt(n / 2)
    ac = [factor * total for total in _moebius_sums(n, averages)]
    return SpectralCoefficients([0.0] + ac, has_dc=False)


def act_mertens(samples: NonUniformSamples) -> SpectralCoefficients:
    """
    Compute all ``n`` coefficients of a signal with arbitrary mean.

    The mean ``v̄`` comes from :func:`.sampling.mean_from_nonuniform`;
    ``V_k`` is the null-mean value minus ``√(n/2)·v̄·M(⌊(n-1)/k⌋)`` and
    ``V_0 = √n·v̄``.

    Raises
    ------
    ValueError
        If the grid has fewer instants than ``n``, so the mean cannot be
        recovered (``n = 2`` and ``n = 4``).

    """
    n = samples.grid.n
    mean = mean_from_nonuniform(samples)
    null_mean = act_null_mean(samples).values
    factor = math.sqrt(n / 2)
    values = [math.sqrt(n) * mean]
    for k in range(1, n):
        values.append(null_mean[k] - factor * mean * mertens((n - 1) // k))
    return SpectralCoefficients(values)


def act_null_mean_exact(grid: SamplingGrid,
                        values: Sequence) -> Tuple[Fraction, ...]:
    """
    Exact Möbius sums ``Σ μ(l)·S_{kl}`` for rational sample values.

    This is the null-mean transform without its ``√(n/2)`` factor, so it
    stays rational.
    """
    _require_multiplicity(grid)
    if len(values) != grid.size:
        raise ValueError(f'Expected {grid.size} samples, got {len(values)}')
    exact = [Fraction(v) for v in values]
    averages = []
    for k in range(1, grid.n):
        total = sum((grid.multiplicity.get((k, j), 0) * v
                     for j, v in enumerate(exact)), Fraction(0))
        averages.append(total / k)
    return tuple(_moebius_sums(grid.n, averages))


def act_mertens_exact(grid: SamplingGrid, values: Sequence,
                      mean: Fraction) -> Tuple[Fraction, ...]:
    """
    Exact Mertens-corrected sums for rational samples and a rational mean.

    Returns ``Σ μ(l)·S_{kl} - v̄·M(⌊(n-1)/k⌋)`` for ``k = 1..n-1``; multiply
    by ``√(n/2)`` for the coefficients.
    """
    sums = act_null_mean_exact(grid, values)
    mean = Fraction(mean)
    return tuple(total - mean * mertens((grid.n - 1) // k)
                 for k, total in enumerate(sums, start=1))


def _moebius_matrix(n: int) -> RationalMatrix:
    return RationalMatrix([[moebius(j // k) if j % k == 0 else 0
                            for j in range(1, n)] for k in range(1, n)])


def _check(name: str, built: RationalMatrix, reference: Sequence) -> None:
    if built != RationalMatrix(reference):
        raise FactorizationMismatch(name)


def build_factorization(grid: SamplingGrid) -> FactorizationBundle:
    """
    Assemble the factored 8-point operator ``T = 2·Mo·D1·S + Me·W⁺``.

    The factors are built from their closed forms and then checked against
    the reference values in this module. ``Me`` is ``7 x 8`` so that
    ``Me·W⁺`` is ``7 x 10``.

    Parameters
    ----------
    grid : :class:`.SamplingGrid`
        The 8-point grid from :func:`.sampling.build_grid`.

    Returns
    -------
    :class:`.FactorizationBundle`

    Raises
    ------
    ValueError
        If the grid is not for ``n = 8``.
    :class:`.FactorizationMismatch`
        If a built factor differs from its reference.

    """
    n = grid.n
    if n != FACTORIZED_LENGTH:
        raise ValueError(f'Factorization is defined for n=8 only, got {n}')
    _require_multiplicity(grid)
    mo = _moebius_matrix(n)
    d1 = RationalMatrix([[Fraction(1, k) if j == k else 0
                          for j in range(1, n)] for k in range(1, n)])
    s = multiplicity_matrix(grid)
    # √(n/2) = 2 for n = 8, which keeps the diagonal rational.
    diagonal = [Fraction(-2 * mertens((n - 1) // k), n) for k in range(1, n)]
    me = RationalMatrix([[d] * n for d in diagonal])

    _check('Mo', mo, REFERENCE_MO)
    _check('D1', d1, [[d if i == j else 0
                       for j, _ in enumerate(REFERENCE_D1_DIAGONAL)]
                      for i, d in enumerate(REFERENCE_D1_DIAGONAL)])
    _check('S', s, REFERENCE_S)
    _check('Me', me, [[d] * n for d in REFERENCE_ME_DIAGONAL])

    w_plus = build_w_plus(grid)
    exact_part = linalg.scale(linalg.matmul(linalg.matmul(mo, d1), s), 2)
    t = linalg.add(exact_part.to_float(), linalg.matmul(me, w_plus))
    logger.debug('Built %s x %s factorized operator', t.rows, t.cols)
    return FactorizationBundle(mo, d1, s, me, w_plus, t)


def transform_via_t(samples: NonUniformSamples,
                    bundle: FactorizationBundle) -> SpectralCoefficients:
    """Compute ``V_1..V_7`` as ``T·v_r``; ``V_0`` is reported as zero."""
    if samples.grid.n != FACTORIZED_LENGTH:
        raise ValueError('The factorized operator is for n=8 only')
    column = linalg.matmul(bundle.t,
                           Matrix(samples.values.reshape(-1, 1)))
    return SpectralCoefficients([0.0] + column.values[:, 0].tolist(),
                                has_dc=False)


def dct2_matrix(n: int) -> Matrix:
    """The orthonormal ``n``-point DCT-II matrix, by direct evaluation."""
    k = np.arange(n).reshape(-1, 1)
    i = np.arange(n).reshape(1, -1)
    alpha = np.where(k == 0, math.sqrt(1 / n), math.sqrt(2 / n))
    return Matrix(alpha * np.cos(np.pi * (2 * i + 1) * k / (2 * n)))


def dct2_oracle(v: UniformSignal,
                matrix: Optional[Matrix] = None) -> SpectralCoefficients:
    """
    Orthonormal DCT-II of a uniform signal by direct summation.

    ``V_k = α_k·Σ_i v_i·cos(π(2i+1)k/2n)`` with ``α_0 = √(1/n)`` and
    ``α_k = √(2/n)``. Shares no code with the transform paths above.

    Parameters
    ----------
    v : :class:`.sampling.UniformSignal`
    matrix : :class:`.Matrix`, optional
        A precomputed :func:`dct2_matrix` for ``v.n``.

    """
    if matrix is None:
        matrix = dct2_matrix(v.n)
    column = linalg.matmul(matrix, Matrix(v.values.reshape(-1, 1)))
    return SpectralCoefficients(column.values[:, 0])
