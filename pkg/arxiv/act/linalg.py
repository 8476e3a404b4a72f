"""
Small dense matrix arithmetic in floating-point and exact-rational form.

The matrices involved in the transform are tiny (at most a few dozen rows),
so everything here favours reproducibility over speed: every reduction runs
left-to-right over its index, which keeps results bit-identical from run to
run. :class:`.Matrix` holds doubles; :class:`.RationalMatrix` holds
:class:`fractions.Fraction` entries with arbitrary-precision numerators and
denominators. Both wrap read-only :class:`numpy.ndarray` storage.
"""

from typing import Any, Iterable, Tuple, Type, TypeVar
from fractions import Fraction
import warnings

import numpy as np

import logging
logger = logging.getLogger(__name__)
logger.propagate = False

PIVOT_TOLERANCE = 1e-12
"""Smallest pivot magnitude accepted during floating-point elimination."""

PIVOT_RATIO_WARNING = 1e8
"""Largest-to-smallest pivot ratio above which a warning is emitted."""


class SingularMatrixError(ArithmeticError):
    """Raised when elimination meets a (numerically) zero pivot."""

    def __init__(self, pivot_index: int) -> None:
        """Record the elimination step that failed."""
        super(SingularMatrixError, self).__init__(
            f'Matrix is singular: no usable pivot in column {pivot_index}'
        )
        self.pivot_index = pivot_index


class IllConditionedWarning(RuntimeWarning):
    """Pivot magnitudes span more than :data:`PIVOT_RATIO_WARNING`."""


_formatwarning = warnings.formatwarning


# Monkey-patching `warnings.formatwarning`, for our own category only.
def formatwarning(message: Any, category: Type[Warning], filepath: str,
                  lineno: int, line: Any = None) -> str:
    """Make the conditioning warnings a bit prettier."""
    if issubclass(category, IllConditionedWarning):
        return f'arxiv.act.linalg: {message}\n'
    return _formatwarning(message, category, filepath, lineno, line)


warnings.formatwarning = formatwarning


M = TypeVar('M', bound='Matrix')


class Matrix:
    """An immutable, row-major matrix of double-precision reals."""

    dtype: Any = float

    def __init__(self, values: Any) -> None:
        """
        Initialize from anything :func:`numpy.array` accepts.

        Parameters
        ----------
        values : array-like
            Two-dimensional data. Entries are copied and coerced.

        """
        array = self._coerce(values)
        if array.ndim != 2:
            raise ValueError(f'Expected a 2-D matrix, got {array.ndim}-D')
        array.setflags(write=False)
        self._values = array

    @classmethod
    def _coerce(cls, values: Any) -> np.ndarray:
        return np.array(values, dtype=float)

    @classmethod
    def from_rows(cls: Type[M], rows: Iterable[Iterable[Any]]) -> M:
        """Build a matrix from a sequence of rows."""
        return cls([list(row) for row in rows])

    @property
    def values(self) -> np.ndarray:
        """Read-only view of the underlying array."""
        return self._values

    @property
    def rows(self) -> int:
        """Number of rows."""
        return int(self._values.shape[0])

    @property
    def cols(self) -> int:
        """Number of columns."""
        return int(self._values.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        """``(rows, cols)``."""
        return self.rows, self.cols

    @property
    def entries(self) -> Tuple[Any, ...]:
        """Entries in row-major order."""
        return tuple(self._values.ravel().tolist())

    def row(self, i: int) -> Tuple[Any, ...]:
        """Get row ``i`` as a tuple."""
        return tuple(self._values[i].tolist())

    def __getitem__(self, index: Tuple[int, int]) -> Any:
        return self._values[index]

    def __repr__(self) -> str:
        return f'{type(self).__name__}({self._values.tolist()!r})'


class RationalMatrix(Matrix):
    """An immutable matrix of exact rationals in lowest terms."""

    dtype = object

    @classmethod
    def _coerce(cls, values: Any) -> np.ndarray:
        raw = np.array(values, dtype=object)
        if raw.ndim != 2:
            return raw
        out = np.empty(raw.shape, dtype=object)
        for index, entry in np.ndenumerate(raw):
            if isinstance(entry, float) and not np.isfinite(entry):
                raise ValueError('Rational entries must be finite')
            out[index] = Fraction(entry)
        return out

    def to_float(self) -> Matrix:
        """Convert every entry to the nearest double."""
        return Matrix([[float(entry) for entry in row]
                       for row in self._values.tolist()])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    __hash__ = None     # type: ignore


def _common(a: Matrix, b: Matrix) -> Tuple[Type[Matrix], np.ndarray,
                                           np.ndarray]:
    """Pick the result type; rational only if both operands are rational."""
    if isinstance(a, RationalMatrix) and isinstance(b, RationalMatrix):
        return RationalMatrix, a.values, b.values
    return (Matrix, np.asarray(_as_float(a).values),
            np.asarray(_as_float(b).values))


def _as_float(a: Matrix) -> Matrix:
    if isinstance(a, RationalMatrix):
        return a.to_float()
    return a


def identity(n: int, exact: bool = False) -> Matrix:
    """Get the ``n`` x ``n`` identity."""
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    return RationalMatrix(rows) if exact else Matrix(rows)


def zeros(rows: int, cols: int, exact: bool = False) -> Matrix:
    """Get a ``rows`` x ``cols`` matrix of zeros."""
    data = [[0] * cols for _ in range(rows)]
    return RationalMatrix(data) if exact else Matrix(data)


def transpose(a: M) -> M:
    """Transpose ``a``."""
    return type(a)(a.values.T)


def scale(a: M, factor: Any) -> M:
    """Multiply every entry of ``a`` by ``factor``."""
    if isinstance(a, RationalMatrix):
        return type(a)(a.values * Fraction(factor))
    return type(a)(a.values * float(factor))


def add(a: Matrix, b: Matrix) -> Matrix:
    """Entrywise sum."""
    if a.shape != b.shape:
        raise ValueError(f'Cannot add {a.shape} and {b.shape}')
    kind, x, y = _common(a, b)
    return kind(x + y)


def subtract(a: Matrix, b: Matrix) -> Matrix:
    """Entrywise difference ``a - b``."""
    if a.shape != b.shape:
        raise ValueError(f'Cannot subtract {b.shape} from {a.shape}')
    kind, x, y = _common(a, b)
    return kind(x - y)


def max_abs_diff(a: Matrix, b: Matrix) -> float:
    """Largest entrywise absolute difference, in doubles."""
    if a.shape != b.shape:
        raise ValueError(f'Cannot compare {a.shape} and {b.shape}')
    diff = _as_float(a).values - _as_float(b).values
    return float(np.max(np.abs(diff))) if diff.size else 0.0


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """
    Multiply two matrices.

    The inner index is accumulated left to right, one rank-one update at a
    time, so the summation order is fixed and results are reproducible to
    the bit. Two :class:`.RationalMatrix` operands give an exact
    :class:`.RationalMatrix`; any floating operand gives a :class:`.Matrix`.

    Parameters
    ----------
    a : :class:`.Matrix`
    b : :class:`.Matrix`

    Returns
    -------
    :class:`.Matrix`

    Raises
    ------
    ValueError
        If ``a.cols != b.rows``.

    """
    if a.cols != b.rows:
        raise ValueError(f'Cannot multiply {a.shape} by {b.shape}')
    kind, x, y = _common(a, b)
    if a.cols == 0:
        return zeros(a.rows, b.cols, exact=kind is RationalMatrix)
    out = x[:, 0:1] * y[0:1, :]
    for k in range(1, a.cols):
        out = out + x[:, k:k + 1] * y[k:k + 1, :]
    return kind(out)


def _pivot_row(work: np.ndarray, col: int, exact: bool) -> int:
    """Find the partial-pivoting row for ``col``."""
    best = col
    best_size = abs(work[col, col])
    for i in range(col + 1, work.shape[0]):
        size = abs(work[i, col])
        if size > best_size:
            best, best_size = i, size
    if exact:
        if best_size == 0:
            raise SingularMatrixError(col)
    elif best_size < PIVOT_TOLERANCE:
        raise SingularMatrixError(col)
    return best


def solve(a: Matrix, b: Matrix) -> Matrix:
    """
    Solve ``a @ X = b`` by Gaussian elimination with partial pivoting.

    Parameters
    ----------
    a : :class:`.Matrix`
        Square coefficient matrix.
    b : :class:`.Matrix`
        Right-hand sides, one per column.

    Returns
    -------
    :class:`.Matrix`
        ``X``; exact when both operands are rational.

    Raises
    ------
    ValueError
        If ``a`` is not square or ``b`` has the wrong number of rows.
    :class:`.SingularMatrixError`
        If a pivot magnitude falls below :data:`PIVOT_TOLERANCE` (or is zero
        in exact arithmetic). Carries the failing pivot index.

    """
    if a.rows != a.cols:
        raise ValueError(f'Coefficient matrix must be square, got {a.shape}')
    if b.rows != a.rows:
        raise ValueError(f'Cannot solve {a.shape} against {b.shape}')
    kind, x, y = _common(a, b)
    exact = kind is RationalMatrix
    n = a.rows
    work = np.concatenate([x, y], axis=1)
    if not exact:
        work = work.astype(float)   # Writable copy.
    pivots = []
    for col in range(n):
        best = _pivot_row(work, col, exact)
        if best != col:
            work[[col, best]] = work[[best, col]]
        pivot = work[col, col]
        pivots.append(abs(pivot))
        for i in range(col + 1, n):
            factor = work[i, col] / pivot
            if factor != 0:
                work[i, col:] = work[i, col:] - factor * work[col, col:]
    if not exact and pivots and \
            max(pivots) / min(pivots) > PIVOT_RATIO_WARNING:
        warnings.warn(f'Pivot ratio {max(pivots) / min(pivots):.3e} exceeds '
                      f'{PIVOT_RATIO_WARNING:.0e}; solution may be inaccurate',
                      IllConditionedWarning)
    solution = work[:, n:].copy()
    for i in range(n - 1, -1, -1):
        acc = solution[i]
        for j in range(i + 1, n):
            acc = acc - work[i, j] * solution[j]
        solution[i] = acc / work[i, i]
    return kind(solution)


def pseudo_inverse(a: Matrix) -> Matrix:
    """
    Get the Moore-Penrose pseudo-inverse of a full-column-rank matrix.

    Uses the normal equations, ``(aᵀa)⁻¹aᵀ``, which is the left inverse of
    ``a``.

    Raises
    ------
    :class:`.SingularMatrixError`
        If ``a`` is rank deficient.

    """
    at = transpose(a)
    logger.debug('Pseudo-inverse of %s x %s matrix', a.rows, a.cols)
    return solve(matmul(at, a), at)


def column_sums(a: Matrix) -> Matrix:
    """Sum each column (rows added top to bottom) into a 1 x cols matrix."""
    kind = RationalMatrix if isinstance(a, RationalMatrix) else Matrix
    if a.rows == 0:
        return zeros(1, a.cols, exact=kind is RationalMatrix)
    values = a.values
    total = values[0:1, :]
    for i in range(1, a.rows):
        total = total + values[i:i + 1, :]
    return kind(total)
