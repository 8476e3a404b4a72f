"""JSON and CSV encodings shared by the command line and the harness."""

from typing import Any, Iterable, Mapping, Sequence
from fractions import Fraction
import csv
import io
import json

import numpy as np

from .linalg import Matrix, RationalMatrix


def format_number(value: Any) -> str:
    """
    Render a number for CSV output.

    Floats use the shortest representation that parses back to the same
    double; rationals are written ``p/q`` (or ``p`` when integral).
    """
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f'{value.numerator}/{value.denominator}'
    if isinstance(value, (bool, np.bool_)):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def parse_number(text: str) -> Any:
    """Inverse of :func:`format_number` for numeric cells."""
    if '/' in text:
        return Fraction(text)
    try:
        return int(text)
    except ValueError:
        return float(text)


def _plain(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, Fraction):
        return format_number(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def dumps(payload: Any) -> str:
    """
    Encode a payload as one line of JSON.

    Key order is preserved, and floats are written with their shortest
    round-trip form, so decoding and re-encoding gives the same text.
    """
    return json.dumps(_plain(payload), allow_nan=False)


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Write a header and rows as CSV text with ``\\n`` line endings."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    if header:
        writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(value) for value in row])
    return out.getvalue()


def matrix_to_csv(matrix: Matrix) -> str:
    """One CSV line per matrix row, no header."""
    return rows_to_csv((), (matrix.row(i) for i in range(matrix.rows)))


def matrix_from_csv(text: str, exact: bool = False) -> Matrix:
    """Read :func:`matrix_to_csv` output back into a matrix."""
    rows = [[parse_number(cell) for cell in row]
            for row in csv.reader(io.StringIO(text)) if row]
    return RationalMatrix(rows) if exact else Matrix(rows)
