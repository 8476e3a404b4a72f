"""Two's-complement fixed-point values, quantization and range checks."""

from typing import Optional, Tuple
from dataclasses import dataclass
import math

import logging
logger = logging.getLogger(__name__)
logger.propagate = False

TRUNCATE = 'truncate'
ROUND_HALF_UP = 'round-half-up'
ROUNDING_MODES = (TRUNCATE, ROUND_HALF_UP)

ERROR = 'error'
SATURATE = 'saturate'
OVERFLOW_MODES = (ERROR, SATURATE)


class FixedPointOverflow(OverflowError):
    """A value does not fit the word-length allocated to it."""

    def __init__(self, value: int, total_bits: int,
                 node_id: Optional[int] = None) -> None:
        """Record the offending raw value, the width and the node."""
        where = f' at node {node_id}' if node_id is not None else ''
        super(FixedPointOverflow, self).__init__(
            f'Raw value {value} does not fit {total_bits} bits{where}'
        )
        self.value = value
        self.total_bits = total_bits
        self.node_id = node_id

    def __reduce__(self) -> Tuple:
        return type(self), (self.value, self.total_bits, self.node_id)


def raw_bounds(total_bits: int) -> Tuple[int, int]:
    """Smallest and largest raw integers of a ``total_bits`` word."""
    if total_bits < 1:
        raise ValueError(f'Word-length must be positive, got {total_bits}')
    return -(1 << (total_bits - 1)), (1 << (total_bits - 1)) - 1


@dataclass(frozen=True)
class FixedPointValue:
    """A raw two's-complement integer with its binary point."""

    raw: int
    total_bits: int
    frac_bits: int

    def __post_init__(self) -> None:
        """Enforce the representable range."""
        low, high = raw_bounds(self.total_bits)
        if not low <= self.raw <= high:
            raise FixedPointOverflow(self.raw, self.total_bits)

    @property
    def value(self) -> float:
        """The represented real, ``raw / 2**frac_bits``."""
        return math.ldexp(self.raw, -self.frac_bits)


def check_rounding(rounding: str) -> str:
    """Validate a rounding mode name."""
    if rounding not in ROUNDING_MODES:
        raise ValueError(f'No such rounding mode: {rounding}')
    return rounding


def check_overflow(overflow: str) -> str:
    """Validate an overflow mode name."""
    if overflow not in OVERFLOW_MODES:
        raise ValueError(f'No such overflow mode: {overflow}')
    return overflow


def round_scaled(x: float, frac_bits: int, rounding: str) -> int:
    """
    Round ``x·2**frac_bits`` to an integer.

    Truncation rounds toward negative infinity; round-half-up adds one half
    before flooring. Scaling by a power of two is exact in binary floating
    point, so no precision is lost before rounding.
    """
    if not math.isfinite(x):
        raise ValueError(f'Cannot quantize {x}')
    scaled = math.ldexp(x, frac_bits)
    raw = math.floor(scaled)
    if rounding == ROUND_HALF_UP and scaled - raw >= 0.5:
        raw += 1
    return int(raw)


def requantize(raw: int, from_frac: int, to_frac: int, rounding: str) -> int:
    """Move ``raw`` from ``from_frac`` to ``to_frac`` fractional bits."""
    shift = from_frac - to_frac
    if shift <= 0:
        return raw << -shift
    if rounding == ROUND_HALF_UP:
        return (raw + (1 << (shift - 1))) >> shift
    return raw >> shift     # Arithmetic shift floors.


def fit(raw: int, total_bits: int, overflow: str,
        node_id: Optional[int] = None) -> int:
    """Range-check ``raw`` against a ``total_bits`` word."""
    low, high = raw_bounds(total_bits)
    if low <= raw <= high:
        return raw
    if overflow == SATURATE:
        return low if raw < low else high
    raise FixedPointOverflow(raw, total_bits, node_id)


def quantize(x: float, total_bits: int, frac_bits: int,
             rounding: str = TRUNCATE, overflow: str = ERROR,
             node_id: Optional[int] = None) -> FixedPointValue:
    """
    Quantize a real to a fixed-point value.

    Parameters
    ----------
    x : float
        The real to represent.
    total_bits : int
        Word-length including the sign bit.
    frac_bits : int
        Bits after the binary point; at most ``total_bits - 1``.
    rounding : str
        ``'truncate'`` or ``'round-half-up'``.
    overflow : str
        ``'error'`` raises :class:`.FixedPointOverflow`; ``'saturate'``
        clamps to the nearest representable value.
    node_id : int, optional
        Reported in the overflow error.

    Returns
    -------
    :class:`.FixedPointValue`

    """
    if total_bits < frac_bits + 1:
        raise ValueError(f'{total_bits} bits cannot hold {frac_bits} '
                         f'fractional bits and a sign')
    check_rounding(rounding)
    check_overflow(overflow)
    raw = fit(round_scaled(x, frac_bits, rounding), total_bits, overflow,
              node_id)
    return FixedPointValue(raw, total_bits, frac_bits)
