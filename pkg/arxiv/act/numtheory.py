"""Möbius and Mertens functions used by the arithmetic cosine transform."""

from typing import List, Tuple

import logging
logger = logging.getLogger(__name__)
logger.propagate = False


def _check_positive(n: int) -> None:
    if n < 1:
        raise ValueError(f'Expected a positive integer, got {n}')


def divisors(n: int) -> List[int]:
    """Get the positive divisors of ``n`` in ascending order."""
    _check_positive(n)
    small: List[int] = []
    large: List[int] = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def moebius(n: int) -> int:
    """
    Evaluate the Möbius function by trial division.

    Parameters
    ----------
    n : int
        A positive integer.

    Returns
    -------
    int
        ``0`` if ``n`` has a squared prime factor, otherwise ``(-1)**w``
        where ``w`` is the number of distinct prime factors of ``n``.

    Raises
    ------
    ValueError
        If ``n`` is not positive.

    """
    _check_positive(n)
    sign = 1
    remaining = n
    p = 2
    while p * p <= remaining:
        if remaining % p == 0:
            remaining //= p
            if remaining % p == 0:
                return 0
            sign = -sign
        p += 1
    if remaining > 1:     # One prime factor left over.
        sign = -sign
    return sign


def mertens(n: int) -> int:
    """
    Evaluate the Mertens function, the partial sum of :func:`moebius`.

    Parameters
    ----------
    n : int
        A positive integer.

    Returns
    -------
    int
        ``sum(moebius(m) for m in 1..n)``.

    """
    _check_positive(n)
    return sum(moebius(m) for m in range(1, n + 1))


def moebius_table(n: int) -> Tuple[int, ...]:
    """Get ``(0, μ(1), ..., μ(n))``; index 0 is a placeholder."""
    _check_positive(n)
    return (0,) + tuple(moebius(m) for m in range(1, n + 1))
