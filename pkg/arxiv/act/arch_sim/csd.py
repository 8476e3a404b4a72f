"""Canonical signed-digit recoding of integer constants."""

from typing import List, Tuple


def csd_digits(constant: int) -> List[Tuple[int, int]]:
    """
    Recode ``constant`` as a sum of signed powers of two.

    Uses the non-adjacent form, which has the fewest non-zero digits of any
    signed-digit representation.

    Returns
    -------
    list
        ``(shift, sign)`` pairs, least significant first, with
        ``constant == sum(sign << shift)``.

    """
    sign = -1 if constant < 0 else 1
    remaining = abs(constant)
    digits = []
    shift = 0
    while remaining:
        if remaining % 2:
            digit = remaining % 4
            if digit >= 2:
                digit -= 4
            digits.append((shift, sign * digit))
            remaining -= digit
        remaining //= 2
        shift += 1
    return digits


def csd_value(digits: List[Tuple[int, int]]) -> int:
    """Evaluate a digit list from :func:`csd_digits`."""
    return sum(sign * (1 << shift) for shift, sign in digits)


def csd_adders(constant: int) -> int:
    """Two-input adders needed to multiply by ``constant`` with shifts."""
    return max(0, len(csd_digits(constant)) - 1)


def csd_shifts(constant: int) -> int:
    """Non-trivial shifts (by one or more places) in the recoding."""
    return sum(1 for shift, _ in csd_digits(constant) if shift > 0)
