"""Tests for :mod:`.numtheory`."""

from unittest import TestCase
import math

from .. import numtheory


class TestMoebius(TestCase):
    """The Möbius function of small positive integers."""

    def test_known_values(self):
        """Squarefree numbers get a sign, others get zero."""
        self.assertEqual(numtheory.moebius(1), 1, 'Empty product')
        self.assertEqual(numtheory.moebius(4), 0, 'Squared factor')
        self.assertEqual(numtheory.moebius(6), 1, 'Two distinct primes')
        self.assertEqual(numtheory.moebius(30), -1, 'Three distinct primes')
        self.assertEqual(numtheory.moebius(7), -1)

    def test_zero(self):
        """Zero is not in the domain."""
        with self.assertRaises(ValueError):
            numtheory.moebius(0)

    def test_multiplicative(self):
        """μ(mn) = μ(m)μ(n) for coprime m and n."""
        for m in range(1, 60):
            for n in range(1, 60):
                if math.gcd(m, n) == 1:
                    self.assertEqual(
                        numtheory.moebius(m * n),
                        numtheory.moebius(m) * numtheory.moebius(n),
                        f'Multiplicative at {m}, {n}'
                    )

    def test_divisor_sums(self):
        """Summing μ over the divisors of n gives zero, except for n = 1."""
        self.assertEqual(sum(numtheory.moebius(d)
                             for d in numtheory.divisors(1)), 1)
        for n in range(2, 2000):
            self.assertEqual(sum(numtheory.moebius(d)
                                 for d in numtheory.divisors(n)), 0)


class TestMertens(TestCase):
    """The Mertens function is the running sum of μ."""

    def test_known_values(self):
        """M(1), M(2) and M(7)."""
        self.assertEqual(numtheory.mertens(1), 1)
        self.assertEqual(numtheory.mertens(2), 0)
        self.assertEqual(numtheory.mertens(3), -1)
        self.assertEqual(numtheory.mertens(7), -2)

    def test_increments(self):
        """M(n) - M(n-1) = μ(n)."""
        previous = numtheory.mertens(1)
        for n in range(2, 1000):
            current = numtheory.mertens(n)
            self.assertEqual(current - previous, numtheory.moebius(n))
            previous = current

    def test_zero(self):
        """Zero is not in the domain."""
        with self.assertRaises(ValueError):
            numtheory.mertens(0)


class TestHelpers(TestCase):
    """Divisors and the μ table."""

    def test_divisors(self):
        """Divisors come back ascending."""
        self.assertEqual(numtheory.divisors(12), [1, 2, 3, 4, 6, 12])
        self.assertEqual(numtheory.divisors(1), [1])

    def test_table(self):
        """Index 0 is a placeholder."""
        self.assertEqual(numtheory.moebius_table(7),
                         (0, 1, -1, -1, 0, -1, 1, -1))
