"""Tests for :mod:`.linalg`."""

from unittest import TestCase
from fractions import Fraction
import warnings

import numpy as np

from .. import linalg
from ..core import REFERENCE_MO
from ..linalg import Matrix, RationalMatrix
from ..sampling import build_grid, build_w


class TestMatmul(TestCase):
    """Multiplying small matrices."""

    def test_identity(self):
        """The identity leaves a matrix alone."""
        a = Matrix([[1.5, -2, 3], [4, 5, 6], [7, 8, 9.25]])
        self.assertEqual(linalg.matmul(linalg.identity(3), a).entries,
                         a.entries)

    def test_inner_product(self):
        """A row of ones times a column of ones."""
        product = linalg.matmul(Matrix([[1, 1, 1]]), Matrix([[1], [1], [1]]))
        self.assertEqual(product.entries, (3.0,))

    def test_rational(self):
        """Two rational operands give an exact product."""
        mo = RationalMatrix(REFERENCE_MO)
        d1 = RationalMatrix([[Fraction(1, k) if j == k else 0
                              for j in range(1, 8)] for k in range(1, 8)])
        product = linalg.matmul(mo, d1)
        self.assertIsInstance(product, RationalMatrix)
        self.assertEqual(product[0, 1], Fraction(-1, 2))

    def test_mismatch(self):
        """Inner dimensions must agree."""
        with self.assertRaises(ValueError):
            linalg.matmul(Matrix([[1, 2]]), Matrix([[1, 2]]))

    def test_associative(self):
        """(AB)C = A(BC) for floats (closely) and rationals (exactly)."""
        rng = np.random.default_rng(7)
        a, b, c = (Matrix(rng.uniform(-1, 1, (5, 5))) for _ in range(3))
        left = linalg.matmul(linalg.matmul(a, b), c)
        right = linalg.matmul(a, linalg.matmul(b, c))
        self.assertLess(linalg.max_abs_diff(left, right), 1e-12)

        ints = rng.integers(-9, 10, (3, 5, 5))
        x, y, z = (RationalMatrix([[Fraction(int(v), 7) for v in row]
                                   for row in m]) for m in ints)
        self.assertEqual(linalg.matmul(linalg.matmul(x, y), z),
                         linalg.matmul(x, linalg.matmul(y, z)))


class TestSolve(TestCase):
    """Gaussian elimination with partial pivoting."""

    def test_scaled_identity(self):
        """Solving against 2I halves the right-hand side."""
        x = linalg.solve(linalg.scale(linalg.identity(2), 2),
                         linalg.identity(2))
        self.assertEqual(x.entries, (0.5, 0.0, 0.0, 0.5))

    def test_permutation(self):
        """A zero leading entry needs a row swap."""
        x = linalg.solve(Matrix([[0, 1], [1, 0]]), Matrix([[1], [2]]))
        self.assertEqual(x.entries, (2.0, 1.0))

    def test_singular(self):
        """A rank-one matrix fails at the second pivot."""
        for kind in (Matrix, RationalMatrix):
            with self.assertRaises(linalg.SingularMatrixError) as caught:
                linalg.solve(kind([[1, 2], [2, 4]]), kind([[1], [1]]))
            self.assertEqual(caught.exception.pivot_index, 1)

    def test_exact(self):
        """Rational systems are solved exactly."""
        a = RationalMatrix([[3, 1], [1, 2]])
        b = RationalMatrix([[1], [0]])
        x = linalg.solve(a, b)
        self.assertEqual(x, RationalMatrix([[Fraction(2, 5)],
                                            [Fraction(-1, 5)]]))

    def test_ill_conditioned(self):
        """Widely spread pivots raise a warning, not an error."""
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            linalg.solve(Matrix([[1, 0], [0, 1e-10]]), Matrix([[1], [1]]))
        self.assertTrue(any(issubclass(w.category,
                                       linalg.IllConditionedWarning)
                            for w in caught))

    def test_not_square(self):
        """The coefficient matrix must be square."""
        with self.assertRaises(ValueError):
            linalg.solve(Matrix([[1, 2]]), Matrix([[1]]))


class TestPseudoInverse(TestCase):
    """Left inverse of full-column-rank matrices."""

    def test_identity(self):
        """The identity is its own pseudo-inverse."""
        p = linalg.pseudo_inverse(linalg.identity(8))
        self.assertLess(linalg.max_abs_diff(p, linalg.identity(8)), 1e-15)

    def test_column_selector(self):
        """Identity stacked on zero rows inverts to [I | 0 | 0]."""
        a = Matrix(np.vstack([np.eye(8), np.zeros((2, 8))]))
        p = linalg.pseudo_inverse(a)
        expected = Matrix(np.hstack([np.eye(8), np.zeros((8, 2))]))
        self.assertEqual(p.shape, (8, 10))
        self.assertLess(linalg.max_abs_diff(p, expected), 1e-15)

    def test_penrose_conditions(self):
        """All four Penrose identities hold for the interpolation matrix."""
        w = build_w(build_grid(8))
        p = linalg.pseudo_inverse(w)
        wp = linalg.matmul(w, p)
        pw = linalg.matmul(p, w)
        self.assertLess(linalg.max_abs_diff(linalg.matmul(wp, w), w), 1e-10)
        self.assertLess(linalg.max_abs_diff(linalg.matmul(pw, p), p), 1e-10)
        self.assertLess(linalg.max_abs_diff(linalg.transpose(wp), wp), 1e-10)
        self.assertLess(linalg.max_abs_diff(linalg.transpose(pw), pw), 1e-10)
        self.assertLess(linalg.max_abs_diff(pw, linalg.identity(8)), 1e-12,
                        'W⁺ is a left inverse of W')

    def test_rank_deficient(self):
        """Repeated columns cannot be inverted."""
        with self.assertRaises(linalg.SingularMatrixError):
            linalg.pseudo_inverse(Matrix([[1, 1], [2, 2], [3, 3]]))


class TestColumnSums(TestCase):
    """Column totals."""

    def test_identity(self):
        """Each column of the identity sums to one."""
        self.assertEqual(linalg.column_sums(linalg.identity(3)).entries,
                         (1.0, 1.0, 1.0))

    def test_ones(self):
        """A 2 x 2 block of ones sums to twos."""
        self.assertEqual(linalg.column_sums(Matrix(np.ones((2, 2)))).entries,
                         (2.0, 2.0))

    def test_rational(self):
        """Rational columns stay rational."""
        sums = linalg.column_sums(RationalMatrix([[Fraction(1, 3), 1],
                                                  [Fraction(1, 6), 2]]))
        self.assertEqual(sums.entries, (Fraction(1, 2), Fraction(3)))


class TestRationalMatrix(TestCase):
    """Exact matrices."""

    def test_lowest_terms(self):
        """Entries are normalised on the way in."""
        m = RationalMatrix.from_rows([[Fraction(2, 4), 3]])
        self.assertEqual(m.entries, (Fraction(1, 2), Fraction(3)))

    def test_float_conversion(self):
        """The exact and floating paths agree after conversion."""
        mo = RationalMatrix(REFERENCE_MO)
        exact = linalg.matmul(mo, mo).to_float()
        floating = linalg.matmul(mo.to_float(), mo.to_float())
        self.assertLess(linalg.max_abs_diff(exact, floating), 1e-15)

    def test_read_only(self):
        """Stored values cannot be modified in place."""
        m = Matrix([[1.0]])
        with self.assertRaises(ValueError):
            m.values[0, 0] = 2.0
