"""Tests for :mod:`.manager`."""

from unittest import TestCase, mock

import numpy as np

from .. import core, linalg, manager
from ..sampling import UniformSignal, build_grid, interpolate


class TestRequestFactory(TestCase):
    """Requests are generated from their mode slugs."""

    def test_slugs(self):
        """Each slug produces its own request type."""
        self.assertIsInstance(manager.TransformRequest.factory('null-mean'),
                              manager.NullMeanRequest)
        self.assertIsInstance(manager.TransformRequest.factory('mertens'),
                              manager.MertensRequest)
        self.assertIsInstance(manager.TransformRequest.factory('factorized'),
                              manager.FactorizedRequest)
        self.assertEqual(set(manager.TransformRequest.modes()),
                         {'null-mean', 'mertens', 'factorized'})

    def test_unknown(self):
        """An unknown slug is refused."""
        with self.assertRaises(ValueError):
            manager.TransformRequest.factory('fourier')


class TestOperatorManager(TestCase):
    """We use an :class:`.OperatorManager` to build and hold operators."""

    def setUp(self):
        """We have a manager and a zero-mean signal."""
        self.operators = manager.OperatorManager()
        values = np.array([0.9, -0.2, 0.4, -0.7, 0.1, 0.3, -0.5, 0.6])
        self.signal = UniformSignal(values - values.mean())

    def test_built_once(self):
        """Operators are built on first use only."""
        with mock.patch.object(manager, 'build_grid',
                               wraps=build_grid) as mock_build:
            first = self.operators.get()
            second = self.operators.get()
            self.assertIs(first, second)
            self.assertEqual(mock_build.call_count, 1,
                             'The grid is not built a second time, unless...')
            self.operators.get(16)
            self.assertEqual(mock_build.call_count, 2,
                             '...another length is asked for.')

    def test_factorization_for_eight_only(self):
        """Only the 8-point operators carry the factorization."""
        self.assertIsNotNone(self.operators.get(8).factorization)
        self.assertIsNone(self.operators.get(16).factorization)

    def test_short_grid_is_lazy(self):
        """A 4-point grid is too small to invert, but still builds."""
        operators = self.operators.get(4)
        self.assertEqual(operators.grid.size, 3)
        self.assertEqual(operators.w.shape, (3, 4))
        with self.assertRaises(ValueError):
            operators.w_plus
        with self.assertRaises(ValueError):
            operators.mean_weights

    def test_lazy_inverse(self):
        """W⁺ is a left inverse of W where the grid allows it."""
        operators = self.operators.get(10)
        product = linalg.matmul(operators.w_plus, operators.w)
        np.testing.assert_allclose(product.values.astype(float), np.eye(10),
                                   atol=1e-9)
        self.assertAlmostEqual(sum(operators.mean_weights), 1.0, places=9)

    def test_modes_agree(self):
        """All three modes give the same AC coefficients."""
        samples = interpolate(self.signal, self.operators.get().grid)
        results = [
            self.operators.transform(
                manager.TransformRequest.factory(mode), samples
            ).ac()
            for mode in manager.TransformRequest.modes()
        ]
        for result in results[1:]:
            np.testing.assert_allclose(result, results[0], atol=1e-9)

    def test_mertens_has_dc(self):
        """Only the Mertens mode reports V_0."""
        samples = interpolate(UniformSignal([1.0] * 8), build_grid())
        result = self.operators.transform(manager.MertensRequest(), samples)
        self.assertTrue(result.has_dc)
        self.assertAlmostEqual(result.values[0], 8 ** 0.5, places=9)
        null_mean = self.operators.transform(manager.NullMeanRequest(),
                                             samples)
        self.assertFalse(null_mean.has_dc)

    def test_factorized_other_length(self):
        """The factored operator refuses other lengths."""
        grid = self.operators.get(6).grid
        signal = UniformSignal([0.5, -0.5, 0.25, -0.25, 0.125, -0.125])
        samples = interpolate(signal, grid)
        with self.assertRaises(ValueError):
            self.operators.transform(manager.FactorizedRequest(), samples)

    def test_unknown_request(self):
        """Requests of no known type are refused."""
        samples = interpolate(self.signal, self.operators.get().grid)
        with self.assertRaises(ValueError):
            self.operators.transform(manager.TransformRequest(), samples)

    def test_matches_core(self):
        """Transforms go through the core functions."""
        samples = interpolate(self.signal, self.operators.get().grid)
        ours = self.operators.transform(manager.NullMeanRequest(), samples)
        np.testing.assert_array_equal(ours.values,
                                      core.act_null_mean(samples).values)


class TestConfigManager(TestCase):
    """Experiment settings come from an env-style mapping."""

    def test_defaults(self):
        """An empty mapping gives the defaults."""
        config = manager.ConfigManager({})
        self.assertEqual(config.trials, 10000)
        self.assertEqual(config.seed, 0)
        self.assertEqual(config.workers, 1)
        self.assertIsNone(config.rounding)
        self.assertIsNone(config.overflow)
        self.assertEqual(config.log_level, 'WARNING')

    def test_overrides(self):
        """Every setting can be overridden."""
        config = manager.ConfigManager({
            'ACT_TRIALS': '25',
            'ACT_SEED': '7',
            'ACT_WORKERS': '3',
            'ACT_ROUNDING': 'truncate',
            'ACT_OVERFLOW': 'saturate',
            'ACT_LOG_LEVEL': 'debug'
        })
        self.assertEqual(config.trials, 25)
        self.assertEqual(config.seed, 7)
        self.assertEqual(config.workers, 3)
        self.assertEqual(config.rounding, 'truncate')
        self.assertEqual(config.overflow, 'saturate')
        self.assertEqual(config.log_level, 'DEBUG')

    def test_bad_numbers(self):
        """Counts must be positive integers."""
        for config in ({'ACT_TRIALS': 'many'}, {'ACT_TRIALS': '0'},
                       {'ACT_WORKERS': '-1'}, {'ACT_SEED': '1.5'}):
            with self.assertRaises(ValueError):
                manager.ConfigManager(config)

    def test_bad_modes(self):
        """Unknown modes are refused when read."""
        config = manager.ConfigManager({'ACT_ROUNDING': 'stochastic',
                                        'ACT_OVERFLOW': 'wrap'})
        with self.assertRaises(ValueError):
            config.rounding
        with self.assertRaises(ValueError):
            config.overflow
