"""Provides :class:`.OperatorManager` and :class:`.ConfigManager`."""

from typing import Any, Callable, Dict, Mapping, Optional, Tuple
from dataclasses import dataclass

from . import core
from .arch_sim.fixedpoint import check_overflow, check_rounding
from .core import FactorizationBundle, SpectralCoefficients
from .linalg import Matrix
from .sampling import (NonUniformSamples, SamplingGrid, build_grid, build_w,
                       build_w_plus, mean_weights as grid_mean_weights)

import logging
logger = logging.getLogger(__name__)
logger.propagate = False

NULL_MEAN = 'null-mean'
MERTENS = 'mertens'
FACTORIZED = 'factorized'


@dataclass
class TransformRequest:
    """Represents a request for the coefficients of a set of samples."""

    slug = ''

    @classmethod
    def factory(cls, request_type: str, **data: Any) -> 'TransformRequest':
        """Generate a request of the appropriate type."""
        for klass in cls.__subclasses__():
            if klass.slug == request_type:
                return klass(**data)
        raise ValueError(f'No such transform mode: {request_type}')

    @classmethod
    def modes(cls) -> Tuple[str, ...]:
        """Slugs of every available request type."""
        return tuple(klass.slug for klass in cls.__subclasses__())


@dataclass
class NullMeanRequest(TransformRequest):
    """``V_1..V_{n-1}`` of a signal known to have zero mean."""

    slug = NULL_MEAN


@dataclass
class MertensRequest(TransformRequest):
    """All coefficients, correcting for the mean recovered from the samples."""

    slug = MERTENS


@dataclass
class FactorizedRequest(TransformRequest):
    """``V_1..V_7`` through the factored 8-point operator."""

    slug = FACTORIZED


@dataclass(frozen=True, eq=False)
class Operators:
    """Everything derived from the grid of one transform length."""

    grid: SamplingGrid
    w: Matrix
    factorization: Optional[FactorizationBundle]
    """Only for the 8-point transform."""

    @property
    def w_plus(self) -> Matrix:
        """
        Left inverse of ``W``, built on first use.

        Raises
        ------
        ValueError
            If the grid has fewer instants than ``n``.

        """
        return build_w_plus(self.grid)

    @property
    def mean_weights(self) -> Tuple[float, ...]:
        """Weights recovering the mean from the samples, built on first use."""
        return grid_mean_weights(self.grid)


class OperatorManager:
    """
    Builds and holds the operators for each transform length.

    Operators are immutable and built at most once per length, so a single
    manager can serve any number of requests.
    """

    def __init__(self) -> None:
        """Start with nothing built."""
        self.operators: Dict[int, Operators] = {}

    def _fresh_operators(self, n: int) -> Operators:
        grid = build_grid(n)
        w = build_w(grid)
        bundle = core.build_factorization(grid) \
            if n == core.FACTORIZED_LENGTH else None
        logger.debug('Built operators for n=%s', n)
        return Operators(grid, w, bundle)

    def get(self, n: int = 8) -> Operators:
        """Get the operators for an ``n``-point transform."""
        operators = self.operators.get(n)
        if operators is None:
            operators = self._fresh_operators(n)
            self.operators[n] = operators
        return operators

    def transform(self, request: TransformRequest,
                  samples: NonUniformSamples) -> SpectralCoefficients:
        """
        Fulfil a :class:`.TransformRequest`.

        Parameters
        ----------
        request : :class:`.TransformRequest`
        samples : :class:`.sampling.NonUniformSamples`

        Returns
        -------
        :class:`.core.SpectralCoefficients`

        """
        handlers: Mapping[type, Callable[[], SpectralCoefficients]] = {
            NullMeanRequest: lambda: core.act_null_mean(samples),
            MertensRequest: lambda: core.act_mertens(samples),
            FactorizedRequest: lambda: self._factorized(samples),
        }
        try:
            handler = handlers[type(request)]
        except KeyError as e:
            raise ValueError(f'Cannot handle {type(request).__name__}') from e
        return handler()

    def _factorized(self, samples: NonUniformSamples) -> SpectralCoefficients:
        bundle = self.get(samples.grid.n).factorization
        if bundle is None:
            raise ValueError('The factorized operator is for n=8 only')
        return core.transform_via_t(samples, bundle)


class ConfigManager:
    """
    Reads experiment settings from env-style configuration.

    Config parameters:

    - ``ACT_TRIALS`` (optional; defaults to 10000)
    - ``ACT_SEED`` (optional; defaults to 0)
    - ``ACT_WORKERS`` (optional; defaults to 1)
    - ``ACT_ROUNDING``, ``'truncate'`` or ``'round-half-up'`` (optional;
      overrides the rounding of default schedules)
    - ``ACT_OVERFLOW``, ``'error'`` or ``'saturate'`` (optional)
    - ``ACT_LOG_LEVEL`` (optional; defaults to ``WARNING``)
    """

    def __init__(self, config: Mapping) -> None:
        """
        Validate configuration.

        Parameters
        ----------
        config : mapping
            Configuration from which to obtain experiment parameters, e.g.
            ``os.environ``.

        """
        self.config = config
        try:
            self.trials = int(config.get('ACT_TRIALS', 10000))
            self.seed = int(config.get('ACT_SEED', 0))
            self.workers = int(config.get('ACT_WORKERS', 1))
        except ValueError as e:
            raise ValueError('ACT_TRIALS, ACT_SEED and ACT_WORKERS must be '
                             'integers') from e
        if self.trials < 1:
            raise ValueError(f'ACT_TRIALS must be positive, got {self.trials}')
        if self.workers < 1:
            raise ValueError(f'ACT_WORKERS must be positive, '
                             f'got {self.workers}')
        logger.debug('Configured %s trials, seed %s, %s workers',
                     self.trials, self.seed, self.workers)

    @property
    def rounding(self) -> Optional[str]:
        """Rounding override, if any."""
        value = self.config.get('ACT_ROUNDING')
        return check_rounding(value) if value else None

    @property
    def overflow(self) -> Optional[str]:
        """Overflow policy override, if any."""
        value = self.config.get('ACT_OVERFLOW')
        return check_overflow(value) if value else None

    @property
    def log_level(self) -> str:
        """Name of the logging level for the command line."""
        return str(self.config.get('ACT_LOG_LEVEL', 'WARNING')).upper()
