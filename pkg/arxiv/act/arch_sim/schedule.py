"""
Word-length schedules for the architecture graphs.

Every node works with ``L - 1`` fractional bits and ``L + ΔL`` total bits,
so ``ΔL`` integer bits of headroom cover the node's range
``[-2**ΔL, 2**ΔL)``. A :class:`.QuantizationSchedule` fixes ``L``, ``ΔL``
per node, the rounding mode and the overflow policy.
"""

from typing import Any, Dict, Mapping, Optional, Union
from dataclasses import dataclass, field, replace
import math

import numpy as np

from ..sampling import build_grid, lebesgue_constant
from .fixedpoint import (TRUNCATE, ROUND_HALF_UP, ERROR, check_overflow,
                         check_rounding)
from .graph import ArchitectureGraph, OUTPUT, build_graph, node_gains
from . import graph as g

import logging
logger = logging.getLogger(__name__)
logger.propagate = False

MIN_WORD_LENGTH = 2
"""At least one fractional bit plus the sign."""

# Minimum headroom per stage for the reference word-length allocation.
# :func:`default_schedule` never goes below these.
STAGE_HEADROOM: Mapping[str, int] = {
    g.STAGE_INPUT: 0,
    g.STAGE_TAPS: 2,
    g.STAGE_ACCUMULATE: 3,
    g.STAGE_SCALE: 11,
    g.STAGE_MOEBIUS: 13,
    g.STAGE_MEAN: 0,
    g.STAGE_MEAN_SUM: 1,
    g.STAGE_CENTRE: 1,
    g.STAGE_CORRECTION: 13,
    g.STAGE_DC: 2,
}


@dataclass(frozen=True)
class QuantizationSchedule:
    """Word-length and rounding assignment for every node of a graph."""

    base_l: int
    """``L``: data word-length; fractional bits are ``L - 1``."""

    deltas: Dict[int, int] = field(default_factory=dict)
    """Extra integer bits ``ΔL`` per node id."""

    rounding: str = TRUNCATE
    overflow: str = ERROR

    def __post_init__(self) -> None:
        """Validate the word-length, modes and headroom values."""
        if self.base_l < MIN_WORD_LENGTH:
            raise ValueError(f'Word-length must be at least '
                             f'{MIN_WORD_LENGTH}, got {self.base_l}')
        check_rounding(self.rounding)
        check_overflow(self.overflow)
        for node_id, delta in self.deltas.items():
            if delta < 0:
                raise ValueError(f'Node {node_id} has negative headroom '
                                 f'{delta}')

    def __hash__(self) -> int:
        return hash((self.base_l, tuple(sorted(self.deltas.items())),
                     self.rounding, self.overflow))

    @property
    def frac_bits(self) -> int:
        """Fractional bits, ``L - 1``."""
        return self.base_l - 1

    def total_bits(self, node_id: int) -> int:
        """``L + ΔL`` for a node."""
        try:
            return self.base_l + self.deltas[node_id]
        except KeyError as e:
            raise ValueError(f'Schedule has no entry for node {node_id}') \
                from e

    def covers(self, graph: ArchitectureGraph) -> bool:
        """Whether every node of ``graph`` has a headroom entry."""
        return all(node_id in self.deltas for node_id in graph.node_ids)

    def with_base_l(self, base_l: int) -> 'QuantizationSchedule':
        """The same headroom and modes at another word-length."""
        return replace(self, base_l=base_l)


def headroom_for(bound: float) -> int:
    """Smallest ``ΔL >= 0`` with ``bound < 2**ΔL``."""
    if bound < 1:
        return 0
    return int(math.floor(math.log2(bound))) + 1


def default_sample_bound() -> float:
    """``2Λ``: twice the grid's Lebesgue constant, for inputs in [-1, 1]."""
    return 2 * lebesgue_constant(build_grid())


def derive_headroom(graph: ArchitectureGraph, base_l: int,
                    sample_bound: Optional[float] = None) -> Dict[int, int]:
    """
    Headroom each node needs for inputs bounded by ``sample_bound``.

    A node computing ``Σ c_j·v_j`` stays below ``Σ|c_j|·sample_bound`` in
    magnitude. The bound is padded for quantization error, which is a few
    least significant bits per input scaled by the same gains.
    """
    if sample_bound is None:
        sample_bound = default_sample_bound()
    lsb = math.ldexp(1.0, -(base_l - 1))
    headroom = {}
    for node_id, form in node_gains(graph).items():
        gain = float(np.sum(np.abs(form)))
        bound = gain * (sample_bound + 4 * lsb) * (1 + 4 * lsb)
        headroom[node_id] = headroom_for(bound)
    return headroom


def derive_schedule(graph: ArchitectureGraph, base_l: int,
                    sample_bound: Optional[float] = None,
                    rounding: str = TRUNCATE,
                    overflow: str = ERROR) -> QuantizationSchedule:
    """Build a schedule from range analysis alone."""
    return QuantizationSchedule(base_l,
                                derive_headroom(graph, base_l, sample_bound),
                                rounding, overflow)


def default_schedule(graph: Union[str, ArchitectureGraph], base_l: int,
                     sample_bound: Optional[float] = None
                     ) -> QuantizationSchedule:
    """
    Get the shipped schedule for a graph.

    Headroom is the larger of the stage allocation in
    :data:`STAGE_HEADROOM` and what range analysis requires; outputs take
    their operand's headroom. Rounding is round-half-up and overflow is an
    error.

    Parameters
    ----------
    graph : str or :class:`.graph.ArchitectureGraph`
        A graph, or an architecture name for :func:`.graph.build_graph`.
    base_l : int
        Data word-length ``L``.
    sample_bound : float, optional
        Largest magnitude of any input sample; defaults to
        :func:`default_sample_bound`.

    Returns
    -------
    :class:`.QuantizationSchedule`

    """
    if isinstance(graph, str):
        graph = build_graph(graph)
    derived = derive_headroom(graph, base_l, sample_bound)
    deltas: Dict[int, int] = {}
    for node in graph.nodes:
        if node.kind == OUTPUT:
            deltas[node.node_id] = deltas[node.operands[0]]
            continue
        deltas[node.node_id] = max(STAGE_HEADROOM.get(node.stage, 0),
                                   derived[node.node_id])
    logger.debug('Default schedule for %s at L=%s: max headroom %s',
                 graph.arch, base_l, max(deltas.values()))
    return QuantizationSchedule(base_l, deltas, ROUND_HALF_UP, ERROR)


def schedule_to_json(schedule: QuantizationSchedule) -> Dict[str, Any]:
    """Describe a schedule as JSON-ready data."""
    return {
        'base_l': schedule.base_l,
        'rounding': schedule.rounding,
        'overflow': schedule.overflow,
        'deltas': {str(node_id): delta
                   for node_id, delta in sorted(schedule.deltas.items())}
    }


def schedule_from_json(payload: Mapping[str, Any]) -> QuantizationSchedule:
    """Rebuild a schedule from :func:`schedule_to_json` output."""
    try:
        deltas = {int(node_id): int(delta)
                  for node_id, delta in payload['deltas'].items()}
        return QuantizationSchedule(int(payload['base_l']), deltas,
                                    payload.get('rounding', TRUNCATE),
                                    payload.get('overflow', ERROR))
    except (KeyError, TypeError, AttributeError) as e:
        raise ValueError('Could not use schedule description') from e
