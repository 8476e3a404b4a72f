"""Bit-accurate evaluation of an architecture graph under a schedule."""

from typing import Dict, List, Optional, Sequence, Tuple
from dataclasses import dataclass
import math

from ..core import SpectralCoefficients
from ..sampling import NonUniformSamples
from .fixedpoint import (ROUND_HALF_UP, SATURATE, FixedPointOverflow,
                         raw_bounds, requantize, round_scaled)
from .graph import (ArchitectureGraph, INPUT, SHIFT, ADD, SUB, INT_MUL,
                    FRAC_MUL)
from .schedule import QuantizationSchedule

import logging
logger = logging.getLogger(__name__)
logger.propagate = False


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Coefficients plus the raw integers they were read from."""

    coefficients: SpectralCoefficients

    raw_outputs: Dict[int, int]
    """Coefficient index to raw output integer."""

    scales: Dict[int, float]
    """Coefficient index to output scale."""

    frac_bits: int

    trace: Optional[Dict[int, int]] = None
    """Raw value of every node, when requested."""


# (kind, node_id, first operand, second operand, constant, low, high)
_Step = Tuple[str, int, int, int, int, int, int]


class Simulator:
    """
    A graph compiled against one schedule, ready to evaluate many inputs.

    Parameters
    ----------
    graph : :class:`.graph.ArchitectureGraph`
    schedule : :class:`.schedule.QuantizationSchedule`
        Must have an entry for every node.

    """

    def __init__(self, graph: ArchitectureGraph,
                 schedule: QuantizationSchedule) -> None:
        """Resolve widths and quantize real constants once."""
        if not schedule.covers(graph):
            missing = [i for i in graph.node_ids if i not in schedule.deltas]
            raise ValueError(f'Schedule has no entry for nodes {missing}')
        self.graph = graph
        self.schedule = schedule
        self.frac_bits = schedule.frac_bits
        self._program: List[_Step] = []
        for node in graph.nodes:
            low, high = raw_bounds(schedule.total_bits(node.node_id))
            first = node.operands[0] if node.operands else -1
            second = node.operands[1] if len(node.operands) > 1 else -1
            if node.kind == INPUT:
                constant = node.port
            elif node.kind == FRAC_MUL:
                constant = round_scaled(node.constant, self.frac_bits,
                                        ROUND_HALF_UP)
            elif node.kind in (SHIFT, INT_MUL):
                constant = node.constant
            else:
                constant = 0
            self._program.append((node.kind, node.node_id, first, second,
                                  constant, low, high))
        self._outputs = [(node.port, node.node_id, node.scale)
                         for node in graph.outputs]

    def run_raw(self, values: Sequence[float]) -> Dict[int, int]:
        """Evaluate every node; returns node id to raw value."""
        frac = self.frac_bits
        rounding = self.schedule.rounding
        saturate = self.schedule.overflow == SATURATE
        raw: Dict[int, int] = {}
        for kind, node_id, a, b, constant, low, high in self._program:
            if kind == INPUT:
                value = round_scaled(values[constant], frac, rounding)
            elif kind == SHIFT:
                value = raw[a] << constant
            elif kind == ADD:
                value = raw[a] + raw[b]
            elif kind == SUB:
                value = raw[a] - raw[b]
            elif kind == INT_MUL:
                value = raw[a] * constant
            elif kind == FRAC_MUL:
                value = requantize(raw[a] * constant, 2 * frac, frac,
                                   rounding)
            else:
                value = raw[a]
            if value < low or value > high:
                if not saturate:
                    raise FixedPointOverflow(value, high.bit_length() + 1,
                                             node_id)
                value = low if value < low else high
            raw[node_id] = value
        return raw

    def run(self, values: Sequence[float],
            trace: bool = False) -> SimulationResult:
        """Evaluate one set of non-uniform samples."""
        if len(values) != len(self.graph.inputs):
            raise ValueError(f'Expected {len(self.graph.inputs)} samples, '
                             f'got {len(values)}')
        raw = self.run_raw(values)
        coefficients = [0.0] * self.graph.n
        raw_outputs = {}
        scales = {}
        for port, node_id, scale in self._outputs:
            raw_outputs[port] = raw[node_id]
            scales[port] = scale
            coefficients[port] = math.ldexp(raw[node_id], -self.frac_bits) \
                / scale
        return SimulationResult(
            SpectralCoefficients(coefficients, has_dc=self.graph.has_dc),
            raw_outputs, scales, self.frac_bits, raw if trace else None
        )


def simulate_detailed(graph: ArchitectureGraph, samples: NonUniformSamples,
                      schedule: QuantizationSchedule,
                      trace: bool = False) -> SimulationResult:
    """Like :func:`simulate`, also returning raw outputs and a node trace."""
    return Simulator(graph, schedule).run(samples.values.tolist(), trace)


def simulate(graph: ArchitectureGraph, samples: NonUniformSamples,
             schedule: QuantizationSchedule) -> SpectralCoefficients:
    """
    Evaluate a graph bit-accurately on one set of samples.

    Inputs are quantized to ``L - 1`` fractional bits with the schedule's
    rounding mode. Additions, subtractions, shifts and integer multiplies
    are exact; real constants are rounded to nearest at ``L - 1`` fractional
    bits and each product is requantized back to ``L - 1`` fractional bits.
    Every node value is checked against its ``L + ΔL``-bit range.

    Parameters
    ----------
    graph : :class:`.graph.ArchitectureGraph`
    samples : :class:`.sampling.NonUniformSamples`
    schedule : :class:`.schedule.QuantizationSchedule`

    Returns
    -------
    :class:`.core.SpectralCoefficients`
        ``V_0`` is zero for architectures that do not produce it.

    Raises
    ------
    :class:`.fixedpoint.FixedPointOverflow`
        If a node leaves its range and the schedule's policy is ``'error'``.

    """
    return simulate_detailed(graph, samples, schedule).coefficients
