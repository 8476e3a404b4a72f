"""
Dataflow graphs of the fixed-point transform architectures.

Each architecture is a directed acyclic graph of primitive nodes. Node ids
follow creation order, which is also a valid evaluation order: inputs first,
then whatever each builder emits stage by stage. Outputs carry the scale
their raw value must be divided by to give a coefficient.

Three architectures are provided:

``I``
    Null-mean transform. Sums the taps of each frequency, scales each sum by
    ``lcm(1..n-1)/k`` with shift-and-add constant multipliers, and combines
    the results with Möbius signs. ``V_0`` is not produced.
``II``
    ``I`` plus the mean-recovery block and the Mertens correction of each
    output, and ``V_0 = √n·v̄``.
``S``
    Recovers the mean, subtracts it from every sample, then runs ``I`` on
    the centred samples. ``V_0 = √n·v̄``.
"""

from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple
from dataclasses import dataclass, field
from functools import reduce
import math

import numpy as np

from ..numtheory import mertens, moebius
from ..sampling import SamplingGrid, build_grid, mean_weights
from .csd import csd_adders, csd_shifts

import logging
logger = logging.getLogger(__name__)
logger.propagate = False

INPUT = 'input'
SHIFT = 'shift'
ADD = 'add'
SUB = 'sub'
INT_MUL = 'int-mul'
FRAC_MUL = 'frac-mul'
OUTPUT = 'output'
NODE_KINDS = (INPUT, SHIFT, ADD, SUB, INT_MUL, FRAC_MUL, OUTPUT)

_ARITY = {INPUT: 0, SHIFT: 1, ADD: 2, SUB: 2, INT_MUL: 1, FRAC_MUL: 1,
          OUTPUT: 1}

# Stage labels, in the order the builders emit them.
STAGE_INPUT = 'input'
STAGE_MEAN = 'mean'
STAGE_MEAN_SUM = 'mean-sum'
STAGE_CENTRE = 'centre'
STAGE_TAPS = 'taps'
STAGE_ACCUMULATE = 'accumulate'
STAGE_SCALE = 'scale'
STAGE_MOEBIUS = 'moebius'
STAGE_CORRECTION = 'correction'
STAGE_DC = 'dc'
STAGE_OUTPUT = 'output'

ARCHITECTURES = ('I', 'II', 'S')


class GraphError(ValueError):
    """An architecture graph is malformed."""


@dataclass(frozen=True)
class Node:
    """A single primitive operation."""

    node_id: int
    kind: str

    operands: Tuple[int, ...] = ()
    """Ids of the operand nodes; ``SUB`` computes first minus second."""

    constant: Any = None
    """Shift amount, integer multiplier or real multiplier, by kind."""

    port: Optional[int] = None
    """Sample index of an ``INPUT``, coefficient index of an ``OUTPUT``."""

    scale: Optional[float] = None
    """For an ``OUTPUT``, the factor between its value and the coefficient."""

    stage: str = ''
    label: str = ''


@dataclass(frozen=True, eq=False)
class ArchitectureGraph:
    """An evaluable dataflow graph for one architecture."""

    arch: str
    n: int
    nodes: Tuple[Node, ...]
    _by_id: Dict[int, Node] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        """Check ids, operand order, arity and ports."""
        by_id: Dict[int, Node] = {}
        for node in self.nodes:
            if node.kind not in NODE_KINDS:
                raise GraphError(f'Node {node.node_id}: no such kind '
                                 f'{node.kind}')
            if node.node_id in by_id:
                raise GraphError(f'Duplicate node id {node.node_id}')
            if len(node.operands) != _ARITY[node.kind]:
                raise GraphError(f'Node {node.node_id} ({node.kind}) takes '
                                 f'{_ARITY[node.kind]} operands')
            for operand in node.operands:
                if operand not in by_id:
                    raise GraphError(f'Node {node.node_id} reads node '
                                     f'{operand} before it is defined')
            if node.kind == SHIFT and (not isinstance(node.constant, int)
                                       or node.constant < 0):
                raise GraphError(f'Node {node.node_id}: bad shift amount')
            if node.kind == INT_MUL and not isinstance(node.constant, int):
                raise GraphError(f'Node {node.node_id}: multiplier must be '
                                 f'an integer')
            if node.kind in (INPUT, OUTPUT) and node.port is None:
                raise GraphError(f'Node {node.node_id} needs a port')
            if node.kind == OUTPUT and not node.scale:
                raise GraphError(f'Output {node.node_id} needs a scale')
            by_id[node.node_id] = node
        object.__setattr__(self, '_by_id', by_id)

    def node(self, node_id: int) -> Node:
        """Get a node by id."""
        try:
            return self._by_id[node_id]
        except KeyError as e:
            raise GraphError(f'No node {node_id}') from e

    @property
    def node_ids(self) -> Tuple[int, ...]:
        """All ids in evaluation order."""
        return tuple(node.node_id for node in self.nodes)

    @property
    def inputs(self) -> Tuple[Node, ...]:
        """Input nodes, in sample order."""
        return tuple(sorted((n for n in self.nodes if n.kind == INPUT),
                            key=lambda n: n.port))

    @property
    def outputs(self) -> Tuple[Node, ...]:
        """Output nodes, in coefficient order."""
        return tuple(sorted((n for n in self.nodes if n.kind == OUTPUT),
                            key=lambda n: n.port))

    @property
    def has_dc(self) -> bool:
        """Whether the graph produces ``V_0``."""
        return any(node.port == 0 for node in self.outputs)


class _Builder:
    """Appends nodes with sequential ids."""

    def __init__(self) -> None:
        self.nodes: List[Node] = []

    def _append(self, kind: str, operands: Tuple[int, ...] = (),
                **kwargs: Any) -> int:
        node_id = len(self.nodes) + 1
        self.nodes.append(Node(node_id, kind, operands, **kwargs))
        return node_id

    def input(self, port: int) -> int:
        return self._append(INPUT, port=port, stage=STAGE_INPUT,
                            label=f'v_r[{port}]')

    def shift(self, a: int, amount: int, stage: str, label: str = '') -> int:
        return self._append(SHIFT, (a,), constant=amount, stage=stage,
                            label=label)

    def add(self, a: int, b: int, stage: str, label: str = '') -> int:
        return self._append(ADD, (a, b), stage=stage, label=label)

    def sub(self, a: int, b: int, stage: str, label: str = '') -> int:
        return self._append(SUB, (a, b), stage=stage, label=label)

    def int_mul(self, a: int, constant: int, stage: str,
                label: str = '') -> int:
        return self._append(INT_MUL, (a,), constant=constant, stage=stage,
                            label=label)

    def frac_mul(self, a: int, constant: float, stage: str,
                 label: str = '') -> int:
        return self._append(FRAC_MUL, (a,), constant=constant, stage=stage,
                            label=label)

    def output(self, a: int, port: int, scale: float) -> int:
        return self._append(OUTPUT, (a,), port=port, scale=scale,
                            stage=STAGE_OUTPUT, label=f'V[{port}]')

    def multiple(self, a: int, factor: int, stage: str,
                 label: str = '') -> int:
        """``factor·a`` for a positive integer factor."""
        if factor == 1:
            return a
        if factor & (factor - 1) == 0:
            return self.shift(a, factor.bit_length() - 1, stage, label)
        return self.int_mul(a, factor, stage, label)

    def tree_sum(self, terms: List[int], stage: str, label: str) -> int:
        """Balanced pairwise adder tree; an odd term rides up a level."""
        level = list(terms)
        while len(level) > 1:
            paired = [self.add(a, b, stage, label)
                      for a, b in zip(level[::2], level[1::2])]
            if len(level) % 2:
                paired.append(level[-1])
            level = paired
        return level[0]


def channel_multiplier(n: int) -> int:
    """``lcm(1..n-1)``, the common multiple that clears every ``1/k``."""
    return reduce(lambda a, b: a * b // math.gcd(a, b), range(1, n), 1)


def output_scale(n: int) -> float:
    """Factor between an AC output of the null-mean block and ``V_k``."""
    return channel_multiplier(n) * math.sqrt(2 / n)


def _null_mean_block(builder: _Builder, grid: SamplingGrid,
                     samples: List[int]) -> Dict[int, int]:
    """
    Emit taps, per-frequency sums, scaling and Möbius combination.

    Returns
    -------
    dict
        ``k`` to the node holding ``lcm·Σ μ(l)·S_{kl}``, which is
        ``output_scale(n)·V_k`` for a zero-mean signal.

    """
    n = grid.n
    lcm = channel_multiplier(n)
    taps: Dict[int, List[int]] = {}
    for k in range(1, n):
        taps[k] = []
        for j, node in enumerate(samples):
            count = grid.multiplicity.get((k, j), 0)
            if count:
                taps[k].append(builder.multiple(node, count, STAGE_TAPS,
                                                f'{count}·v_r[{j}]'))
    sums = {k: builder.tree_sum(taps[k], STAGE_ACCUMULATE, f'Σ_{k}')
            for k in range(1, n)}
    scaled = {k: builder.multiple(sums[k], lcm // k, STAGE_SCALE,
                                  f'{lcm}·S_{k}')
              for k in range(1, n)}
    combined = {}
    for k in range(1, n):
        acc = scaled[k]
        for l in range(2, (n - 1) // k + 1):
            mu = moebius(l)
            if mu > 0:
                acc = builder.add(acc, scaled[k * l], STAGE_MOEBIUS)
            elif mu < 0:
                acc = builder.sub(acc, scaled[k * l], STAGE_MOEBIUS)
        combined[k] = acc
    return combined


def _mean_block(builder: _Builder, grid: SamplingGrid,
                samples: List[int]) -> int:
    """Emit the weighted sum that recovers ``v̄``."""
    weights = mean_weights(grid)
    products = [builder.frac_mul(node, weight, STAGE_MEAN, f'w_{j}·v_r[{j}]')
                for j, (node, weight) in enumerate(zip(samples, weights))]
    return builder.tree_sum(products, STAGE_MEAN_SUM, 'v̄')


def build_arch1_graph(grid: Optional[SamplingGrid] = None
                      ) -> ArchitectureGraph:
    """
    Build the null-mean architecture.

    Outputs ``k = 1..n-1`` are at scale :func:`output_scale` (210 for
    ``n = 8``); there is no ``V_0`` output.
    """
    grid = grid or build_grid()
    builder = _Builder()
    samples = [builder.input(j) for j in range(grid.size)]
    combined = _null_mean_block(builder, grid, samples)
    scale = output_scale(grid.n)
    for k in range(1, grid.n):
        builder.output(combined[k], k, scale)
    return ArchitectureGraph('I', grid.n, tuple(builder.nodes))


def build_arch2_graph(grid: Optional[SamplingGrid] = None
                      ) -> ArchitectureGraph:
    """
    Build the Mertens-corrected architecture.

    Each AC output gets ``-lcm·√(2/n)·√(n/2)·M(⌊(n-1)/k⌋)·v̄`` added at the
    output scale, that is ``-lcm·M·v̄``. The multiple ``lcm·v̄`` is formed
    once and shifted where ``|M|`` is a power of two. ``V_0`` is produced
    by one real multiplier at scale 1.
    """
    grid = grid or build_grid()
    n = grid.n
    builder = _Builder()
    samples = [builder.input(j) for j in range(grid.size)]
    combined = _null_mean_block(builder, grid, samples)
    mean = _mean_block(builder, grid, samples)
    base = builder.int_mul(mean, channel_multiplier(n), STAGE_CORRECTION,
                           f'{channel_multiplier(n)}·v̄')
    multiples: Dict[int, int] = {}
    corrected = {}
    for k in range(1, n):
        weight = -mertens((n - 1) // k)
        if weight == 0:
            corrected[k] = combined[k]
            continue
        size = abs(weight)
        if size not in multiples:
            multiples[size] = builder.multiple(base, size, STAGE_CORRECTION)
        if weight > 0:
            corrected[k] = builder.add(combined[k], multiples[size],
                                       STAGE_CORRECTION)
        else:
            corrected[k] = builder.sub(combined[k], multiples[size],
                                       STAGE_CORRECTION)
    dc = builder.frac_mul(mean, math.sqrt(n), STAGE_DC, '√n·v̄')
    scale = output_scale(n)
    builder.output(dc, 0, 1.0)
    for k in range(1, n):
        builder.output(corrected[k], k, scale)
    return ArchitectureGraph('II', n, tuple(builder.nodes))


def build_subtract_graph(grid: Optional[SamplingGrid] = None
                         ) -> ArchitectureGraph:
    """Build the mean-subtraction architecture: centre, then null-mean."""
    grid = grid or build_grid()
    n = grid.n
    builder = _Builder()
    samples = [builder.input(j) for j in range(grid.size)]
    mean = _mean_block(builder, grid, samples)
    centred = [builder.sub(node, mean, STAGE_CENTRE, f'v_r[{j}] - v̄')
               for j, node in enumerate(samples)]
    combined = _null_mean_block(builder, grid, centred)
    dc = builder.frac_mul(mean, math.sqrt(n), STAGE_DC, '√n·v̄')
    scale = output_scale(n)
    builder.output(dc, 0, 1.0)
    for k in range(1, n):
        builder.output(combined[k], k, scale)
    return ArchitectureGraph('S', n, tuple(builder.nodes))


_BUILDERS: Mapping[str, Callable[[Optional[SamplingGrid]],
                                 ArchitectureGraph]] = {
    'I': build_arch1_graph,
    'II': build_arch2_graph,
    'S': build_subtract_graph,
}


def build_graph(arch: str, grid: Optional[SamplingGrid] = None
                ) -> ArchitectureGraph:
    """Build the graph for an architecture name (``I``, ``II`` or ``S``)."""
    try:
        builder = _BUILDERS[arch]
    except KeyError as e:
        raise ValueError(f'No such architecture: {arch}') from e
    graph = builder(grid)
    logger.debug('Built architecture %s with %s nodes', arch,
                 len(graph.nodes))
    return graph


@dataclass(frozen=True)
class ComplexityReport:
    """Hardware cost of an architecture graph."""

    multipliers: int
    """Real (non-integer) constant multipliers."""

    two_input_adders: int
    """Adders and subtractors, including those inside integer multipliers."""

    shifts: int
    """Shift operations, including those inside integer multipliers."""

    breakdown: Dict[str, Dict[str, int]] = field(default_factory=dict)
    """The same three counts per stage."""


def count_complexity(graph: ArchitectureGraph) -> ComplexityReport:
    """
    Count multipliers, two-input adders and shifts.

    Integer multipliers are costed as canonical signed-digit shift-and-add
    networks (:func:`.csd.csd_adders`); real multipliers count once each.
    """
    breakdown: Dict[str, Dict[str, int]] = {}
    for node in graph.nodes:
        if node.kind in (INPUT, OUTPUT):
            continue
        counts = breakdown.setdefault(
            node.stage, {'multipliers': 0, 'adders': 0, 'shifts': 0}
        )
        if node.kind in (ADD, SUB):
            counts['adders'] += 1
        elif node.kind == SHIFT:
            counts['shifts'] += 1
        elif node.kind == INT_MUL:
            counts['adders'] += csd_adders(node.constant)
            counts['shifts'] += csd_shifts(node.constant)
        elif node.kind == FRAC_MUL:
            counts['multipliers'] += 1
    return ComplexityReport(
        multipliers=sum(c['multipliers'] for c in breakdown.values()),
        two_input_adders=sum(c['adders'] for c in breakdown.values()),
        shifts=sum(c['shifts'] for c in breakdown.values()),
        breakdown=breakdown
    )


def node_gains(graph: ArchitectureGraph) -> Dict[int, np.ndarray]:
    """
    Express every node as a linear form in the input samples.

    Returns
    -------
    dict
        Node id to the vector of coefficients, in real units, applied to
        each input sample.

    """
    width = len(graph.inputs)
    forms: Dict[int, np.ndarray] = {}
    for node in graph.nodes:
        if node.kind == INPUT:
            form = np.zeros(width)
            form[node.port] = 1.0
        elif node.kind == SHIFT:
            form = forms[node.operands[0]] * float(1 << node.constant)
        elif node.kind == ADD:
            form = forms[node.operands[0]] + forms[node.operands[1]]
        elif node.kind == SUB:
            form = forms[node.operands[0]] - forms[node.operands[1]]
        elif node.kind in (INT_MUL, FRAC_MUL):
            form = forms[node.operands[0]] * float(node.constant)
        else:
            form = forms[node.operands[0]]
        forms[node.node_id] = form
    return forms


def graph_to_json(graph: ArchitectureGraph) -> Dict[str, Any]:
    """Describe a graph as JSON-ready data."""
    nodes = []
    for node in graph.nodes:
        entry: Dict[str, Any] = {'id': node.node_id, 'kind': node.kind,
                                 'operands': list(node.operands),
                                 'stage': node.stage}
        if node.constant is not None:
            entry['constant'] = node.constant
        if node.port is not None:
            entry['port'] = node.port
        if node.scale is not None:
            entry['scale'] = node.scale
        if node.label:
            entry['label'] = node.label
        nodes.append(entry)
    return {'arch': graph.arch, 'n': graph.n, 'nodes': nodes}
