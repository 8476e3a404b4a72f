"""Tests for :mod:`.arch_sim.graph` and :mod:`.arch_sim.schedule`."""

from unittest import TestCase
import json

import numpy as np

from ..arch_sim import graph as g
from ..arch_sim import schedule as s
from ..core import REFERENCE_S


class TestComplexity(TestCase):
    """Operation counts of the three architectures."""

    def test_null_mean(self):
        """The null-mean architecture needs no multipliers."""
        report = g.count_complexity(g.build_arch1_graph())
        self.assertEqual(report.multipliers, 0)
        self.assertEqual(report.two_input_adders, 36)
        self.assertEqual(report.breakdown[g.STAGE_ACCUMULATE]['adders'], 12)
        self.assertEqual(report.breakdown[g.STAGE_SCALE]['adders'], 16)
        self.assertEqual(report.breakdown[g.STAGE_MOEBIUS]['adders'], 8,
                         'One adder per non-zero off-diagonal entry of Mo')

    def test_mertens(self):
        """Mean recovery and the DC output need eleven multipliers."""
        report = g.count_complexity(g.build_arch2_graph())
        self.assertEqual(report.multipliers, 11)
        self.assertEqual(report.two_input_adders, 54)

    def test_subtract(self):
        """Centring the inputs first costs one more adder."""
        subtract = g.count_complexity(g.build_subtract_graph())
        mertens = g.count_complexity(g.build_arch2_graph())
        self.assertEqual(subtract.multipliers, 11)
        self.assertEqual(subtract.two_input_adders, 55)
        self.assertGreater(subtract.two_input_adders,
                           mertens.two_input_adders)


class TestStructure(TestCase):
    """Shape of the graphs."""

    def test_operands_precede(self):
        """Every operand is defined before it is read."""
        for arch in g.ARCHITECTURES:
            graph = g.build_graph(arch)
            seen = set()
            for node in graph.nodes:
                self.assertTrue(set(node.operands) <= seen)
                seen.add(node.node_id)

    def test_ports(self):
        """Ten inputs; seven or eight outputs."""
        one = g.build_arch1_graph()
        two = g.build_arch2_graph()
        self.assertEqual([n.port for n in one.inputs], list(range(10)))
        self.assertEqual([n.port for n in one.outputs], list(range(1, 8)))
        self.assertEqual([n.port for n in two.outputs], list(range(8)))
        self.assertFalse(one.has_dc)
        self.assertTrue(two.has_dc)
        for node in one.outputs:
            self.assertEqual(node.scale, 210)

    def test_no_correction_for_k3(self):
        """Channel 3 leaves the Möbius stage uncorrected."""
        graph = g.build_arch2_graph()
        output = [n for n in graph.outputs if n.port == 3][0]
        self.assertEqual(graph.node(output.operands[0]).stage,
                         g.STAGE_MOEBIUS)

    def test_channel_weights(self):
        """The k = 7 sum is scaled by 60, so taps weigh 60 and 120."""
        graph = g.build_arch1_graph()
        scaled = [n for n in graph.nodes if n.stage == g.STAGE_SCALE
                  and n.label == '420·S_7'][0]
        gains = g.node_gains(graph)[scaled.node_id]
        np.testing.assert_array_equal(gains,
                                      60 * np.array(REFERENCE_S[6]))

    def test_first_channel(self):
        """The k = 1 channel is a single tap times 420."""
        graph = g.build_arch1_graph()
        scaled = [n for n in graph.nodes if n.label == '420·S_1'][0]
        self.assertEqual(scaled.kind, g.INT_MUL)
        self.assertEqual(scaled.constant, 420)
        self.assertEqual(graph.node(scaled.operands[0]).kind, g.INPUT)

    def test_invalid(self):
        """Forward references and unknown kinds are rejected."""
        with self.assertRaises(g.GraphError):
            g.ArchitectureGraph('I', 8, (g.Node(1, g.ADD, (2, 3)),))
        with self.assertRaises(g.GraphError):
            g.ArchitectureGraph('I', 8, (g.Node(1, 'mystery'),))
        with self.assertRaises(ValueError):
            g.build_graph('III')

    def test_json(self):
        """The node list is serializable and complete."""
        graph = g.build_arch2_graph()
        payload = json.loads(json.dumps(g.graph_to_json(graph)))
        self.assertEqual(payload['arch'], 'II')
        self.assertEqual([n['id'] for n in payload['nodes']],
                         list(graph.node_ids))


class TestSchedule(TestCase):
    """Word-length schedules."""

    def test_defaults(self):
        """The type defaults to truncation; shipped schedules round."""
        self.assertEqual(s.QuantizationSchedule(8).rounding, 'truncate')
        schedule = s.default_schedule('II', 8)
        self.assertEqual(schedule.rounding, 'round-half-up')
        self.assertEqual(schedule.overflow, 'error')
        self.assertTrue(schedule.covers(g.build_arch2_graph()))

    def test_stage_floor(self):
        """Default headroom is never below the stage allocation."""
        graph = g.build_arch1_graph()
        schedule = s.default_schedule(graph, 8)
        for node in graph.nodes:
            if node.stage in s.STAGE_HEADROOM:
                self.assertGreaterEqual(schedule.deltas[node.node_id],
                                        s.STAGE_HEADROOM[node.stage])

    def test_derived_bounds(self):
        """Derived headroom covers the node's worst case."""
        graph = g.build_arch1_graph()
        bound = s.default_sample_bound()
        schedule = s.derive_schedule(graph, 16)
        for node_id, form in g.node_gains(graph).items():
            worst = float(np.sum(np.abs(form))) * bound
            self.assertLess(worst, 2.0 ** schedule.deltas[node_id])

    def test_headroom_for(self):
        """Smallest power of two strictly above the bound."""
        self.assertEqual(s.headroom_for(0.5), 0)
        self.assertEqual(s.headroom_for(1.0), 1)
        self.assertEqual(s.headroom_for(3.9), 2)
        self.assertEqual(s.headroom_for(4.0), 3)

    def test_validation(self):
        """Word-lengths, headroom and modes are checked."""
        with self.assertRaises(ValueError):
            s.QuantizationSchedule(1)
        with self.assertRaises(ValueError):
            s.QuantizationSchedule(8, {1: -1})
        with self.assertRaises(ValueError):
            s.QuantizationSchedule(8, rounding='stochastic')
        with self.assertRaises(ValueError):
            s.QuantizationSchedule(8).total_bits(1)

    def test_json(self):
        """Schedules survive their JSON description."""
        schedule = s.default_schedule('I', 12)
        text = json.dumps(s.schedule_to_json(schedule))
        again = s.schedule_from_json(json.loads(text))
        self.assertEqual(again, schedule)
        self.assertEqual(json.dumps(s.schedule_to_json(again)), text)

    def test_bad_json(self):
        """Malformed descriptions raise ValueError."""
        with self.assertRaises(ValueError):
            s.schedule_from_json({'deltas': {}})
        with self.assertRaises(ValueError):
            s.schedule_from_json({'base_l': 8, 'deltas': {'x': 1}})

    def test_other_word_length(self):
        """Only the word-length changes."""
        schedule = s.default_schedule('I', 8).with_base_l(20)
        self.assertEqual(schedule.base_l, 20)
        self.assertEqual(schedule.frac_bits, 19)
