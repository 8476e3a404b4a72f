"""Fixed-point dataflow architectures for the 8-point transform."""

from .fixedpoint import (FixedPointValue, FixedPointOverflow, quantize,
                         requantize, TRUNCATE, ROUND_HALF_UP, ERROR,
                         SATURATE)
from .graph import (ArchitectureGraph, ComplexityReport, Node, build_graph,
                    build_arch1_graph, build_arch2_graph,
                    build_subtract_graph, count_complexity, graph_to_json,
                    node_gains)
from .schedule import (QuantizationSchedule, default_schedule,
                       derive_schedule, schedule_from_json, schedule_to_json)
from .simulator import (SimulationResult, Simulator, simulate,
                        simulate_detailed)
