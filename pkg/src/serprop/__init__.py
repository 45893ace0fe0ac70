"""Analytical soft-error-rate estimation for gate-level circuits.

Parse a BENCH netlist, compute signal probabilities, propagate a
four-valued error distribution from any site to the capture points in one
topological pass, and compose per-net SER reports.  Monte Carlo and
exhaustive fault injection provide the reference measurements.
"""

from .epp import (AND_TABLE, ERROR_SEED, OR_TABLE, XOR_TABLE, EppReport,
                  FourValueDist, analyze_all, analyze_site, epp_of,
                  gate_rule, lift_off_path, propagate_from_site)
from .faultsim import (SimEppResult, exhaustive_epp, mc_epp, sample_vectors,
                       simulate_pair, simulate_vector)
from .gen import has_reconvergence, random_dag, random_tree
from .netlist import (ArityError, BenchSyntaxError, ConeInfo, CycleError,
                      GateKind, MultipleDriverError, Netlist, NetlistError,
                      UndefinedSignalError, UnsupportedGateError,
                      ValidationError, emit_bench, fanout_cone, parse_bench,
                      structurally_equal, topo_order)
from .report import (SerConfig, SerReport, SerRow, build_report, node_ser,
                     report_to_csv, report_to_json)
from .sigprob import SpMap, sp_exact, sp_independent, sp_montecarlo

__version__ = "0.1.0"

__all__ = [
    "AND_TABLE", "ERROR_SEED", "OR_TABLE", "XOR_TABLE",
    "ArityError", "BenchSyntaxError", "ConeInfo", "CycleError", "EppReport",
    "FourValueDist", "GateKind", "MultipleDriverError", "Netlist",
    "NetlistError", "SerConfig", "SerReport", "SerRow", "SimEppResult",
    "SpMap", "UndefinedSignalError", "UnsupportedGateError",
    "ValidationError", "analyze_all", "analyze_site", "build_report",
    "emit_bench", "epp_of", "exhaustive_epp", "fanout_cone", "gate_rule",
    "has_reconvergence", "lift_off_path", "mc_epp", "node_ser", "parse_bench",
    "propagate_from_site", "random_dag", "random_tree", "report_to_csv",
    "report_to_json", "sample_vectors", "simulate_pair", "simulate_vector",
    "sp_exact", "sp_independent", "sp_montecarlo", "structurally_equal",
    "topo_order",
]
