"""Fully dynamic monotone submodular maximization under a matroid constraint.

Library surface:

- :mod:`dynmatroid.oracles` — universe definitions, counted value and
  independence oracles.
- :mod:`dynmatroid.solution` — weight-sorted solutions and swap finders.
- :mod:`dynmatroid.swapping` — insertion-only streaming algorithm.
- :mod:`dynmatroid.core` — the leveled fully dynamic structure.
- :mod:`dynmatroid.manager` — threshold copies plus capacity doubling;
  the main entry point for dynamic streams.
- :mod:`dynmatroid.baselines` — rebuild-from-scratch baselines and the
  brute-force optimum.
- :mod:`dynmatroid.streams` / :mod:`dynmatroid.harness` — generators,
  stream files, experiment runs and CSV reports.
"""

from .baselines import (BruteForceBudgetError, DynamicGreedy, DynamicSwapping,
                        brute_force_opt, lazy_greedy)
from .core import (AuditReport, DynamicStructure, Level, Operation, StreamError,
                   TraceEntry, filter_bounds)
from .manager import BestSolution, CostReport, InstanceManager
from .oracles import (ContractError, Element, FacilityLocation, GraphicMatroid,
                      MatroidOracle, ModularWeights, OracleCounters, OracleError,
                      OracleSuite, PartitionMatroid, UniformMatroid, Universe,
                      UniverseError, ValueOracle, WeightedCoverage)
from .solution import (WeightedSolution, WeightInvariantReport,
                       check_weight_invariants, find_swap_binary, find_swap_linear)
from .swapping import Decision, DecisionKind, SwapState, run_stream

__all__ = [
    "AuditReport", "BestSolution", "BruteForceBudgetError", "ContractError",
    "CostReport", "Decision", "DecisionKind", "DynamicGreedy", "DynamicStructure",
    "DynamicSwapping", "Element", "FacilityLocation", "GraphicMatroid",
    "InstanceManager", "Level", "MatroidOracle", "ModularWeights",
    "OracleCounters", "OracleError", "OracleSuite", "Operation",
    "PartitionMatroid", "StreamError", "SwapState", "TraceEntry",
    "UniformMatroid", "Universe", "UniverseError", "ValueOracle",
    "WeightInvariantReport", "WeightedCoverage", "WeightedSolution",
    "brute_force_opt", "check_weight_invariants", "filter_bounds",
    "find_swap_binary", "find_swap_linear", "lazy_greedy", "run_stream",
]
