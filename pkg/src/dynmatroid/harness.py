"""Experiment layer: replay streams, verify per operation, report CSV.

A run drives one algorithm over one stream and records, per operation,
the value of the maintained solution, the algorithm's oracle-call deltas
and (optionally) the brute-force optimum with the resulting guarantee
margin. Measurement never pollutes the algorithm: reporting and
verification use a separate metering pair of oracles.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

from .baselines import BruteForceBudgetError, DynamicGreedy, DynamicSwapping, brute_force_opt
from .core import Operation, StreamError
from .manager import InstanceManager
from .oracles import OracleCounters, Universe
from .streams import validate_stream
from .swapping import SwapState

ALGORITHMS = ("dynamic", "dynamic-unfiltered", "swapping",
              "dynamic-swapping", "dynamic-greedy")

CSV_HEADER = ("op_index", "op_kind", "element_id", "f_best", "opt", "margin",
              "value_calls", "independence_calls")

COMPARE_HEADER = ("algorithm", "operations", "value_calls", "independence_calls",
                  "total_calls", "f_final")

BRUTE_FORCE_MAX_ALIVE = 20
BRUTE_FORCE_MAX_RANK = 5


def approx_factor(algorithm: str, epsilon: Optional[float]) -> float:
    """Guarantee factor the verifier holds each algorithm to."""
    if algorithm == "dynamic":
        return 4.0 + 6.0 * epsilon
    if algorithm == "dynamic-greedy":
        return 2.0
    return 4.0


class _ManagerAlgo:
    def __init__(self, universe: Universe, epsilon, seed):
        self._mgr = InstanceManager(universe.suite(), epsilon=epsilon, seed=seed)

    def apply(self, op: Operation) -> None:
        self._mgr.apply(op)

    def solution_elements(self):
        return self._mgr.best_solution().solution.member_elements()

    def counters(self) -> OracleCounters:
        return self._mgr.total_counters()


class _SwappingAlgo:
    def __init__(self, universe: Universe, epsilon, seed):
        self._suite = universe.suite()
        self._state = SwapState(self._suite)

    def apply(self, op: Operation) -> None:
        if op.kind != "insert":
            raise StreamError("the swapping algorithm handles insertion-only streams")
        self._state.process(op.element)

    def solution_elements(self):
        return self._state.sol.member_elements()

    def counters(self) -> OracleCounters:
        return self._suite.counters_snapshot()


class _BaselineAlgo:
    def __init__(self, universe: Universe, epsilon, seed, cls):
        self._suite = universe.suite()
        self._algo = cls(self._suite)

    def apply(self, op: Operation) -> None:
        self._algo.apply(op)

    def solution_elements(self):
        sol = self._algo.solution
        return sol.member_elements() if hasattr(sol, "member_elements") else list(sol)

    def counters(self) -> OracleCounters:
        return self._suite.counters_snapshot()


def make_algorithm(name: str, universe: Universe, epsilon: Optional[float] = None,
                   seed: int = 0):
    """Build a fresh, independently counted runner for one algorithm."""
    if name == "dynamic":
        if epsilon is None:
            raise ValueError("the 'dynamic' algorithm requires --epsilon")
        return _ManagerAlgo(universe, epsilon, seed)
    if name == "dynamic-unfiltered":
        return _ManagerAlgo(universe, None, seed)
    if name == "swapping":
        return _SwappingAlgo(universe, epsilon, seed)
    if name == "dynamic-swapping":
        return _BaselineAlgo(universe, epsilon, seed, DynamicSwapping)
    if name == "dynamic-greedy":
        return _BaselineAlgo(universe, epsilon, seed, DynamicGreedy)
    raise ValueError(f"unknown algorithm {name!r}; choose from {ALGORITHMS}")


@dataclass
class Row:
    op_index: int
    op_kind: str
    element_id: int
    f_best: float
    opt: Optional[float]
    margin: Optional[float]
    value_calls: int
    independence_calls: int


@dataclass
class ExperimentReport:
    algorithm: str
    rows: list[Row]

    @property
    def total_value_calls(self) -> int:
        return sum(r.value_calls for r in self.rows)

    @property
    def total_independence_calls(self) -> int:
        return sum(r.independence_calls for r in self.rows)

    @property
    def total_calls(self) -> int:
        return self.total_value_calls + self.total_independence_calls

    @property
    def amortized_calls(self) -> float:
        return self.total_calls / len(self.rows) if self.rows else 0.0

    @property
    def min_margin(self) -> Optional[float]:
        margins = [r.margin for r in self.rows if r.margin is not None]
        return min(margins) if margins else None

    @property
    def verified_ok(self) -> bool:
        worst = self.min_margin
        return worst is None or worst >= 1.0

    @property
    def final_value(self) -> float:
        return self.rows[-1].f_best if self.rows else 0.0


def run(universe: Universe, ops: list[Operation], algorithm: str, *,
        epsilon: Optional[float] = None, seed: int = 0,
        verify: bool = False) -> ExperimentReport:
    """Replay a stream through one algorithm, one report row per op.

    With ``verify`` the brute-force optimum is computed after every
    operation and the margin column records factor * f / OPT, which stays
    at or above 1 exactly when the guarantee holds. Instances beyond the
    brute-force budget are refused.
    """
    validate_stream(ops, universe)
    algo = make_algorithm(algorithm, universe, epsilon=epsilon, seed=seed)
    meter = universe.suite()
    if verify and meter.matroid.rank > BRUTE_FORCE_MAX_RANK:
        raise BruteForceBudgetError(
            f"verification needs rank <= {BRUTE_FORCE_MAX_RANK}, got {meter.matroid.rank}")
    factor = approx_factor(algorithm, epsilon)

    alive: dict[int, object] = {}
    rows: list[Row] = []
    before = algo.counters()
    for i, op in enumerate(ops, 1):
        algo.apply(op)
        after = algo.counters()
        delta = after - before
        before = after

        if op.kind == "insert":
            alive[op.element_id] = op.element
        else:
            alive.pop(op.element_id, None)

        f_best = meter.fn.value(algo.solution_elements())
        opt = margin = None
        if verify:
            if len(alive) > BRUTE_FORCE_MAX_ALIVE:
                raise BruteForceBudgetError(
                    f"op {i}: {len(alive)} alive elements exceed the brute-force budget")
            _, opt = brute_force_opt(alive.values(), meter.matroid, meter.fn)
            margin = factor * f_best / opt if opt > 0 else 1.0
        rows.append(Row(i, op.kind, op.element_id, f_best, opt, margin,
                        delta.value_calls, delta.independence_calls))
    return ExperimentReport(algorithm, rows)


def compare(universe: Universe, ops: list[Operation], algorithms: list[str], *,
            epsilon: Optional[float] = None, seed: int = 0) -> list[dict]:
    """Run several algorithms on the same stream; one summary per algorithm."""
    summaries = []
    for name in algorithms:
        report = run(universe, ops, name, epsilon=epsilon, seed=seed)
        summaries.append({
            "algorithm": name,
            "operations": len(report.rows),
            "value_calls": report.total_value_calls,
            "independence_calls": report.total_independence_calls,
            "total_calls": report.total_calls,
            "f_final": report.final_value,
        })
    return summaries


# ---------------------------------------------------------------------------
# CSV contract
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    return repr(x) if isinstance(x, float) else str(x)


def _parse_number(s: str):
    if s == "":
        return None
    try:
        return int(s)
    except ValueError:
        return float(s)


def write_report_csv(report: ExperimentReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in report.rows:
            writer.writerow([_fmt(r.op_index), r.op_kind, _fmt(r.element_id),
                             _fmt(r.f_best), _fmt(r.opt), _fmt(r.margin),
                             _fmt(r.value_calls), _fmt(r.independence_calls)])


def read_report_csv(path) -> list[Row]:
    """Parse a report CSV back into rows; numbers round-trip exactly."""
    rows: list[Row] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise StreamError(f"unexpected report header {header!r}")
        for rec in reader:
            rows.append(Row(int(rec[0]), rec[1], int(rec[2]), _parse_number(rec[3]),
                            _parse_number(rec[4]), _parse_number(rec[5]),
                            int(rec[6]), int(rec[7])))
    return rows


def write_compare_csv(summaries: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COMPARE_HEADER)
        for s in summaries:
            writer.writerow([_fmt(s[k]) for k in COMPARE_HEADER])
