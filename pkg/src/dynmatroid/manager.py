"""Top-level fully dynamic API: threshold copies plus capacity doubling.

With a precision parameter epsilon, one dynamic structure runs per value
scale tau = (1+eps)^j and only sees elements whose singleton value lands
in that copy's admission window; the best solution across copies is the
answer after every operation. Without epsilon a single unfiltered
structure runs instead. Stream length need not be known: capacity starts
at 1 and doubles whenever the operation budget is exhausted, rebuilding
every copy and re-inserting the alive elements.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .core import DynamicStructure, Operation, StreamError, filter_bounds
from .oracles import Element, OracleCounters, OracleSuite
from .solution import WeightedSolution


@dataclass(frozen=True)
class BestSolution:
    """Best current solution across copies; ``copy_key`` is the threshold
    exponent j of the winning copy (None for the unfiltered mode or when
    no copy holds anything)."""

    copy_key: Optional[int]
    solution: WeightedSolution
    value: float


@dataclass
class CostReport:
    """Oracle-call accounting over the whole run, replays included."""

    operations: int
    value_calls: int
    independence_calls: int
    per_copy: dict

    @property
    def total_calls(self) -> int:
        return self.value_calls + self.independence_calls

    @property
    def amortized(self) -> float:
        return self.total_calls / self.operations


class InstanceManager:
    """Routes a fully dynamic stream into threshold copies.

    ``epsilon=None`` selects the single-structure unfiltered mode, whose
    cost depends on the spread of the function values; any positive
    epsilon selects the threshold-copy mode with a (4 + O(eps))
    approximation and value-spread-free cost.
    """

    def __init__(self, oracles: OracleSuite, epsilon: Optional[float] = None,
                 seed: int = 0, track_trace: bool = False):
        if epsilon is not None and epsilon <= 0:
            raise ValueError("epsilon must be positive (or None for unfiltered)")
        if epsilon is not None and oracles.matroid.rank < 1:
            raise ValueError("threshold copies need a matroid of rank >= 1")
        self.oracles = oracles
        self.epsilon = epsilon
        self.seed = seed
        self.track_trace = track_trace
        self.k = oracles.matroid.rank
        self.capacity = 1
        self.ops_seen = 0
        self.copies: dict[Optional[int], DynamicStructure] = {}
        # id -> (element, memoized singleton value, routed copy keys)
        self.alive: dict[int, tuple[Element, Optional[float], tuple]] = {}
        self._singletons: dict[int, float] = {}
        self._local = oracles.fork()      # pays the per-insert singleton call
        self._retired = OracleCounters()  # counters of copies torn down at doublings
        self._phase = 0

    # ------------------------------------------------------------------
    # Stream interface
    # ------------------------------------------------------------------

    def apply(self, op: Operation) -> BestSolution:
        """Validate and route one operation, then report the best solution.

        Doubles the capacity first whenever the budget is used up; the
        re-insertions a doubling replays do not count as operations.
        """
        if op.kind == "insert":
            if op.element is None:
                raise StreamError("insert operation carries no element")
            if op.element_id in self.alive:
                raise StreamError(f"insert of already alive element {op.element_id}")
        elif op.kind == "delete":
            if op.element_id not in self.alive:
                raise StreamError(f"delete of element {op.element_id} which is not alive")
        else:
            raise StreamError(f"unknown operation kind {op.kind!r}")

        if self.ops_seen == self.capacity:
            self._rebuild(self.capacity * 2)
        if op.kind == "insert":
            self._route_insert(op.element)
        else:
            self._route_delete(op.element_id)
        self.ops_seen += 1
        return self.best_solution()

    def insert(self, e: Element) -> BestSolution:
        return self.apply(Operation.insert(e))

    def delete(self, eid: int) -> BestSolution:
        return self.apply(Operation.delete(eid))

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def best_solution(self) -> BestSolution:
        """Argmax of the cached top-level values, ties to the smaller key."""
        best = BestSolution(None, WeightedSolution(), 0.0)
        for key in sorted(self.copies, key=lambda j: (j is None, j)):
            sol, val = self.copies[key].current_solution()
            if val > best.value:
                best = BestSolution(key, sol, val)
        return best

    def total_counters(self) -> OracleCounters:
        total = self._retired + self._local.counters_snapshot()
        for ds in self.copies.values():
            total = total + ds.oracles.counters_snapshot()
        return total

    def amortized_cost(self) -> CostReport:
        """Total oracle calls per stream operation, with per-copy detail."""
        if self.ops_seen == 0:
            raise StreamError("no operations applied yet")
        per_copy = {key: ds.oracles.counters_snapshot() for key, ds in self.copies.items()}
        total = self.total_counters()
        return CostReport(self.ops_seen, total.value_calls, total.independence_calls, per_copy)

    # ------------------------------------------------------------------
    # Internals
    # ------------------------------------------------------------------

    def _tau(self, j: int) -> float:
        try:
            return (1.0 + self.epsilon) ** j
        except OverflowError:
            return math.inf

    def _qualifies(self, fe, j: int) -> bool:
        lower, upper = filter_bounds(self.epsilon, self._tau(j), self.k)
        return lower <= fe < upper

    def _qualifying_keys(self, fe) -> tuple:
        """Contiguous range of exponents j whose window contains fe."""
        if fe <= 0:
            return ()
        guess = math.floor(math.log(fe) / math.log(1.0 + self.epsilon))
        center = None
        for j in range(guess - 3, guess + 4):
            if self._qualifies(fe, j):
                center = j
                break
        if center is None:
            return ()
        lo = center
        while self._qualifies(fe, lo - 1):
            lo -= 1
        hi = center
        while self._qualifies(fe, hi + 1):
            hi += 1
        return tuple(range(lo, hi + 1))

    def _copy_seed(self, key: Optional[int]) -> int:
        j = 0 if key is None else key
        return (self.seed * 1_000_003 + self._phase * 8_191 + j * 127 + 17) & 0x7FFFFFFF

    def _ensure_copy(self, key: Optional[int]) -> DynamicStructure:
        ds = self.copies.get(key)
        if ds is None:
            value_filter = None if key is None else (self.epsilon, self._tau(key))
            ds = DynamicStructure(self.capacity, self.oracles.fork(),
                                  seed=self._copy_seed(key), value_filter=value_filter,
                                  track_trace=self.track_trace)
            self.copies[key] = ds
        return ds

    def _route_insert(self, e: Element) -> None:
        if self.epsilon is None:
            fe = None
            keys: tuple = (None,)
        else:
            if e.id not in self._singletons:
                self._singletons[e.id] = self._local.fn.value([e])
            fe = self._singletons[e.id]
            keys = self._qualifying_keys(fe)
        for key in keys:
            accepted = self._ensure_copy(key).insert(e, singleton=fe)
            assert accepted, "routing and copy filter disagree"
        self.alive[e.id] = (e, fe, keys)

    def _route_delete(self, eid: int) -> None:
        _, _, keys = self.alive.pop(eid)
        for key in keys:
            self.copies[key].delete(eid)

    def _rebuild(self, new_capacity: int) -> None:
        """Doubling restart: fresh copies at the new capacity, alive
        elements re-inserted in id order with their memoized singletons."""
        for ds in self.copies.values():
            self._retired = self._retired + ds.oracles.counters_snapshot()
        self.capacity = new_capacity
        self._phase += 1
        self.copies = {}
        survivors = self.alive
        self.alive = {}
        for eid in sorted(survivors):
            e, fe, keys = survivors[eid]
            for key in keys:
                accepted = self._ensure_copy(key).insert(e, singleton=fe)
                assert accepted, "replayed element rejected by its own copy"
            self.alive[eid] = (e, fe, keys)
