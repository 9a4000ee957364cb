"""Straw-man dynamic baselines and the exhaustive optimum oracle.

Both baselines keep the alive set in insertion order and recompute from
scratch whenever a deletion hits their solution, which is exactly what
makes them pay a linear amortized price on adversarial streams. The brute
force optimum is the reference every approximation test compares against.
"""
from __future__ import annotations

import heapq
from typing import Iterable

from .core import Operation, StreamError
from .oracles import Element, MatroidOracle, OracleError, OracleSuite, ValueOracle
from .swapping import SwapState
from .solution import WeightedSolution


class BruteForceBudgetError(OracleError):
    """Instance too large for exhaustive optimum enumeration."""


class DynamicSwapping:
    """Streaming swapping plus rebuild-on-solution-deletion."""

    def __init__(self, oracles: OracleSuite):
        self.oracles = oracles
        self.alive: dict[int, Element] = {}  # insertion order preserved
        self._state = SwapState(oracles)

    @property
    def solution(self) -> WeightedSolution:
        return self._state.sol

    def apply(self, op: Operation) -> None:
        if op.kind == "insert":
            if op.element_id in self.alive:
                raise StreamError(f"insert of already alive element {op.element_id}")
            self.alive[op.element_id] = op.element
            self._state.process(op.element)
        elif op.kind == "delete":
            if op.element_id not in self.alive:
                raise StreamError(f"delete of element {op.element_id} which is not alive")
            del self.alive[op.element_id]
            if self._state.sol.has_member(op.element_id):
                # Replay the surviving elements in their insertion order.
                self._state = SwapState(self.oracles)
                for e in self.alive.values():
                    self._state.process(e)
        else:
            raise StreamError(f"unknown operation kind {op.kind!r}")


class DynamicGreedy:
    """Full lazy-greedy recomputation on every insert and every deletion
    that touches the solution."""

    def __init__(self, oracles: OracleSuite):
        self.oracles = oracles
        self.alive: dict[int, Element] = {}
        self.solution: list[Element] = []

    def apply(self, op: Operation) -> None:
        if op.kind == "insert":
            if op.element_id in self.alive:
                raise StreamError(f"insert of already alive element {op.element_id}")
            self.alive[op.element_id] = op.element
            self.solution = lazy_greedy(list(self.alive.values()), self.oracles)
        elif op.kind == "delete":
            if op.element_id not in self.alive:
                raise StreamError(f"delete of element {op.element_id} which is not alive")
            del self.alive[op.element_id]
            if any(e.id == op.element_id for e in self.solution):
                self.solution = lazy_greedy(list(self.alive.values()), self.oracles)
        else:
            raise StreamError(f"unknown operation kind {op.kind!r}")


def lazy_greedy(elements: list[Element], oracles: OracleSuite) -> list[Element]:
    """Matroid greedy with a stale-marginal priority queue.

    Pop the best stale bound, re-evaluate it against the current solution
    and push it back; when the freshest bound surfaces on top it is either
    added (if independent) or discarded for good. Priority ties break on
    the smaller id. Elements whose insertion would break independence can
    never recover (downward closure), so they are dropped permanently.
    """
    fn, matroid = oracles.fn, oracles.matroid
    solution: list[Element] = []
    # f(empty) = 0 by normalization; no call needed for the initial base.
    heap = [(-fn.marginal(e, [], base=0), e.id, e, 0) for e in elements]
    heapq.heapify(heap)
    base = 0
    rounds = 0
    while heap and len(solution) < matroid.rank:
        neg_gain, eid, e, computed_at = heapq.heappop(heap)
        if computed_at == rounds:
            if matroid.is_independent(solution + [e]):
                solution.append(e)
                base = fn.value(solution)
                rounds += 1
        else:
            heapq.heappush(heap, (-fn.marginal(e, solution, base=base), eid, e, rounds))
    return solution


def brute_force_opt(alive: Iterable[Element], matroid: MatroidOracle,
                    fn: ValueOracle) -> tuple[list[Element], float]:
    """Exact optimum by enumerating independent subsets up to the rank.

    Dependent branches are pruned (supersets of dependent sets stay
    dependent), ties break toward the lexicographically smallest id tuple.
    Refuses instances beyond 20 alive elements or rank 5.
    """
    elements = sorted(alive, key=lambda e: e.id)
    if len(elements) > 20 or matroid.rank > 5:
        raise BruteForceBudgetError(
            f"instance too large: {len(elements)} elements, rank {matroid.rank}")

    best_ids: tuple = ()
    best_set: list[Element] = []
    best_value = 0  # f(empty) = 0 by normalization

    def grow(start: int, chosen: list[Element], chosen_ids: tuple) -> None:
        nonlocal best_ids, best_set, best_value
        for i in range(start, len(elements)):
            cand = chosen + [elements[i]]
            if not matroid.is_independent(cand):
                continue
            cand_ids = chosen_ids + (elements[i].id,)
            value = fn.value(cand)
            if value > best_value or (value == best_value and cand_ids < best_ids):
                best_ids, best_set, best_value = cand_ids, list(cand), value
            if len(cand) < matroid.rank:
                grow(i + 1, cand, cand_ids)

    grow(0, [], ())
    return best_set, best_value
