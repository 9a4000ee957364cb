"""Leveled fully dynamic structure with amortized rebuild cost.

The structure keeps L+1 = log2(n)+1 levels for a capacity of n stream
operations. Level l holds a partial solution (members plus admission
history), a candidate pool, and a buffer of not yet processed elements
capped at n/2^l. Insertions land in every buffer and trigger a rebuild at
the first level whose buffer fills; deleting a solution element triggers a
rebuild at the smallest level containing it. A rebuild at level l replays
the swapping rule over the level's candidates, repeatedly filtering the
pool down to the elements the swapping algorithm would accept and
admitting uniformly random picks while the pool stays large, then recurses
upward. The per-level decision log concatenates into a single insertion
order on which plain swapping reproduces the maintained solution exactly.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .oracles import ContractError, Element, OracleSuite
from .solution import WeightedSolution, find_swap_binary


class StreamError(Exception):
    """Malformed stream operation (duplicate insert, dead delete, ...)."""


@dataclass(frozen=True)
class Operation:
    """One stream update: an insertion carrying its element, or a deletion
    referencing an element id."""

    kind: str  # "insert" | "delete"
    element_id: int
    element: Optional[Element] = None

    @staticmethod
    def insert(e: Element) -> "Operation":
        return Operation("insert", e.id, e)

    @staticmethod
    def delete(eid: int) -> "Operation":
        return Operation("delete", eid)


@dataclass(frozen=True)
class TraceEntry:
    """One decision taken during a level rebuild, in processing order."""

    element: Element
    action: str  # "added" | "swapped" | "rejected" | "filtered"
    swapped_out: Optional[Element] = None


class Level:
    """State of one level: partial solution, candidate pool, buffer."""

    __slots__ = ("index", "sol", "candidates", "buffer", "trace", "last_rebuild_sizes")

    def __init__(self, index: int):
        self.index = index
        self.sol = WeightedSolution()
        self.candidates: dict[int, Element] = {}
        self.buffer: dict[int, Element] = {}
        self.trace: list[TraceEntry] = []
        self.last_rebuild_sizes: Optional[tuple[int, int]] = None


def filter_bounds(epsilon: float, tau: float, k: int) -> tuple[float, float]:
    """Admission window [eps/k * tau, (1+eps) * tau) for a threshold copy.

    Shared by the insertion filter, the in-rebuild marginal filter and the
    manager's copy routing so the three always agree bit for bit.
    """
    return (epsilon * tau / k, (1.0 + epsilon) * tau)


@dataclass
class AuditReport:
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


class DynamicStructure:
    """Fully dynamic solution maintenance for up to ``capacity`` operations.

    The only randomness is the uniform pick of the next admitted candidate,
    so a fixed seed makes every run replayable. When ``value_filter`` is
    set to (epsilon, tau) the structure only accepts elements whose
    singleton value falls in the admission window and additionally prunes
    candidates whose marginal against the partial solution drops below
    eps/k * tau during rebuilds.

    Single-owner: one stream consumer at a time. Distinct structures share
    no mutable state and may run concurrently.
    """

    def __init__(self, capacity: int, oracles: OracleSuite, seed: int = 0,
                 value_filter: Optional[tuple[float, float]] = None,
                 track_trace: bool = True):
        if capacity < 1 or capacity & (capacity - 1):
            raise ContractError(f"capacity must be a power of two, got {capacity}")
        if value_filter is not None and oracles.matroid.rank < 1:
            raise ContractError("value filter needs a matroid of rank >= 1")
        self.capacity = capacity
        self.top = capacity.bit_length() - 1  # L = log2(capacity)
        self.levels = [Level(i) for i in range(self.top + 1)]
        self.oracles = oracles
        self.rng = random.Random(seed)
        self.value_filter = value_filter
        self.track_trace = track_trace
        self.alive: dict[int, Element] = {}
        self._solution_cache: tuple[tuple, float] = ((), 0.0)

    def _threshold(self, index: int) -> int:
        return self.capacity >> index

    # ------------------------------------------------------------------
    # Stream operations
    # ------------------------------------------------------------------

    def insert(self, e: Element, singleton=None) -> bool:
        """Process one insertion; returns False if the filter ignored it.

        ``singleton`` is an optional precomputed f({e}) so that a manager
        running many threshold copies pays for that value call once.
        """
        if e.id in self.alive:
            raise StreamError(f"insert of already alive element {e.id}")
        if self.value_filter is not None:
            if singleton is None:
                singleton = self.oracles.fn.value([e])
            lower, upper = filter_bounds(self.value_filter[0], self.value_filter[1],
                                         self.oracles.matroid.rank)
            if not (lower <= singleton < upper):
                return False
        self.alive[e.id] = e
        for lvl in self.levels:
            lvl.buffer[e.id] = e
        for index in range(self.top + 1):
            if len(self.levels[index].buffer) >= self._threshold(index):
                self.rebuild_level(index)
                return True
        raise AssertionError("top-level buffer threshold is 1; unreachable")

    def delete(self, eid: int) -> None:
        """Process one deletion.

        Candidates and buffers drop the element with no oracle calls; a
        rebuild happens only when the element sits in some partial
        solution. History sets keep deleted elements on purpose.
        """
        if eid not in self.alive:
            raise StreamError(f"delete of element {eid} which is not alive")
        del self.alive[eid]
        for lvl in self.levels:
            lvl.candidates.pop(eid, None)
            lvl.buffer.pop(eid, None)
        for index in range(self.top + 1):
            if self.levels[index].sol.has_member(eid):
                # Rebuilding from the level below removes the element: by
                # minimality of the index it is not a member there, and it
                # is gone from every pool, so it cannot re-enter.
                self.rebuild_level(index)
                return

    # ------------------------------------------------------------------
    # Rebuild
    # ------------------------------------------------------------------

    def rebuild_level(self, index: int) -> None:
        """Reprocess level ``index`` and, recursively, all levels above.

        Level 0 has no level below it: its candidate pool absorbs its own
        buffer and the partial solution restarts empty, so a rebuild at
        level 0 reprocesses everything the level has retained.
        """
        lvl = self.levels[index]
        if index == 0:
            merged = dict(lvl.candidates)
            merged.update(lvl.buffer)
            lvl.candidates = merged
            lvl.sol = WeightedSolution()
        else:
            prev = self.levels[index - 1]
            merged = dict(prev.candidates)
            merged.update(prev.buffer)
            lvl.candidates = merged
            lvl.sol = prev.sol.copy()
        lvl.buffer = {}
        lvl.trace = []

        fn, matroid = self.oracles.fn, self.oracles.matroid
        threshold = self._threshold(index)
        marginal_cutoff = None
        if self.value_filter is not None:
            marginal_cutoff = filter_bounds(self.value_filter[0], self.value_filter[1],
                                            matroid.rank)[0]

        while True:
            # Weigh every candidate against the current history and find
            # its cheapest swap. One value call per element against the
            # cached f(S'), O(log k) independence calls for the swap.
            probes: dict[int, tuple] = {}
            if lvl.candidates:
                history = lvl.sol.history_elements()
                history_value = fn.value(history)
                for eid in sorted(lvl.candidates):
                    e = lvl.candidates[eid]
                    w = fn.marginal(e, history, base=history_value)
                    probes[eid] = (w, find_swap_binary(lvl.sol, e, matroid))

            # Threshold copies additionally drop candidates whose marginal
            # against the partial solution fell below the admission floor.
            if marginal_cutoff is not None and lvl.candidates:
                members = lvl.sol.member_elements()
                members_value = fn.value(members)
                kept: dict[int, Element] = {}
                for eid in sorted(lvl.candidates):
                    e = lvl.candidates[eid]
                    if fn.marginal(e, members, base=members_value) >= marginal_cutoff:
                        kept[eid] = e
                    elif self.track_trace:
                        lvl.trace.append(TraceEntry(e, "filtered"))
                lvl.candidates = kept

            # Keep exactly the elements swapping would accept right now:
            # addable outright, or improving on their swap by more than 2x.
            kept = {}
            for eid in sorted(lvl.candidates):
                w, candidate = probes[eid]
                if candidate is None or w > 2 * candidate[1]:
                    kept[eid] = lvl.candidates[eid]
                elif self.track_trace:
                    lvl.trace.append(TraceEntry(lvl.candidates[eid], "rejected"))
            lvl.candidates = kept

            if len(lvl.candidates) >= threshold:
                picked = self.rng.choice(sorted(lvl.candidates))
                e = lvl.candidates.pop(picked)
                w, candidate = probes[picked]
                if candidate is None:
                    lvl.sol.admit(e, w)
                    if self.track_trace:
                        lvl.trace.append(TraceEntry(e, "added"))
                else:
                    assert w > 2 * candidate[1]
                    lvl.sol.admit(e, w, swap_out=candidate[0])
                    if self.track_trace:
                        lvl.trace.append(TraceEntry(e, "swapped", swapped_out=candidate[0]))
            if len(lvl.candidates) < threshold:
                break

        lvl.last_rebuild_sizes = (len(lvl.candidates), len(lvl.buffer))
        assert len(lvl.candidates) < threshold and not lvl.buffer
        if index < self.top:
            self.rebuild_level(index + 1)

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def current_solution(self) -> tuple[WeightedSolution, float]:
        """Top-level solution and its cached value.

        The cached value is refreshed with one value call only when the
        member set changed since the last query; a fresh structure reports
        0 without any call (the function is normalized).
        """
        sol = self.levels[self.top].sol
        signature = tuple(e.id for e, _ in sol.members)
        if signature != self._solution_cache[0]:
            self._solution_cache = (signature, self.oracles.fn.value(sol.member_elements()))
        return sol, self._solution_cache[1]

    def decision_trace(self) -> list[TraceEntry]:
        """Concatenated per-level decision logs, lowest level first.

        Replaying the logged elements in this order through plain swapping
        reproduces the current top-level solution (unfiltered mode).
        """
        return [entry for lvl in self.levels for entry in lvl.trace]

    def audit_invariants(self) -> AuditReport:
        """Test-mode sweep over every level invariant.

        Independence checks run on a forked matroid oracle so audits never
        pollute the structure's own counters.
        """
        violations: list[str] = []
        matroid = self.oracles.matroid.fork()
        for lvl in self.levels:
            threshold = self._threshold(lvl.index)
            if len(lvl.buffer) > threshold:
                violations.append(
                    f"level {lvl.index}: buffer size {len(lvl.buffer)} exceeds {threshold}")
            if len(lvl.candidates) > 4 * threshold:
                violations.append(
                    f"level {lvl.index}: candidate pool {len(lvl.candidates)} exceeds "
                    f"{4 * threshold}")
            if lvl.last_rebuild_sizes is not None:
                cand_after, buf_after = lvl.last_rebuild_sizes
                if cand_after >= threshold or buf_after != 0:
                    violations.append(
                        f"level {lvl.index}: rebuild ended with {cand_after} candidates "
                        f"and {buf_after} buffered")
            if not lvl.sol.member_ids() <= lvl.sol.history_ids():
                violations.append(f"level {lvl.index}: members not within history")
            weights = [(w, -e.id) for e, w in lvl.sol.members]
            if any(weights[i] <= weights[i + 1] for i in range(len(weights) - 1)):
                violations.append(f"level {lvl.index}: members not strictly sorted")
            if not matroid.is_independent(lvl.sol.member_elements()):
                violations.append(f"level {lvl.index}: members not independent")
        return AuditReport(violations)
