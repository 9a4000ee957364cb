"""Insertion-only streaming maximization by swapping.

One pass over the stream: each arriving element is weighted by its
marginal gain against the history set, dropped if a threshold filter is
active and the weight is too small, added outright if the matroid allows
it, and otherwise swapped in only when it more than doubles the weight of
the cheapest evictable member. With the threshold at zero the filter
branch is dead and this is the plain swapping algorithm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .oracles import Element, OracleSuite
from .solution import WeightedSolution, find_swap_binary


class DecisionKind(Enum):
    BELOW_THRESHOLD = "below-threshold"
    ADDED = "added"
    SWAPPED = "swapped"
    REJECTED = "rejected"


@dataclass(frozen=True)
class Decision:
    """Materialized outcome for one processed element."""

    kind: DecisionKind
    element: Element
    weight: float
    swapped_out: Optional[Element] = None

    def signature(self) -> tuple:
        out = self.swapped_out.id if self.swapped_out is not None else None
        return (self.kind.value, self.element.id, out)


class SwapState:
    """Mutable state of one swapping run over a stream of insertions."""

    def __init__(self, oracles: OracleSuite, epsilon: float = 0.0, tau: float = 0.0):
        self.oracles = oracles
        self.epsilon = epsilon
        self.tau = tau
        self.k = oracles.matroid.rank
        self.sol = WeightedSolution()

    @property
    def cutoff(self):
        """Minimum admissible weight; 0 disables the filter entirely."""
        if self.tau == 0:
            return 0
        if self.k == 0:
            return math.inf
        return self.epsilon * self.tau / self.k

    def process(self, e: Element) -> Decision:
        """Run the swapping step for one arriving element."""
        fn, matroid = self.oracles.fn, self.oracles.matroid
        w = fn.marginal(e, self.sol.history_elements())
        if w < self.cutoff:
            # Skipped entirely: below-threshold elements never touch the
            # history set, they are accounted for separately.
            return Decision(DecisionKind.BELOW_THRESHOLD, e, w)

        candidate = find_swap_binary(self.sol, e, matroid)
        if candidate is None:
            self.sol.admit(e, w)
            return Decision(DecisionKind.ADDED, e, w)

        evict, evict_weight = candidate
        if 2 * evict_weight < w:
            assert w > 2 * evict_weight
            self.sol.admit(e, w, swap_out=evict)
            return Decision(DecisionKind.SWAPPED, e, w, swapped_out=evict)
        return Decision(DecisionKind.REJECTED, e, w)


def run_stream(elements: Iterable[Element], oracles: OracleSuite,
               epsilon: float = 0.0, tau: float = 0.0) -> WeightedSolution:
    """Fold :meth:`SwapState.process` over an insertion-only stream."""
    state = SwapState(oracles, epsilon=epsilon, tau=tau)
    for e in elements:
        state.process(e)
    return state.sol
