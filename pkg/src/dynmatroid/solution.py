"""Weight-sorted independent solutions with frozen admission weights.

A :class:`WeightedSolution` holds the current solution members sorted by
(weight descending, id ascending) together with the history set of every
element ever admitted. An element's weight is frozen the first time it is
admitted and never recomputed; the swap finders below only ever read these
frozen values, so no value-oracle calls happen here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .oracles import ContractError, Element, MatroidOracle, ValueOracle


class WeightedSolution:
    """Matroid-independent member list plus append-only admission history."""

    __slots__ = ("members", "_member_ids", "_history")

    def __init__(self) -> None:
        # (element, frozen weight), sorted by weight desc then id asc.
        self.members: list[tuple[Element, float]] = []
        self._member_ids: set[int] = set()
        # id -> (element, weight frozen at first admission).
        self._history: dict[int, tuple[Element, float]] = {}

    def __len__(self) -> int:
        return len(self.members)

    def has_member(self, eid: int) -> bool:
        return eid in self._member_ids

    def member_elements(self) -> list[Element]:
        return [e for e, _ in self.members]

    def member_ids(self) -> set[int]:
        return set(self._member_ids)

    def weight(self):
        """w(S): sum of the members' frozen weights."""
        return sum(w for _, w in self.members)

    def history_elements(self) -> list[Element]:
        return [e for e, _ in self._history.values()]

    def history_ids(self) -> set[int]:
        return set(self._history)

    def history_weight(self):
        """w(S'): sum of frozen weights over every element ever admitted."""
        return sum(w for _, w in self._history.values())

    def frozen_weight(self, eid: int):
        return self._history[eid][1]

    @property
    def swapped_out_weight(self):
        """w(K) for K = S' minus S: total weight swapped out so far."""
        return sum(w for eid, (_, w) in self._history.items()
                   if eid not in self._member_ids)

    def admit(self, e: Element, weight, swap_out: Optional[Element] = None,
              matroid: Optional[MatroidOracle] = None) -> None:
        """Insert e at its sorted position with a frozen weight.

        If ``swap_out`` is given it must currently be a member and is
        evicted first. Independence of the result is the caller's job;
        passing ``matroid`` re-checks it at the cost of one call.
        """
        if self.has_member(e.id):
            raise ContractError(f"element {e.id} is already a member")
        if swap_out is not None:
            if not self.has_member(swap_out.id):
                raise ContractError(f"swap-out element {swap_out.id} is not a member")
            self.members = [(m, w) for m, w in self.members if m.id != swap_out.id]
            self._member_ids.discard(swap_out.id)

        key = (-weight, e.id)
        pos = 0
        while pos < len(self.members) and (-self.members[pos][1], self.members[pos][0].id) < key:
            pos += 1
        self.members.insert(pos, (e, weight))
        self._member_ids.add(e.id)
        # Weight is set exactly once: a re-admitted id keeps its original.
        self._history.setdefault(e.id, (e, weight))

        if matroid is not None and not matroid.is_independent(self.member_elements()):
            raise ContractError("admit produced a dependent member set")

    def copy(self) -> "WeightedSolution":
        clone = WeightedSolution()
        clone.members = list(self.members)
        clone._member_ids = set(self._member_ids)
        clone._history = dict(self._history)
        return clone


def find_swap_binary(sol: WeightedSolution, e: Element,
                     matroid: MatroidOracle) -> Optional[tuple[Element, float]]:
    """Cheapest member whose eviction makes room for e, via binary search.

    Returns None when S+e is already independent. Otherwise the members
    x1, x2, ... are in descending weight order, so the set of prefix
    lengths q with {x1..xq}+e independent is downward closed and the
    member just past the longest such prefix is the minimum-weight valid
    swap. Uses at most ceil(log2(k+1)) + 1 independence calls.
    """
    before = matroid.independence_calls
    members = sol.members
    if matroid.is_independent(sol.member_elements() + [e]):
        return None
    if not members:
        raise ContractError("no swap candidate: universe contains a loop element")

    # Longest prefix length q in [0, |S|-1] keeping independence with e.
    # q = 0 is always valid: universes carry no loops, so {e} is independent.
    lo, hi = 0, len(members) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        prefix = [m for m, _ in members[:mid]]
        if matroid.is_independent(prefix + [e]):
            lo = mid
        else:
            hi = mid - 1
    used = matroid.independence_calls - before
    assert used <= math.ceil(math.log2(matroid.rank + 1)) + 1, \
        f"swap search used {used} independence calls"
    return members[lo]


def find_swap_linear(sol: WeightedSolution, e: Element,
                     matroid: MatroidOracle) -> Optional[tuple[Element, float]]:
    """Reference swap finder: scan members in ascending weight order.

    Same contract as :func:`find_swap_binary`; used only in tests as the
    independent oracle for the binary search.
    """
    if matroid.is_independent(sol.member_elements() + [e]):
        return None
    for y, wy in reversed(sol.members):
        rest = [m for m, _ in sol.members if m.id != y.id]
        if matroid.is_independent(rest + [e]):
            return (y, wy)
    raise ContractError("no swap candidate: universe contains a loop element")


@dataclass
class WeightInvariantReport:
    """Outcome of the three frozen-weight sanity properties."""

    swapped_le_members: bool   # w(K) <= w(S)
    members_le_value: bool     # w(S) <= f(S)
    history_matches_value: bool  # f(S') == w(S') up to float tolerance
    swapped_weight: float = 0.0
    member_weight: float = 0.0
    member_value: float = 0.0
    history_weight: float = 0.0
    history_value: float = 0.0

    @property
    def ok(self) -> bool:
        return (self.swapped_le_members and self.members_le_value
                and self.history_matches_value)


def check_weight_invariants(sol: WeightedSolution, fn: ValueOracle) -> WeightInvariantReport:
    """Evaluate the three weight properties of a swapping-built solution.

    Costs two value calls (f(S) and f(S')). Inequalities get the same
    1e-9 relative slack as the equality check, purely to absorb float
    summation order; with integer weights everything is exact.
    """
    w_members = sol.weight()
    w_swapped = sol.swapped_out_weight
    w_history = sol.history_weight()
    f_members = fn.value(sol.member_elements())
    f_history = fn.value(sol.history_elements())

    def tol(x) -> float:
        return 1e-9 * max(1.0, abs(x))

    return WeightInvariantReport(
        swapped_le_members=w_swapped <= w_members + tol(w_members),
        members_le_value=w_members <= f_members + tol(f_members),
        history_matches_value=abs(f_history - w_history) <= tol(w_history),
        swapped_weight=w_swapped,
        member_weight=w_members,
        member_value=f_members,
        history_weight=w_history,
        history_value=f_history,
    )
