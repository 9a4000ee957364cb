"""Shared helpers for the test suite: random instances and reference
implementations kept deliberately independent of the library's fast paths."""
from __future__ import annotations

import itertools
import random

from dynmatroid import (Element, Operation, OracleSuite, SwapState, Universe,
                        WeightedSolution, find_swap_binary)
from dynmatroid.streams import random_stream, random_universe

FUNCTION_KINDS = ("coverage", "modular")
MATROID_KINDS = ("uniform", "partition")


def small_universe(rng: random.Random, max_elements: int = 14, max_rank: int = 3,
                   function_kinds=FUNCTION_KINDS, matroid_kinds=MATROID_KINDS) -> Universe:
    """Random small instance within the brute-force budget."""
    return random_universe(
        num_elements=rng.randint(4, max_elements),
        function_kind=rng.choice(function_kinds),
        matroid_kind=rng.choice(matroid_kinds),
        seed=rng.randrange(2 ** 30),
        rank=rng.randint(1, max_rank),
        num_items=rng.randint(4, 8),
        num_parts=rng.randint(2, 3),
    )


def mixed_stream(rng: random.Random, universe: Universe, n_ops: int,
                 delete_prob: float = 0.35) -> list[Operation]:
    return random_stream(universe, n_ops, delete_prob=delete_prob,
                         seed=rng.randrange(2 ** 30))


def swapping_reference(elements, oracles: OracleSuite):
    """Plain swapping without any threshold branch, with the linear-scan
    swap finder. Serves as the oracle for threshold degeneration and for
    the binary search. Returns (solution, decision signatures)."""
    sol = WeightedSolution()
    decisions = []
    fn, matroid = oracles.fn, oracles.matroid
    for e in elements:
        w = fn.marginal(e, sol.history_elements())
        if matroid.is_independent(sol.member_elements() + [e]):
            sol.admit(e, w)
            decisions.append(("added", e.id, None))
            continue
        evict = None
        for y, wy in reversed(sol.members):
            rest = [m for m, _ in sol.members if m.id != y.id]
            if matroid.is_independent(rest + [e]):
                evict = (y, wy)
                break
        assert evict is not None
        if 2 * evict[1] < w:
            sol.admit(e, w, swap_out=evict[0])
            decisions.append(("swapped", e.id, evict[0].id))
        else:
            decisions.append(("rejected", e.id, None))
    return sol, decisions


def eager_greedy(elements, oracles: OracleSuite):
    """Reference greedy: full re-scan of the remaining candidates each step."""
    fn, matroid = oracles.fn, oracles.matroid
    solution = []
    remaining = sorted(elements, key=lambda e: e.id)
    base = 0
    while remaining and len(solution) < matroid.rank:
        scored = [(-fn.marginal(e, solution, base=base), e.id, e) for e in remaining]
        scored.sort()
        picked = None
        for _, _, e in scored:
            if matroid.is_independent(solution + [e]):
                picked = e
                break
            remaining.remove(e)  # dependent now, dependent forever
        if picked is None:
            break
        solution.append(picked)
        remaining.remove(picked)
        base = fn.value(solution)
    return solution


def bitmask_opt(elements, oracles: OracleSuite):
    """Second independent optimum enumerator: all subsets via bitmask."""
    elements = sorted(elements, key=lambda e: e.id)
    best_value = 0
    best = []
    for mask in range(1 << len(elements)):
        subset = [e for i, e in enumerate(elements) if mask >> i & 1]
        if not oracles.matroid.is_independent(subset):
            continue
        value = oracles.fn.value(subset)
        if value > best_value:
            best_value, best = value, subset
    return best, best_value


def is_forest(edges, num_vertices: int) -> bool:
    """Reference acyclicity check: BFS component sweep, no union-find."""
    adj = {v: [] for v in range(num_vertices)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen: set[int] = set()
    for start in range(num_vertices):
        if start in seen:
            continue
        comp_vertices = 0
        comp_edge_ends = 0
        queue = [start]
        seen.add(start)
        while queue:
            node = queue.pop()
            comp_vertices += 1
            comp_edge_ends += len(adj[node])
            for nxt in adj[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        if comp_edge_ends // 2 > comp_vertices - 1:
            return False
    return True


def random_independent_solution(rng: random.Random, universe: Universe,
                                oracles: OracleSuite, max_size: int = 8):
    """Random independent member set with synthetic frozen weights."""
    sol = WeightedSolution()
    pool = sorted(universe.elements.values(), key=lambda e: e.id)
    rng.shuffle(pool)
    for e in pool:
        if len(sol) >= max_size:
            break
        if oracles.matroid.is_independent(sol.member_elements() + [e]):
            sol.admit(e, rng.randint(0, 20))
    return sol


def replay_trace(trace, oracles: OracleSuite):
    """Feed a dynamic decision trace through plain swapping.

    Returns the rebuilt solution and the per-element decision signatures.
    """
    state = SwapState(oracles)
    decisions = []
    for entry in trace:
        decisions.append(state.process(entry.element).signature())
    return state.sol, decisions


def all_subsets_upto(elements, size):
    for r in range(size + 1):
        yield from itertools.combinations(elements, r)
