import math
import random

import pytest

from dynmatroid import (Element, InstanceManager, Operation, StreamError,
                        Universe, brute_force_opt, filter_bounds)
from dynmatroid.streams import random_universe
from support import mixed_stream, small_universe


def modular_universe(weights, k=2):
    elements = [Element(i + 1, {"weight": w}) for i, w in enumerate(weights)]
    return Universe(elements, {"kind": "modular"}, {"kind": "uniform", "k": k})


def test_qualifying_copies_example():
    universe = modular_universe([1, 1], k=2)
    mgr = InstanceManager(universe.suite(), epsilon=1.0)
    # f(e)=1, eps=1, k=2: 2^(j+1) > 1 >= 2^(j-1) holds exactly for j in {0, 1}.
    assert mgr._qualifying_keys(1) == (0, 1)


def test_copy_membership_invariant():
    rng = random.Random(31)
    for trial in range(15):
        universe = small_universe(rng, max_elements=10)
        epsilon = rng.choice([0.25, 0.5, 1.0])
        suite = universe.suite()
        if suite.matroid.rank < 1:
            continue
        mgr = InstanceManager(suite, epsilon=epsilon, seed=trial)
        k = suite.matroid.rank
        max_copies = math.ceil(math.log((1 + epsilon) * k / epsilon, 1 + epsilon)) + 1
        for op in mixed_stream(rng, universe, 12):
            mgr.apply(op)
            for eid, (_, fe, keys) in mgr.alive.items():
                assert len(keys) <= max_copies
                for j in keys:
                    lower, upper = filter_bounds(epsilon, (1 + epsilon) ** j, k)
                    assert lower <= fe < upper
                # The element is actually held by those copies and no others.
                for j, ds in mgr.copies.items():
                    assert (eid in ds.alive) == (j in keys)


def test_doubling_schedule():
    universe = modular_universe([2, 3, 4, 5, 6], k=2)
    mgr = InstanceManager(universe.suite(), epsilon=0.5)
    capacities = []
    for eid in (1, 2, 3, 4, 5):
        mgr.insert(universe.element(eid))
        capacities.append(mgr.capacity)
        assert mgr.capacity & (mgr.capacity - 1) == 0
        assert mgr.capacity <= 2 * mgr.ops_seen + 1
        assert all(ds.capacity == mgr.capacity for ds in mgr.copies.values())
    assert capacities == [1, 2, 4, 4, 8]


def test_replayed_insertions_do_not_count():
    universe = modular_universe([2, 3, 4, 5], k=2)
    mgr = InstanceManager(universe.suite(), epsilon=0.5)
    for eid in (1, 2, 3, 4):
        mgr.insert(universe.element(eid))
    assert mgr.ops_seen == 4


def test_singleton_values_memoized():
    universe = modular_universe([2, 3], k=2)
    mgr = InstanceManager(universe.suite(), epsilon=0.5)
    mgr.insert(universe.element(1))
    calls_after_first = mgr._local.fn.value_calls
    mgr.delete(1)
    mgr.insert(universe.element(1))  # reinsertion reuses the memoized f(e)
    assert mgr._local.fn.value_calls == calls_after_first


def test_malformed_ops_leave_state_unchanged():
    universe = modular_universe([2, 3], k=2)
    mgr = InstanceManager(universe.suite(), epsilon=0.5)
    mgr.insert(universe.element(1))
    ops_before, cap_before = mgr.ops_seen, mgr.capacity
    with pytest.raises(StreamError):
        mgr.insert(universe.element(1))
    with pytest.raises(StreamError):
        mgr.delete(2)
    assert (mgr.ops_seen, mgr.capacity) == (ops_before, cap_before)


def test_best_solution_empty_and_cached():
    universe = modular_universe([2, 3], k=2)
    mgr = InstanceManager(universe.suite(), epsilon=0.5)
    best = mgr.best_solution()
    assert best.copy_key is None and best.value == 0 and len(best.solution) == 0

    mgr.insert(universe.element(1))
    mgr.insert(universe.element(2))
    best = mgr.best_solution()
    meter = universe.suite()
    assert best.value == meter.fn.value(best.solution.member_elements())


def test_best_solution_tie_prefers_smaller_key():
    universe = modular_universe([4], k=1)
    mgr = InstanceManager(universe.suite(), epsilon=1.0)
    mgr.insert(universe.element(1))
    keys_holding = [j for j, ds in mgr.copies.items() if ds.current_solution()[1] == 4]
    assert mgr.best_solution().copy_key == min(keys_holding)


def test_amortized_cost_single_insert():
    universe = modular_universe([1], k=1)
    mgr = InstanceManager(universe.suite(), epsilon=1.0, seed=0)
    mgr.insert(universe.element(1))
    report = mgr.amortized_cost()
    assert report.operations == 1
    assert report.total_calls <= 10
    assert len(report.per_copy) == 1


def test_amortized_cost_without_ops_errors():
    universe = modular_universe([1], k=1)
    mgr = InstanceManager(universe.suite(), epsilon=1.0)
    with pytest.raises(StreamError):
        mgr.amortized_cost()


def test_replay_determinism():
    rng = random.Random(61)
    universe = small_universe(rng)
    ops = mixed_stream(rng, universe, 20)
    results = []
    for _ in range(2):
        mgr = InstanceManager(universe.suite(), epsilon=0.25, seed=17)
        history = []
        for op in ops:
            best = mgr.apply(op)
            history.append((best.copy_key, tuple(sorted(best.solution.member_ids())),
                            best.value))
        results.append((history, mgr.total_counters()))
    assert results[0] == results[1]


def test_unfiltered_mode_single_structure():
    rng = random.Random(9)
    universe = small_universe(rng, max_elements=10)
    mgr = InstanceManager(universe.suite(), seed=2)
    meter = universe.suite()
    alive = {}
    for op in mixed_stream(rng, universe, 14):
        if op.kind == "insert":
            alive[op.element_id] = op.element
        else:
            del alive[op.element_id]
        best = mgr.apply(op)
        assert set(mgr.copies) <= {None}
        _, opt = brute_force_opt(alive.values(), meter.matroid, meter.fn)
        assert 4 * best.value >= opt


def test_manager_approximation_small_instances():
    rng = random.Random(53)
    for _ in range(15):
        universe = small_universe(rng, max_elements=10)
        epsilon = rng.choice([0.25, 0.5])
        mgr = InstanceManager(universe.suite(), epsilon=epsilon, seed=rng.randrange(99))
        meter = universe.suite()
        alive = {}
        for op in mixed_stream(rng, universe, 14):
            if op.kind == "insert":
                alive[op.element_id] = op.element
            else:
                del alive[op.element_id]
            best = mgr.apply(op)
            _, opt = brute_force_opt(alive.values(), meter.matroid, meter.fn)
            assert (4 + 6 * epsilon) * best.value >= opt


def test_reinsertion_of_deleted_id_is_mechanically_sound():
    universe = modular_universe([5, 3], k=1)
    mgr = InstanceManager(universe.suite(), epsilon=0.5, seed=0)
    mgr.insert(universe.element(1))
    mgr.insert(universe.element(2))
    mgr.delete(1)
    best = mgr.insert(universe.element(1))
    meter = universe.suite()
    assert meter.matroid.is_independent(best.solution.member_elements())
    assert best.value == meter.fn.value(best.solution.member_elements())
