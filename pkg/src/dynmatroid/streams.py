"""Stream and universe generation, stream files, validation.

Stream files are UTF-8 text, one operation per line: ``+ <id>`` inserts,
``- <id>`` deletes, ``#`` starts a comment. Generators are oblivious by
construction: they run to completion before any algorithm sees a single
operation, and a fixed seed pins the output bit for bit.
"""
from __future__ import annotations

import random
from typing import Iterable, Optional

from .core import Operation, StreamError
from .oracles import Element, Universe


def write_stream(ops: Iterable[Operation], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for op in ops:
            sign = "+" if op.kind == "insert" else "-"
            fh.write(f"{sign} {op.element_id}\n")


def parse_stream(path, universe: Universe) -> list[Operation]:
    """Read a stream file, binding inserts to universe elements."""
    ops: list[Operation] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2 or parts[0] not in "+-":
                raise StreamError(f"line {lineno}: expected '+ <id>' or '- <id>', got {raw!r}")
            try:
                eid = int(parts[1])
            except ValueError:
                raise StreamError(f"line {lineno}: bad element id {parts[1]!r}") from None
            if eid not in universe:
                raise StreamError(f"line {lineno}: element {eid} not in universe")
            if parts[0] == "+":
                ops.append(Operation.insert(universe.element(eid)))
            else:
                ops.append(Operation.delete(eid))
    return ops


def validate_stream(ops: Iterable[Operation], universe: Universe) -> None:
    """Check well-formedness by simulating the alive set.

    Rejects inserting an alive id, deleting a dead id, ids outside the
    universe, and re-inserting an id that was used earlier in the stream
    (ids are single-use across a stream's lifetime).
    """
    alive: set[int] = set()
    used: set[int] = set()
    for i, op in enumerate(ops, 1):
        if op.element_id not in universe:
            raise StreamError(f"op {i}: element {op.element_id} not in universe")
        if op.kind == "insert":
            if op.element_id in alive:
                raise StreamError(f"op {i}: insert of alive element {op.element_id}")
            if op.element_id in used:
                raise StreamError(f"op {i}: element id {op.element_id} reused")
            alive.add(op.element_id)
            used.add(op.element_id)
        elif op.kind == "delete":
            if op.element_id not in alive:
                raise StreamError(f"op {i}: delete of dead element {op.element_id}")
            alive.discard(op.element_id)
        else:
            raise StreamError(f"op {i}: unknown kind {op.kind!r}")


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def lifo_geometric(n: int) -> tuple[Universe, list[Operation]]:
    """Worst-case stream for rebuild-from-scratch baselines.

    n elements with geometrically growing modular weights 3^i under a
    rank-1 constraint, inserted in increasing order and deleted in
    decreasing order, so every deletion evicts the current solution.
    Weights are exact Python integers, safe far beyond float range.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    elements = [Element(i, {"weight": 3 ** i}) for i in range(1, n + 1)]
    universe = Universe(elements, {"kind": "modular"}, {"kind": "uniform", "k": 1})
    ops = [Operation.insert(e) for e in elements]
    ops += [Operation.delete(i) for i in range(n, 0, -1)]
    return universe, ops


def random_stream(universe: Universe, n_ops: int, delete_prob: float = 0.3,
                  seed: int = 0) -> list[Operation]:
    """Random mixed stream over a universe; ids are never reused."""
    rng = random.Random(seed)
    unused = sorted(universe.elements)
    rng.shuffle(unused)
    alive: list[int] = []
    ops: list[Operation] = []
    while len(ops) < n_ops:
        can_delete = bool(alive)
        can_insert = bool(unused)
        if not can_delete and not can_insert:
            break
        if can_delete and (not can_insert or rng.random() < delete_prob):
            eid = alive.pop(rng.randrange(len(alive)))
            ops.append(Operation.delete(eid))
        else:
            eid = unused.pop()
            alive.append(eid)
            ops.append(Operation.insert(universe.element(eid)))
    return ops


def sliding_window(universe: Universe, n_inserts: int, window: int) -> list[Operation]:
    """Insert ids in sorted order, deleting the oldest once the window fills."""
    if window < 1:
        raise ValueError("window must be >= 1")
    ids = sorted(universe.elements)[:n_inserts]
    if len(ids) < n_inserts:
        raise ValueError(f"universe has only {len(ids)} elements, need {n_inserts}")
    ops: list[Operation] = []
    for i, eid in enumerate(ids):
        ops.append(Operation.insert(universe.element(eid)))
        if i + 1 > window:
            ops.append(Operation.delete(ids[i - window]))
    return ops


def random_universe(num_elements: int, function_kind: str = "coverage",
                    matroid_kind: str = "uniform", seed: int = 0, rank: int = 2,
                    num_items: int = 8, num_clients: int = 4, num_parts: int = 2,
                    num_vertices: int = 5) -> Universe:
    """Random universe with integer-valued payloads (float-exact sums)."""
    rng = random.Random(seed)
    items = {str(i): rng.randint(1, 3) for i in range(num_items)}
    if matroid_kind == "partition":
        # Distribute the requested rank over the parts, one slot minimum each.
        num_parts = max(1, min(num_parts, rank))
        capacities = [1] * num_parts
        for _ in range(rank - num_parts):
            capacities[rng.randrange(num_parts)] += 1

    elements = []
    for eid in range(1, num_elements + 1):
        payload: dict = {}
        if function_kind == "modular":
            payload["weight"] = rng.randint(0, 9)
        elif function_kind == "coverage":
            cover_size = rng.randint(0, min(3, num_items))
            payload["covers"] = sorted(rng.sample(sorted(items), cover_size))
        elif function_kind == "facility-location":
            payload["sim"] = [rng.randint(0, 5) for _ in range(num_clients)]
        else:
            raise ValueError(f"unknown function kind {function_kind!r}")
        if matroid_kind == "partition":
            payload["part"] = rng.randrange(num_parts)
        elif matroid_kind == "graphic":
            u = rng.randrange(num_vertices)
            v = rng.randrange(num_vertices - 1)
            payload["edge"] = [u, v if v < u else v + 1]
        elif matroid_kind != "uniform":
            raise ValueError(f"unknown matroid kind {matroid_kind!r}")
        elements.append(Element(eid, payload))

    if function_kind == "modular":
        function_spec: dict = {"kind": "modular"}
    elif function_kind == "coverage":
        function_spec = {"kind": "coverage", "items": items}
    else:
        function_spec = {"kind": "facility-location"}

    if matroid_kind == "uniform":
        matroid_spec: dict = {"kind": "uniform", "k": rank}
    elif matroid_kind == "partition":
        matroid_spec = {"kind": "partition", "parts": list(range(num_parts)),
                        "capacities": capacities}
    else:
        matroid_spec = {"kind": "graphic", "vertices": num_vertices}

    return Universe(elements, function_spec, matroid_spec)
