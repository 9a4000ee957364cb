"""Ground universe, value/independence oracles and call counters.

Everything in this package is measured in oracle calls, so every query
against the submodular function or the matroid goes through the counted
methods defined here. Oracle definitions are immutable after construction
and may be shared; counters live on the instance, and ``fork()`` hands out
an independently counted view of the same definitions. Set evaluation is
deterministic (elements are deduplicated by id and summed in sorted order)
so that equal sets always produce bit-identical values.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping


class OracleError(Exception):
    """Base class for oracle, universe and contract errors."""


class UniverseError(OracleError):
    """A set referenced an element id outside the universe, or the
    universe definition itself is malformed."""


class ContractError(OracleError):
    """A caller violated a documented precondition."""


@dataclass(frozen=True, eq=False)
class Element:
    """A universe element: unique id plus an opaque payload.

    The payload is a mapping whose keys depend on the active oracles:
    ``weight`` (modular), ``covers`` (coverage), ``sim`` (facility
    location), ``part`` (partition matroid), ``edge`` (graphic matroid).
    Identity is the id alone; payloads are never mutated after creation.
    """

    id: int
    payload: Mapping[str, Any] = field(default_factory=dict)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Element) and other.id == self.id

    def __hash__(self) -> int:
        return hash(self.id)

    def __repr__(self) -> str:
        return f"Element({self.id})"


@dataclass
class OracleCounters:
    value_calls: int = 0
    independence_calls: int = 0

    @property
    def total(self) -> int:
        return self.value_calls + self.independence_calls

    def __add__(self, other: "OracleCounters") -> "OracleCounters":
        return OracleCounters(
            self.value_calls + other.value_calls,
            self.independence_calls + other.independence_calls,
        )

    def __sub__(self, other: "OracleCounters") -> "OracleCounters":
        return OracleCounters(
            self.value_calls - other.value_calls,
            self.independence_calls - other.independence_calls,
        )


def _dedupe(elements: Iterable[Element]) -> dict[int, Element]:
    return {e.id: e for e in elements}


class ValueOracle:
    """Counted access to a normalized monotone submodular function."""

    kind = "abstract"

    def __init__(self, elements: Mapping[int, Element]):
        self._ids = frozenset(elements)
        self.value_calls = 0

    def value(self, elements: Iterable[Element]):
        """f(S). One value call; S may contain deleted elements."""
        byid = _dedupe(elements)
        self._check(byid)
        self.value_calls += 1
        ordered = [byid[i] for i in sorted(byid)]
        return self._evaluate(ordered)

    def marginal(self, e: Element, elements: Iterable[Element], base=None):
        """f(e | S) = f(S+e) - f(S).

        Two value calls, or one when the caller supplies ``base`` = f(S).
        Clamped at 0: the function is monotone, so a negative difference
        can only be float noise.
        """
        if base is None:
            base = self.value(elements)
        gain = self.value(list(elements) + [e]) - base
        return gain if gain > 0 else 0 * gain

    def fork(self) -> "ValueOracle":
        """Same definition, fresh counter."""
        clone = copy.copy(self)
        clone.value_calls = 0
        return clone

    def _check(self, byid: Mapping[int, Element]) -> None:
        unknown = byid.keys() - self._ids
        if unknown:
            raise UniverseError(f"unknown element ids: {sorted(unknown)}")

    def _evaluate(self, ordered: list[Element]):
        raise NotImplementedError


class ModularWeights(ValueOracle):
    """f(S) = sum of per-element weights. Integer weights stay exact."""

    kind = "modular"

    def _evaluate(self, ordered):
        return sum(e.payload["weight"] for e in ordered)


class WeightedCoverage(ValueOracle):
    """f(S) = total weight of the items covered by S."""

    kind = "coverage"

    def __init__(self, elements: Mapping[int, Element], items: Mapping[Any, float]):
        super().__init__(elements)
        self._items = {str(k): float(v) for k, v in items.items()}

    def _evaluate(self, ordered):
        covered: set[str] = set()
        for e in ordered:
            covered.update(str(i) for i in e.payload["covers"])
        return sum(self._items[i] for i in sorted(covered))


class FacilityLocation(ValueOracle):
    """f(S) = sum over clients of the best similarity offered by S."""

    kind = "facility-location"

    def __init__(self, elements: Mapping[int, Element], num_clients: int):
        super().__init__(elements)
        self._num_clients = num_clients

    def _evaluate(self, ordered):
        if not ordered:
            return 0.0
        total = 0.0
        for c in range(self._num_clients):
            total += max(e.payload["sim"][c] for e in ordered)
        return total


class MatroidOracle:
    """Counted access to a matroid independence test."""

    kind = "abstract"

    def __init__(self, elements: Mapping[int, Element], rank: int):
        self._ids = frozenset(elements)
        self.rank = rank
        self.independence_calls = 0

    def is_independent(self, elements: Iterable[Element]) -> bool:
        """Membership of S in the matroid family. One independence call."""
        byid = _dedupe(elements)
        unknown = byid.keys() - self._ids
        if unknown:
            raise UniverseError(f"unknown element ids: {sorted(unknown)}")
        self.independence_calls += 1
        return self._independent(list(byid.values()))

    def fork(self) -> "MatroidOracle":
        clone = copy.copy(self)
        clone.independence_calls = 0
        return clone

    def _independent(self, elements: list[Element]) -> bool:
        raise NotImplementedError


class UniformMatroid(MatroidOracle):
    """All sets of size at most k are independent."""

    kind = "uniform"

    def __init__(self, elements: Mapping[int, Element], k: int):
        super().__init__(elements, rank=min(k, len(elements)))
        self.k = k

    def _independent(self, elements):
        return len(elements) <= self.k


class PartitionMatroid(MatroidOracle):
    """Per-part capacities; an element's part comes from its payload."""

    kind = "partition"

    def __init__(self, elements: Mapping[int, Element], capacities: Mapping[int, int]):
        counts: dict[int, int] = {}
        for e in elements.values():
            counts[e.payload["part"]] = counts.get(e.payload["part"], 0) + 1
        rank = sum(min(cap, counts.get(p, 0)) for p, cap in capacities.items())
        super().__init__(elements, rank=rank)
        self.capacities = dict(capacities)

    def _independent(self, elements):
        used: dict[int, int] = {}
        for e in elements:
            part = e.payload["part"]
            used[part] = used.get(part, 0) + 1
            if used[part] > self.capacities[part]:
                return False
        return True


class GraphicMatroid(MatroidOracle):
    """Edge sets that form a forest on a fixed vertex set.

    Independence is decided with a union-find rebuilt per query; the cost
    model charges one independence call regardless of the internal work.
    """

    kind = "graphic"

    def __init__(self, elements: Mapping[int, Element], num_vertices: int):
        rank = self._forest_size(num_vertices, [e.payload["edge"] for e in elements.values()])
        super().__init__(elements, rank=rank)
        self.num_vertices = num_vertices

    @staticmethod
    def _forest_size(num_vertices: int, edges) -> int:
        parent = list(range(num_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        size = 0
        for u, v in edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                size += 1
        return size

    def _independent(self, elements):
        parent = list(range(self.num_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in elements:
            u, v = e.payload["edge"]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


@dataclass
class OracleSuite:
    """One value oracle plus one matroid oracle with their counters."""

    fn: ValueOracle
    matroid: MatroidOracle

    def counters_snapshot(self) -> OracleCounters:
        return OracleCounters(self.fn.value_calls, self.matroid.independence_calls)

    def counters_reset(self) -> None:
        self.fn.value_calls = 0
        self.matroid.independence_calls = 0

    def fork(self) -> "OracleSuite":
        return OracleSuite(self.fn.fork(), self.matroid.fork())


VALUE_KINDS = ("modular", "coverage", "facility-location")
MATROID_KINDS = ("uniform", "partition", "graphic")


class Universe:
    """A fixed ground set plus the oracle definitions over it.

    The universe is append-only from the algorithms' point of view:
    deleted stream elements remain valid oracle inputs. The JSON layout
    produced by :meth:`to_dict` is the file contract used by the CLI.
    """

    def __init__(self, elements: Iterable[Element], function_spec: Mapping[str, Any],
                 matroid_spec: Mapping[str, Any]):
        self.elements: dict[int, Element] = {}
        for e in elements:
            if e.id in self.elements:
                raise UniverseError(f"duplicate element id {e.id}")
            self.elements[e.id] = e
        self.function_spec = dict(function_spec)
        self.matroid_spec = dict(matroid_spec)
        self._validate()

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, eid: int) -> bool:
        return eid in self.elements

    def element(self, eid: int) -> Element:
        try:
            return self.elements[eid]
        except KeyError:
            raise UniverseError(f"unknown element id {eid}") from None

    def suite(self) -> OracleSuite:
        """Build a fresh pair of zero-counter oracles over this universe."""
        fkind = self.function_spec["kind"]
        if fkind == "modular":
            fn: ValueOracle = ModularWeights(self.elements)
        elif fkind == "coverage":
            fn = WeightedCoverage(self.elements, self.function_spec["items"])
        else:
            num_clients = 0
            if self.elements:
                any_elem = next(iter(self.elements.values()))
                num_clients = len(any_elem.payload["sim"])
            fn = FacilityLocation(self.elements, num_clients)

        mkind = self.matroid_spec["kind"]
        if mkind == "uniform":
            matroid: MatroidOracle = UniformMatroid(self.elements, self.matroid_spec["k"])
        elif mkind == "partition":
            caps = dict(zip(self.matroid_spec["parts"], self.matroid_spec["capacities"]))
            matroid = PartitionMatroid(self.elements, caps)
        else:
            matroid = GraphicMatroid(self.elements, self.matroid_spec["vertices"])
        return OracleSuite(fn, matroid)

    def _validate(self) -> None:
        fkind = self.function_spec.get("kind")
        if fkind not in VALUE_KINDS:
            raise UniverseError(f"unknown function kind {fkind!r}")
        mkind = self.matroid_spec.get("kind")
        if mkind not in MATROID_KINDS:
            raise UniverseError(f"unknown matroid kind {mkind!r}")

        if fkind == "modular":
            for e in self.elements.values():
                w = e.payload.get("weight")
                if w is None or w < 0:
                    raise UniverseError(f"element {e.id}: modular weight missing or negative")
        elif fkind == "coverage":
            items = self.function_spec.get("items")
            if not isinstance(items, Mapping):
                raise UniverseError("coverage function needs an 'items' mapping")
            if any(float(v) < 0 for v in items.values()):
                raise UniverseError("coverage item weights must be nonnegative")
            known = {str(k) for k in items}
            for e in self.elements.values():
                covers = e.payload.get("covers")
                if covers is None:
                    raise UniverseError(f"element {e.id}: missing 'covers'")
                bad = {str(i) for i in covers} - known
                if bad:
                    raise UniverseError(f"element {e.id} covers unknown items {sorted(bad)}")
        else:
            lengths = set()
            for e in self.elements.values():
                sim = e.payload.get("sim")
                if sim is None or any(s < 0 for s in sim):
                    raise UniverseError(f"element {e.id}: missing or negative similarities")
                lengths.add(len(sim))
            if len(lengths) > 1:
                raise UniverseError("similarity vectors must share one length")

        if mkind == "uniform":
            k = self.matroid_spec.get("k")
            if not isinstance(k, int) or k < 1:
                raise UniverseError("uniform matroid needs integer k >= 1")
        elif mkind == "partition":
            parts = self.matroid_spec.get("parts")
            caps = self.matroid_spec.get("capacities")
            if not parts or caps is None or len(parts) != len(caps):
                raise UniverseError("partition matroid needs aligned 'parts' and 'capacities'")
            if any(not isinstance(c, int) or c < 1 for c in caps):
                # Zero-capacity parts would create loops: elements that can
                # never enter any solution, which the swap search assumes away.
                raise UniverseError("partition capacities must be integers >= 1")
            known_parts = set(parts)
            for e in self.elements.values():
                if e.payload.get("part") not in known_parts:
                    raise UniverseError(f"element {e.id}: part not listed in matroid spec")
        else:
            n_vertices = self.matroid_spec.get("vertices")
            if not isinstance(n_vertices, int) or n_vertices < 1:
                raise UniverseError("graphic matroid needs integer vertex count >= 1")
            for e in self.elements.values():
                edge = e.payload.get("edge")
                if (not edge or len(edge) != 2
                        or any(not 0 <= v < n_vertices for v in edge)):
                    raise UniverseError(f"element {e.id}: malformed edge {edge!r}")
                if edge[0] == edge[1]:
                    # Self-loops are never independent and would break the
                    # guarantee that a dependent S+e always has a swap.
                    raise UniverseError(f"element {e.id}: self-loop edge")

    def to_dict(self) -> dict[str, Any]:
        return {
            "function": self.function_spec,
            "matroid": self.matroid_spec,
            "elements": [
                {"id": e.id, "payload": dict(e.payload)}
                for e in sorted(self.elements.values(), key=lambda e: e.id)
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Universe":
        try:
            raw = data["elements"]
            elements = [Element(int(item["id"]), dict(item.get("payload", {}))) for item in raw]
            return cls(elements, data["function"], data["matroid"])
        except (KeyError, TypeError, ValueError) as exc:
            raise UniverseError(f"malformed universe definition: {exc}") from exc

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Universe":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))
