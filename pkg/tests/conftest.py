import pytest

from dynmatroid import Element, Universe


@pytest.fixture
def coverage_universe() -> Universe:
    """Three-item unit-weight coverage instance used across modules."""
    elements = [
        Element(1, {"covers": ["1", "2"]}),
        Element(2, {"covers": ["2", "3"]}),
        Element(3, {"covers": ["3"]}),
        Element(4, {"covers": []}),
    ]
    return Universe(elements, {"kind": "coverage", "items": {"1": 1, "2": 1, "3": 1}},
                    {"kind": "uniform", "k": 2})


@pytest.fixture
def modular_universe() -> Universe:
    elements = [Element(i, {"weight": w}) for i, w in ((1, 3), (2, 5), (3, 7), (4, 12))]
    return Universe(elements, {"kind": "modular"}, {"kind": "uniform", "k": 2})
