import pytest

from dynmatroid import Element, Operation, StreamError, Universe
from dynmatroid.streams import (lifo_geometric, parse_stream, random_stream,
                                random_universe, sliding_window, validate_stream,
                                write_stream)


def test_lifo_geometric_shape():
    universe, ops = lifo_geometric(4)
    assert [(op.kind, op.element_id) for op in ops] == [
        ("insert", 1), ("insert", 2), ("insert", 3), ("insert", 4),
        ("delete", 4), ("delete", 3), ("delete", 2), ("delete", 1)]
    assert universe.element(4).payload["weight"] == 3 ** 4
    assert sum(op.kind == "insert" for op in ops) == sum(op.kind == "delete" for op in ops)
    validate_stream(ops, universe)


def test_lifo_geometric_weights_exceed_float_range():
    universe, ops = lifo_geometric(700)
    w = universe.element(700).payload["weight"]
    assert w == 3 ** 700  # exact integer, far beyond binary64
    suite = universe.suite()
    assert suite.fn.value([universe.element(700)]) == 3 ** 700
    validate_stream(ops, universe)


def test_random_stream_insertion_only_when_p_zero():
    universe = random_universe(10, seed=4)
    ops = random_stream(universe, 10, delete_prob=0.0, seed=1)
    assert all(op.kind == "insert" for op in ops)
    validate_stream(ops, universe)


def test_random_stream_is_seed_deterministic():
    universe = random_universe(12, seed=4)
    a = random_stream(universe, 20, delete_prob=0.4, seed=9)
    b = random_stream(universe, 20, delete_prob=0.4, seed=9)
    assert [(o.kind, o.element_id) for o in a] == [(o.kind, o.element_id) for o in b]


def test_sliding_window_example():
    universe = random_universe(4, seed=0)
    ops = sliding_window(universe, 4, window=2)
    assert [(op.kind, op.element_id) for op in ops] == [
        ("insert", 1), ("insert", 2), ("insert", 3), ("delete", 1),
        ("insert", 4), ("delete", 2)]
    validate_stream(ops, universe)


def test_validator_rejects_malformed_streams():
    universe = random_universe(5, seed=0)
    e1 = universe.element(1)
    with pytest.raises(StreamError):  # duplicate alive insert
        validate_stream([Operation.insert(e1), Operation.insert(e1)], universe)
    with pytest.raises(StreamError):  # delete of dead element
        validate_stream([Operation.delete(1)], universe)
    with pytest.raises(StreamError):  # id reuse after deletion
        validate_stream([Operation.insert(e1), Operation.delete(1),
                         Operation.insert(e1)], universe)
    stranger = Element(99, {"covers": []})
    with pytest.raises(StreamError):  # outside the universe
        validate_stream([Operation.insert(stranger)], universe)


def test_stream_file_round_trip(tmp_path):
    universe = random_universe(6, seed=2)
    ops = random_stream(universe, 10, delete_prob=0.3, seed=3)
    path = tmp_path / "s.txt"
    write_stream(ops, path)
    parsed = parse_stream(path, universe)
    assert [(o.kind, o.element_id) for o in parsed] == \
        [(o.kind, o.element_id) for o in ops]


def test_stream_file_comments_and_errors(tmp_path):
    universe = random_universe(3, seed=2)
    path = tmp_path / "s.txt"
    path.write_text("# header\n+ 1\n\n- 1  # trailing comment\n")
    parsed = parse_stream(path, universe)
    assert [(o.kind, o.element_id) for o in parsed] == [("insert", 1), ("delete", 1)]

    path.write_text("+ 1\nnonsense line\n")
    with pytest.raises(StreamError, match="line 2"):
        parse_stream(path, universe)
    path.write_text("+ 99\n")
    with pytest.raises(StreamError, match="line 1"):
        parse_stream(path, universe)
