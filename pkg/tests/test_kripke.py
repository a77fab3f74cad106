import itertools
import json
import random

import pytest

from hypercheck.errors import KripkeError, NotAPathError
from hypercheck.kripke import (
    KripkeStructure,
    LassoWord,
    common_shape,
    enumerate_lasso_paths,
    is_path,
    parse_kripke,
    trace_of,
)

from helpers import random_kripke, seven_state_tree

ONE_STATE = {"states": ["s0"], "initial": "s0", "transitions": {"s0": ["s0"]},
             "aps": ["a"], "labels": {"s0": ["a"]}}


def test_parse_one_state():
    k = parse_kripke(json.dumps(ONE_STATE))
    assert k.states == ("s0",)
    assert k.label("s0") == frozenset({"a"})


@pytest.mark.parametrize("change, message", [
    ({"transitions": {"s0": []}}, "total"),
    ({"transitions": {"s0": ["s9"]}}, "unknown state"),
    ({"labels": {"s0": ["zzz"]}}, "unknown proposition"),
    ({"initial": "s9"}, "initial"),
    ({"extra": 1}, "unknown keys"),
])
def test_parse_errors(change, message):
    with pytest.raises(KripkeError, match=message):
        parse_kripke(json.dumps({**ONE_STATE, **change}))


def test_malformed_json():
    with pytest.raises(KripkeError, match="malformed"):
        parse_kripke("{states: ")


def test_seven_state_structure_parses():
    k = seven_state_tree()
    again = parse_kripke(k.dumps())
    assert len(again) == 7
    assert again == k


def test_json_round_trip_is_identity():
    rng = random.Random(3)
    for _ in range(20):
        k = random_kripke(rng, rng.randint(1, 6))
        assert parse_kripke(k.dumps()).to_json() == k.to_json()


def test_lassos_one_state():
    k = parse_kripke(json.dumps(ONE_STATE))
    assert enumerate_lasso_paths(k, 1, 1) == {LassoWord((), ("s0",))}


def test_lassos_two_cycle():
    k = KripkeStructure(("s0", "s1"), "s0", {"s0": ("s1",), "s1": ("s0",)}, (), {})
    paths = enumerate_lasso_paths(k, 2, 2)
    assert LassoWord(("s0",), ("s1", "s0")).canonical() in paths


def test_lassos_seven_state_tree():
    paths = enumerate_lasso_paths(seven_state_tree(), 3, 1)
    assert len(paths) == 4
    assert {p.loop for p in paths} == {("s3",), ("s4",), ("s5",), ("s6",)}


def brute_force_lassos(k, max_stem, max_loop):
    out = set()
    for n in range(max_stem + 1):
        for stem in itertools.product(k.states, repeat=n):
            for m in range(1, max_loop + 1):
                for loop in itertools.product(k.states, repeat=m):
                    w = LassoWord(stem, loop)
                    if is_path(k, w):
                        out.add(w.canonical())
    return out


def test_lassos_match_brute_force():
    rng = random.Random(5)
    for _ in range(25):
        k = random_kripke(rng, rng.randint(1, 4))
        assert enumerate_lasso_paths(k, 2, 3) == brute_force_lassos(k, 2, 3)


def test_trace_of():
    k = KripkeStructure(("s0", "s1"), "s0", {"s0": ("s1",), "s1": ("s0",)}, ("a",), {"s1": {"a"}})
    t = trace_of(k, LassoWord(("s0",), ("s1", "s0")))
    assert t.same_word(LassoWord((frozenset(),), (frozenset({"a"}), frozenset())))


def test_trace_of_rejects_non_path():
    k = KripkeStructure(("s0", "s1"), "s0", {"s0": ("s1",), "s1": ("s0",)}, (), {})
    with pytest.raises(NotAPathError):
        trace_of(k, LassoWord(("s1",), ("s0",)))


def test_lasso_canonical_and_reshape():
    w = LassoWord(("a", "b"), ("a", "b", "a", "b"))
    assert w.canonical() == LassoWord((), ("a", "b"))
    r = w.reshape(3, 4)
    assert r.same_word(w)
    assert common_shape([LassoWord((), (1, 2)), LassoWord((0,), (1, 2, 3))]) == (1, 6)
    with pytest.raises(ValueError):
        LassoWord((1,), ())
