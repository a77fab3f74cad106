import random

import pytest

from hypercheck.engines.mple import VarEnv, check_mple, mple_alternations, prepare
from hypercheck.errors import AlphabetError, ResourceGuardError
from hypercheck.formulas import parse_formula
from hypercheck.formulas import syntax as s

from helpers import kripke, random_kripke, random_mple, seven_state_tree

ONE = kripke({"s0": ["s0"]}, {}, ("a",))
LINE = kripke({"s0": ["s1"], "s1": ["s1"]}, {"s1": {"a"}}, ("a",))
FORK = kripke({"s0": ["s1", "s2"], "s1": ["s1"], "s2": ["s2"]}, {}, ("a",))
TREE = seven_state_tree()

CASES = [
    (ONE, "exists1 x. x = x", True),
    (ONE, "exists1 x. P{a}(x)", False),
    (LINE, "exists1 x. P{a}(x)", True),
    # a single path has one node per level
    (LINE, "exists1 x. exists1 y. E(x,y) & !(x = y)", False),
    (FORK, "exists1 x. exists1 y. E(x,y) & !(x = y)", True),
    (TREE, "exists2 Y. exists1 x. x in Y & P{a}(x)", True),
    (ONE, "exists2 Y. exists1 x. x in Y & P{a}(x)", False),
    (TREE, "forall1 x. exists1 y. x < y & !(x = y)", True),
    (TREE, "exists1 x. forall1 y. y < x", False),
    (TREE, "forall2 Y. exists1 x. x in Y & P{a}(x)", False),
    (TREE, "forall1 x. E(x,x)", True),
]


@pytest.mark.parametrize("k, text, expected", CASES, ids=[c[1] for c in CASES])
def test_examples(k, text, expected):
    assert check_mple(k, parse_formula(text, "mple"), max_alternations=None).holds is expected


def test_label_set_constant():
    f = parse_formula("exists1 x. P{a}(x) & exists1 y. x < y & !P{a}(y)", "mple")
    assert not check_mple(LINE, f).holds
    assert check_mple(TREE, parse_formula("exists1 x. !P{a}(x)", "mple")).holds


def test_alternations_and_guard():
    f = parse_formula("forall1 x. exists1 y. forall1 z. exists1 w. x < w", "mple")
    # counted from an implicit existential at the root
    assert mple_alternations(prepare(f)) == 4
    with pytest.raises(ResourceGuardError):
        check_mple(ONE, f)


def test_duplicate_variables_in_env():
    with pytest.raises(AlphabetError):
        VarEnv((("x", "fo"), ("x", "so")))


def test_negation_consistency_sample():
    rng = random.Random(31)
    for _ in range(60):
        k = random_kripke(rng, rng.randint(1, 3), aps=("a",))
        f = random_mple(rng)
        a = check_mple(k, f, max_alternations=None).holds
        b = check_mple(k, s.neg(f), max_alternations=None).holds
        assert a != b
