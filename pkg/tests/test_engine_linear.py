import random

import pytest

from hypercheck.engines.linear import check_linear, check_ltl
from hypercheck.errors import ResourceGuardError
from hypercheck.formulas import dualize_negation, parse_formula
from hypercheck.formulas import syntax as s
from hypercheck.formulas.syntax import split_prefix
from hypercheck.kripke import enumerate_lasso_paths, trace_of
from hypercheck.oracle.ltl_eval import eval_ltl_lasso

from helpers import (CORPUS, NI, branching_kripke, kripke, random_hyperltl, random_hyperqptl, random_kripke,
                     random_matrix)


def one_state(labelled=True):
    return kripke({"s0": ["s0"]}, {"s0": {"a"} if labelled else set()}, ("a",))


def test_one_state_all_traces_agree():
    f = parse_formula("forall p1. forall p2. G (a[p1] <-> a[p2])", "hyperltl")
    v = check_linear(one_state(), f, "hyperltl")
    assert v.holds
    assert [st.quantifier for st in v.steps] == ["forall p2", "forall p1"]


@pytest.mark.parametrize("name, logic, text, k, expected", CORPUS, ids=[c[0] for c in CORPUS])
def test_corpus(name, logic, text, k, expected):
    assert check_linear(k, parse_formula(text, logic), logic).holds is expected


def test_vacuous_sentences():
    rng = random.Random(1)
    for _ in range(10):
        k = random_kripke(rng, rng.randint(1, 4))
        assert check_linear(k, parse_formula("forall pi. true", "hyperltl")).holds
        assert not check_linear(k, parse_formula("exists pi. false", "hyperltl")).holds


def test_same_polarity_order_is_irrelevant():
    rng = random.Random(2)
    for _ in range(30):
        k = random_kripke(rng, rng.randint(1, 4))
        q = rng.choice(["forall", "exists"])
        atoms = [s.atom(p, v) for p in ("a", "b") for v in ("pi", "rho")]
        m = random_matrix(rng, atoms)
        f = s.quantifier(q, "trace", "pi", s.quantifier(q, "trace", "rho", m))
        g = s.quantifier(q, "trace", "rho", s.quantifier(q, "trace", "pi", m))
        assert check_linear(k, f).holds == check_linear(k, g).holds


def test_zero_prop_quantifiers_match_hyperltl():
    rng = random.Random(3)
    for _ in range(40):
        k = random_kripke(rng, rng.randint(1, 4))
        f = random_hyperltl(rng)
        assert check_linear(k, f, "hyperqptl").holds == check_linear(k, f, "hyperltl").holds


def test_negation_consistency_sample():
    rng = random.Random(4)
    for i in range(60):
        k = random_kripke(rng, rng.randint(1, 4))
        f, logic = (random_hyperltl(rng), "hyperltl") if i % 2 else (random_hyperqptl(rng), "hyperqptl")
        a = check_linear(k, f, logic, max_alternations=None).holds
        b = check_linear(k, dualize_negation(f), logic, max_alternations=None).holds
        assert a != b


def test_witness_refutes_universal_sentence():
    k = branching_kripke({"s1": {"o"}, "s2": set()}, ("h", "i", "o"))
    f = parse_formula(NI, "hyperltl")
    v = check_linear(k, f, witness=True)
    assert not v.holds
    traces = {trace_of(k, p) for p in enumerate_lasso_paths(k, 2, 1)}
    assert set(v.counterexample) == {"pi", "pi'"}
    for w in v.counterexample.values():
        assert any(w.same_word(t) for t in traces)
    _, matrix = split_prefix(f)
    assert not eval_ltl_lasso(matrix, v.counterexample)


def test_no_witness_when_holding_or_alternating():
    f = parse_formula("forall pi. exists rho. G (a[pi] <-> a[rho])", "hyperltl")
    assert check_linear(one_state(), f, witness=True).counterexample is None
    g = parse_formula("forall pi. exists rho. G (a[pi] & !a[rho])", "hyperltl")
    v = check_linear(one_state(), g, witness=True)
    assert not v.holds and v.counterexample is None


def test_alternation_guard():
    f = parse_formula("forall p. exists q. forall r. exists t. G (a[p] <-> a[q] <-> a[r] <-> a[t])", "hyperltl")
    with pytest.raises(ResourceGuardError, match="alternation"):
        check_linear(one_state(), f)
    assert check_linear(one_state(), f, max_alternations=None).holds


def test_ltl():
    k = kripke({"s0": ["s1"], "s1": ["s1", "s0"]}, {"s1": {"a"}}, ("a",))
    assert check_ltl(k, parse_formula("G F a", "ltl")).holds
    assert not check_ltl(k, parse_formula("F G a", "ltl")).holds
    assert check_ltl(k, parse_formula("X a", "ltl")).holds


def test_unknown_proposition_reads_false():
    f = parse_formula("forall pi. G !zzz[pi]", "hyperltl")
    assert check_linear(one_state(), f).holds
