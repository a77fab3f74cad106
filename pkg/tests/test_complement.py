import random

import pytest

from hypercheck.automata.alphabet import Alphabet, labels_component
from hypercheck.automata.buchi import (
    BuchiAutomaton,
    accepts_lasso,
    empty_automaton,
    language_is_empty,
    universal_automaton,
)
from hypercheck.automata.complement import (
    BreakpointComplement,
    DeterministicComplement,
    RankComplement,
    SliceComplement,
    complement,
    complement_lazy,
    tight_rankings,
    weak_accepting_states,
)

from helpers import random_lasso, random_nba

AB = Alphabet((labels_component("x", ("a", "b")),))
LETTERS = list(AB.letters())


def test_complement_of_empty_is_universal():
    c = complement(empty_automaton(AB))
    rng = random.Random(0)
    assert all(accepts_lasso(c, random_lasso(rng, LETTERS)) for _ in range(50))


def test_complement_of_universal_is_empty():
    assert language_is_empty(complement(universal_automaton(AB)))


def test_unknown_method():
    with pytest.raises(ValueError):
        complement(universal_automaton(AB), "magic")


def test_dispatch():
    dba = BuchiAutomaton(AB, (0,), [{l: (0,) for l in LETTERS}], ({0},))
    assert isinstance(complement_lazy(dba), DeterministicComplement)
    # eventually always a: weak, nondeterministic
    fg = BuchiAutomaton(AB, (0,), [{l: (0, 1) if l[0] & 1 else (0,) for l in LETTERS},
                                   {l: (1,) for l in LETTERS if l[0] & 1}], ({1},))
    assert weak_accepting_states(fg) == frozenset({1})
    assert isinstance(complement_lazy(fg), BreakpointComplement)
    # a state that may cycle both through and around the accepting state
    mixed = BuchiAutomaton(AB, (0,), [{(0,): (0, 1), (1,): (0,)}, {(0,): (0,), (2,): (1,)}], ({1},))
    assert weak_accepting_states(mixed) is None
    assert isinstance(complement_lazy(mixed), SliceComplement)
    assert isinstance(complement_lazy(mixed, "rank"), RankComplement)


def test_tight_rankings_small():
    rankings = tight_rankings([0, 1], {0: 3, 1: 3}, frozenset({1}), 1)
    # max rank 1: the non-accepting state must take rank 1, the accepting one 0
    assert rankings == [(1, 0)]
    assert tight_rankings([0], {0: 3}, frozenset(), 3) == []


def xor_violations(method, seed, count, max_states, lassos):
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        a = random_nba(rng, rng.randint(1, max_states))
        c = complement(a, method)
        for _ in range(lassos):
            w = random_lasso(rng, LETTERS)
            bad += accepts_lasso(a, w) == accepts_lasso(c, w)
    return bad


@pytest.mark.parametrize("method", ["auto", "slice"])
def test_xor_membership(method):
    assert xor_violations(method, 11, 60, 5, 20) == 0


def test_xor_membership_rank():
    assert xor_violations("rank", 12, 40, 4, 20) == 0


def test_xor_membership_weak_inputs():
    rng = random.Random(13)
    checked = 0
    while checked < 40:
        a = random_nba(rng, rng.randint(2, 6))
        if weak_accepting_states(a) is None or a.is_deterministic():
            continue
        checked += 1
        c = complement(a)
        for _ in range(20):
            w = random_lasso(rng, LETTERS)
            assert accepts_lasso(a, w) != accepts_lasso(c, w)


def test_complement_is_deterministic():
    a = random_nba(random.Random(14), 5)
    assert complement(a).to_json() == complement(a).to_json()
