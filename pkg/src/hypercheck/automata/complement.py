"""Büchi complementation.

The general construction is slice based.  The split tree of a word
separates, level by level, the runs that just visited an accepting state
from the others; the word is accepted iff some branch turns towards the
accepting side infinitely often.  The complement follows the levels
deterministically, guesses at some point which nodes have finite subtrees,
and checks those guesses with a breakpoint.

A rank-based construction is kept as an alternative ("rank"): a word is
rejected iff its run DAG admits an odd ranking whose level rankings are
eventually tight with a fixed maximum.  It tends to be far larger than the
slice construction on the same input.

Two cheaper routes come first.  A deterministic Büchi automaton is
complemented as a co-Büchi condition with two copies.  An inherently weak
automaton (in every strongly connected component either all cycles accept
or none does) is complemented deterministically with a breakpoint
construction: a word is rejected iff every run eventually settles in a
rejecting component.
"""

from __future__ import annotations

from hypercheck.automata.alphabet import UNIT
from hypercheck.automata.buchi import (
    BuchiAutomaton,
    _successor_sets,
    degeneralize,
    empty_automaton,
    language_is_empty,
    reduce_bisimulation,
    trim,
    strongly_connected_components,
    universal_automaton,
)
from hypercheck.automata.ops import materialize

TOP = ("top",)


def tight_rankings(states, bound, accepting, max_rank):
    """All tight level rankings on ``states`` with maximum rank ``max_rank``.

    ``bound[q]`` caps the rank of ``q``; states in ``accepting`` get even ranks.
    Rankings are returned as tuples aligned with ``states``.
    """
    n = len(states)
    odd_needed = (max_rank + 1) // 2
    out = []
    ranks = [0] * n
    used = [0] * (max_rank + 1)

    def missing():
        return sum(1 for r in range(1, max_rank + 1, 2) if not used[r])

    def go(i):
        if missing() > n - i:
            return
        if i == n:
            out.append(tuple(ranks))
            return
        q = states[i]
        top = min(bound[q], max_rank)
        for r in range(top + 1):
            if r % 2 and q in accepting:
                continue
            ranks[i] = r
            used[r] += 1
            go(i + 1)
            used[r] -= 1

    if odd_needed <= n:
        go(0)
    return out


class RankComplement:
    """Lazy rank-based complement of an NBA."""

    num_sets = 1

    def __init__(self, a: BuchiAutomaton):
        self.a = a
        self.alphabet = a.alphabet
        self.accepting = a.accepting
        self.letters = list(a.alphabet.letters())
        self.initial = (("S", frozenset(a.initial)),)
        self._cache: dict = {}

    def acc_mask(self, key):
        if key is TOP or key == TOP:
            return 1
        return 1 if key[0] == "R" and not key[2] else 0

    def _groups(self, domain):
        """Letters grouped by the successor sets of every state in ``domain``."""
        delta = self.a.delta
        groups: dict = {}
        for letter in self.letters:
            sig = tuple(delta[q].get(letter, ()) for q in domain)
            groups.setdefault(sig, []).append(letter)
        return groups

    def out(self, key):
        row = self._cache.get(key)
        if row is not None:
            return row
        if key == TOP:
            row = {letter: (TOP,) for letter in self.letters}
        elif key[0] == "S":
            row = self._subset_out(key[1])
        else:
            row = self._rank_out(key[1], key[2])
        self._cache[key] = row
        return row

    def _subset_out(self, subset):
        domain = sorted(subset)
        row = {}
        for sig, letters in self._groups(domain).items():
            nxt = frozenset(t for succs in sig for t in succs)
            if not nxt:
                targets = (TOP,)
            else:
                order = sorted(nxt)
                bound = dict.fromkeys(order, 2 * len(order) - 1)
                targets = [("S", nxt)]
                for r in range(1, 2 * len(order), 2):
                    for f in tight_rankings(order, bound, self.accepting, r):
                        ranking = tuple(zip(order, f))
                        targets.append(("R", ranking, _even(ranking)))
                targets = tuple(targets)
            for letter in letters:
                row[letter] = targets
        return row

    def _rank_out(self, ranking, breakpoint):
        domain = [q for q, _ in ranking]
        rank = dict(ranking)
        max_rank = max(rank.values())
        row = {}
        for sig, letters in self._groups(domain).items():
            bound: dict = {}
            from_break = set()
            for q, succs in zip(domain, sig):
                for t in succs:
                    if t not in bound or rank[q] < bound[t]:
                        bound[t] = rank[q]
                    if q in breakpoint:
                        from_break.add(t)
            if not bound:
                targets = (TOP,)
            else:
                order = sorted(bound)
                targets = []
                for f in tight_rankings(order, bound, self.accepting, max_rank):
                    nxt = tuple(zip(order, f))
                    if breakpoint:
                        o = frozenset(t for t, r in nxt if r % 2 == 0 and t in from_break)
                    else:
                        o = _even(nxt)
                    targets.append(("R", nxt, o))
                targets = tuple(targets)
            if targets:
                for letter in letters:
                    row[letter] = targets
        return row


def _even(ranking):
    return frozenset(q for q, r in ranking if r % 2 == 0)


class DeterministicComplement:
    """Complement of a deterministic Büchi automaton: eventually never accepting."""

    num_sets = 1

    def __init__(self, a: BuchiAutomaton):
        self.a = a
        self.alphabet = a.alphabet
        self.accepting = a.accepting
        self.letters = list(a.alphabet.letters())
        self.initial = tuple(("d", q) for q in a.initial) or (TOP,)

    def acc_mask(self, key):
        return 0 if key[0] == "d" else 1

    def out(self, key):
        if key == TOP:
            return {letter: (TOP,) for letter in self.letters}
        tag, q = key
        row = {}
        delta = self.a.delta[q]
        for letter in self.letters:
            succs = delta.get(letter)
            if not succs:
                row[letter] = (TOP,)
                continue
            t = succs[0]
            targets = []
            if tag == "d":
                targets.append(("d", t))
            if t not in self.accepting:
                targets.append(("c", t))
            if targets:
                row[letter] = tuple(targets)
        return row


def weak_accepting_states(a: BuchiAutomaton) -> frozenset | None:
    """States in accepting components if ``a`` (one acceptance set) is
    inherently weak, else ``None``."""
    succ = _successor_sets(a)
    accepting = a.accepting
    good = set()
    for comp in strongly_connected_components(range(a.num_states), succ.__getitem__):
        members = set(comp)
        if len(comp) == 1 and comp[0] not in succ[comp[0]]:
            continue
        if not members & accepting:
            continue
        rest = members - accepting
        for sub in strongly_connected_components(
                sorted(rest), lambda q: [t for t in succ[q] if t in rest]):
            if len(sub) > 1 or sub[0] in succ[sub[0]]:
                return None
        good |= members
    return frozenset(good)


class BreakpointComplement:
    """Deterministic complement of an inherently weak NBA.

    A state is ``(S, O)``: ``S`` the reachable subset, ``O`` the runs that
    have stayed in accepting components since the last breakpoint.  The
    word is rejected iff ``O`` empties infinitely often.
    """

    num_sets = 1

    def __init__(self, a: BuchiAutomaton, good: frozenset):
        self.a = a
        self.good = good
        self.alphabet = a.alphabet
        self.letters = list(a.alphabet.letters())
        start = frozenset(a.initial)
        self.initial = ((start, start & good),) if start else (TOP,)
        self._cache: dict = {}

    def acc_mask(self, key):
        return 1 if key == TOP or not key[1] else 0

    def out(self, key):
        if key == TOP:
            return {letter: (TOP,) for letter in self.letters}
        row = self._cache.get(key)
        if row is not None:
            return row
        subset, tracked = key
        domain = sorted(subset)
        delta = self.a.delta
        groups: dict = {}
        for letter in self.letters:
            sig = tuple(delta[q].get(letter, ()) for q in domain)
            groups.setdefault(sig, []).append(letter)
        row = {}
        for sig, letters in groups.items():
            nxt = frozenset(t for succs in sig for t in succs)
            if not nxt:
                target = TOP
            elif tracked:
                target = (nxt, frozenset(t for q, succs in zip(domain, sig)
                                         if q in tracked for t in succs) & self.good)
            else:
                target = (nxt, nxt & self.good)
            for letter in letters:
                row[letter] = (target,)
        self._cache[key] = row
        return row


class SliceComplement:
    """Lazy slice-based complement of an NBA.

    The split tree of a word has the initial set at its root; a node ``P``
    has a left child ``delta(P) & F`` and a right child ``delta(P) - F``,
    and every state is kept only in its leftmost occurrence on a level.
    The word is accepted iff some infinite path turns left infinitely
    often.  A level is a slice, the tuple of its nonempty sets.

    The upper part follows slices deterministically.  At some level the
    complement guesses which nodes have finite subtrees ("die") and which
    may continue; a continuing node passes that to its right child and its
    left child must die.  A breakpoint set of dying nodes checks that they
    really die out.  Past the guess every infinite path is then on
    continuing nodes and turns right only, so the word is rejected.
    """

    num_sets = 1

    def __init__(self, a: BuchiAutomaton):
        self.a = a
        self.alphabet = a.alphabet
        self.accepting = a.accepting
        self.letters = list(a.alphabet.letters())
        start = frozenset(a.initial)
        if not start:
            self.initial = (TOP,)
        else:
            root = (start,)
            self.initial = (("U", root),) + self._guesses(root)
        self._cache: dict = {}

    def acc_mask(self, key):
        return 1 if key == TOP or (key[0] == "L" and not any(key[3])) else 0

    @staticmethod
    def _guesses(slice_):
        out = []
        for mask in range(1 << len(slice_)):
            dies = tuple(bool(mask >> i & 1) for i in range(len(slice_)))
            out.append(("L", slice_, dies, dies))
        return tuple(out)

    def _split(self, slice_, sig):
        """Children of every node as ``(set, parent index, is_left)``, reduced."""
        seen: set = set()
        children = []
        for i, succs in enumerate(sig):
            reach = frozenset(t for group in succs for t in group)
            for left, part in ((True, reach & self.accepting), (False, reach - self.accepting)):
                part = part - seen
                if part:
                    seen |= part
                    children.append((part, i, left))
        return children

    def out(self, key):
        if key == TOP:
            return {letter: (TOP,) for letter in self.letters}
        row = self._cache.get(key)
        if row is not None:
            return row
        slice_ = key[1]
        delta = self.a.delta
        groups: dict = {}
        for letter in self.letters:
            sig = tuple(tuple(delta[q].get(letter, ()) for q in sorted(node)) for node in slice_)
            groups.setdefault(sig, []).append(letter)
        row = {}
        for sig, letters in groups.items():
            children = self._split(slice_, sig)
            nxt = tuple(part for part, _, _ in children)
            if not nxt:
                targets = (TOP,)
            elif key[0] == "U":
                targets = (("U", nxt),) + self._guesses(nxt)
            else:
                _, _, dies, tracked = key
                new_dies = tuple(left or dies[i] for _, i, left in children)
                if any(tracked):
                    new_tracked = tuple(tracked[i] for _, i, _ in children)
                else:
                    new_tracked = new_dies
                targets = (("L", nxt, new_dies, new_tracked),)
            for letter in letters:
                row[letter] = targets
        self._cache[key] = row
        return row


METHODS = ("auto", "rank", "slice")


def complement_lazy(a, method: str = "auto"):
    """A lazily explored automaton for the complement of ``a``.

    ``method`` picks the general construction ("slice" by default, or
    "rank"); "auto" also tries the deterministic and weak special cases.
    """
    if method not in METHODS:
        raise ValueError(f"unknown complementation method {method!r}; choose from {METHODS}")
    if not isinstance(a, BuchiAutomaton):
        a = materialize(a)
    a = reduce_bisimulation(trim(degeneralize(a)))
    if method == "rank":
        return RankComplement(a)
    if method == "auto":
        if a.is_deterministic():
            return DeterministicComplement(a)
        good = weak_accepting_states(a)
        if good is not None:
            return BreakpointComplement(a, good)
    return SliceComplement(a)


def complement(a, method: str = "auto") -> BuchiAutomaton:
    """An NBA accepting exactly the words ``a`` rejects."""
    if a.alphabet == UNIT:
        return empty_automaton(UNIT) if not language_is_empty(a) else universal_automaton(UNIT)
    return trim(materialize(complement_lazy(a, method)))
