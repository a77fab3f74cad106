"""Products, unions, projections, and Kripke-structure restrictions."""

from __future__ import annotations

import itertools

from hypercheck.automata.alphabet import BOT, Alphabet
from hypercheck.automata.buchi import BuchiAutomaton, degeneralize, explore
from hypercheck.errors import AlphabetError
from hypercheck.kripke import KripkeStructure


def materialize(lazy, simplify: bool = True) -> BuchiAutomaton:
    """Explore the reachable part of an automaton given through the lazy protocol."""
    if isinstance(lazy, BuchiAutomaton):
        return lazy

    def out(key):
        for letter, succs in lazy.out(key).items():
            for t in succs:
                yield letter, t

    return explore(lazy.alphabet, lazy.initial, out, lazy.acc_mask, lazy.num_sets, simplify)


def _require_same_alphabet(a, b):
    if a.alphabet != b.alphabet:
        raise AlphabetError(
            f"alphabet mismatch: {list(a.alphabet.names)} vs {list(b.alphabet.names)}")


class Product:
    """Lazy synchronous product; acceptance sets of both sides are kept (GNBA)."""

    def __init__(self, a, b):
        _require_same_alphabet(a, b)
        self.a, self.b = a, b
        self.alphabet = a.alphabet
        self.initial = tuple((p, q) for p in a.initial for q in b.initial)
        self.num_sets = a.num_sets + b.num_sets

    def out(self, key):
        p, q = key
        ra, rb = self.a.out(p), self.b.out(q)
        if len(rb) < len(ra):
            pairs = ((letter, ra.get(letter), sb) for letter, sb in rb.items())
        else:
            pairs = ((letter, sa, rb.get(letter)) for letter, sa in ra.items())
        row = {}
        for letter, sa, sb in pairs:
            if sa and sb:
                row[letter] = tuple((x, y) for x in sa for y in sb)
        return row

    def acc_mask(self, key):
        p, q = key
        return self.a.acc_mask(p) | self.b.acc_mask(q) << self.a.num_sets


class Join:
    """Lazy product of automata over overlapping alphabets.

    ``alphabet`` must consist of exactly the components of ``a`` and ``b``;
    letters of the two sides combine when they agree on shared components.
    """

    def __init__(self, a, b, alphabet: Alphabet):
        names = set(a.alphabet.names) | set(b.alphabet.names)
        if set(alphabet.names) != names:
            raise AlphabetError(f"join alphabet {list(alphabet.names)} differs from the union "
                                f"of {list(a.alphabet.names)} and {list(b.alphabet.names)}")
        for c in list(a.alphabet) + list(b.alphabet):
            if alphabet[c.name] != c:
                raise AlphabetError(f"component {c.name!r} changes its domain")
        self.a, self.b = a, b
        self.alphabet = alphabet
        self.pos_a = [alphabet.index(n) for n in a.alphabet.names]
        self.pos_b = [alphabet.index(n) for n in b.alphabet.names]
        shared = [n for n in a.alphabet.names if n in b.alphabet]
        self.shared_a = [a.alphabet.index(n) for n in shared]
        self.shared_b = [b.alphabet.index(n) for n in shared]
        self.initial = tuple((p, q) for p in a.initial for q in b.initial)
        self.num_sets = a.num_sets + b.num_sets

    def out(self, key):
        p, q = key
        by_shared: dict = {}
        for lb, sb in self.b.out(q).items():
            by_shared.setdefault(tuple(lb[i] for i in self.shared_b), []).append((lb, sb))
        row = {}
        full = [None] * len(self.alphabet)
        for la, sa in self.a.out(p).items():
            matches = by_shared.get(tuple(la[i] for i in self.shared_a))
            if not matches:
                continue
            for v, j in zip(la, self.pos_a):
                full[j] = v
            for lb, sb in matches:
                for v, j in zip(lb, self.pos_b):
                    full[j] = v
                row[tuple(full)] = tuple((x, y) for x in sa for y in sb)
        return row

    def acc_mask(self, key):
        p, q = key
        return self.a.acc_mask(p) | self.b.acc_mask(q) << self.a.num_sets


def intersect(a, b) -> BuchiAutomaton:
    """Language intersection as a generalized automaton (acceptance sets of both operands)."""
    return materialize(Product(a, b))


def union(a, b) -> BuchiAutomaton:
    """Disjoint union of two automata over the same alphabet (result is an NBA)."""
    _require_same_alphabet(a, b)
    parts = (degeneralize(a), degeneralize(b))

    def out(key):
        side, q = key
        for letter, succs in parts[side].out(q).items():
            for t in succs:
                yield letter, (side, t)

    def mask(key):
        side, q = key
        return parts[side].acc_mask(q)

    init = [(0, q) for q in parts[0].initial] + [(1, q) for q in parts[1].initial]
    return explore(a.alphabet, init, out, mask, 1)


def project_exists(a: BuchiAutomaton, component: str) -> BuchiAutomaton:
    """Erase ``component`` from every transition letter (existential projection)."""
    i = a.alphabet.index(component)
    alphabet = a.alphabet.without(component)
    delta = []
    for row in a.delta:
        merged: dict = {}
        for letter, succs in row.items():
            short = letter[:i] + letter[i + 1:]
            bucket = merged.get(short)
            if bucket is None:
                merged[short] = dict.fromkeys(succs)
            else:
                bucket.update(dict.fromkeys(succs))
        delta.append({letter: tuple(b) for letter, b in merged.items()})
    return BuchiAutomaton(alphabet, a.initial, delta, a.acceptance, a.names)


def project_forall(a: BuchiAutomaton, component: str) -> BuchiAutomaton:
    """Universal projection, via complement / existential projection / complement."""
    from hypercheck.automata.complement import complement

    a.alphabet.index(component)
    return complement(project_exists(complement(a), component))


RESTRICTION_MODES = ("trace", "path", "full_path", "prefix", "delayed_start")


class KripkeRestriction:
    """Lazy product forcing one component to follow the Kripke structure.

    Modes (``component`` is read at every position):

    * ``trace``: the labels of a path from the initial state,
    * ``path`` / ``full_path``: a path from the initial state,
    * ``prefix``: a nonempty path prefix from the initial state, then ``BOT`` forever,
    * ``delayed_start``: ``BOT`` for ``delay`` positions, then a path starting at
      the state the ``reference`` component holds at position ``delay``.
    """

    def __init__(self, a, component: str, k: KripkeStructure, mode: str,
                 delay: int = 0, reference: str | None = None):
        if mode not in RESTRICTION_MODES:
            raise ValueError(f"unknown restriction mode {mode!r}")
        self.a = a
        self.alphabet = a.alphabet
        self.i = a.alphabet.index(component)
        comp = a.alphabet.components[self.i]
        self.succ = k.succ
        if mode == "trace":
            if comp.kind != "labels":
                raise AlphabetError(f"trace restriction needs a label-set component, {component!r} is {comp.kind}")
            self.value = tuple(
                sum(1 << j for j, p in enumerate(comp.aps) if p in k.labels[q]) for q in k.states)
        else:
            if comp.kind not in ("states", "padded") or comp.size != len(k):
                raise AlphabetError(f"{mode} restriction needs a state component over {len(k)} states, "
                                    f"{component!r} is {comp.kind} of size {comp.size}")
            if mode in ("prefix", "delayed_start") and comp.kind != "padded":
                raise AlphabetError(f"{mode} restriction needs a padded component, {component!r} is {comp.kind}")
            self.value = tuple(range(len(k)))
        self.ref = None
        if mode == "delayed_start":
            if reference is None:
                raise ValueError("delayed_start restriction needs a reference component")
            self.ref = a.alphabet.index(reference)
            start = ("wait", 0) if delay > 0 else ("start",)
        else:
            start = ("at", k.initial_index)
        self.mode, self.delay = mode, delay
        self.initial = tuple((q, start) for q in a.initial)
        # a prefix must end: one extra acceptance set for the BOT phase
        self.num_sets = a.num_sets + (mode == "prefix")

    def _moves(self, phase, letter):
        """Successor phases of ``phase`` when the current letter is ``letter``."""
        v = letter[self.i]
        tag = phase[0]
        if tag == "at":
            s = phase[1]
            if v != self.value[s]:
                return ()
            nxt = [("at", t) for t in self.succ[s]]
            if self.mode == "prefix":
                nxt.append(("bot",))
            return nxt
        if tag == "bot":
            return (phase,) if v == BOT else ()
        if tag == "wait":
            if v != BOT:
                return ()
            j = phase[1] + 1
            return (("wait", j) if j < self.delay else ("start",),)
        # start: adopt the reference component's current state
        r = letter[self.ref]
        if r == BOT or v != r:
            return ()
        return [("at", t) for t in self.succ[v]]

    def out(self, key):
        q, phase = key
        row = {}
        for letter, succs in self.a.out(q).items():
            moves = self._moves(phase, letter)
            if moves:
                row[letter] = tuple((t, m) for t in succs for m in moves)
        return row

    def acc_mask(self, key):
        mask = self.a.acc_mask(key[0])
        if self.mode == "prefix" and key[1][0] == "bot":
            mask |= 1 << self.a.num_sets
        return mask


def restrict_to_kripke(a, component: str, k: KripkeStructure, mode: str = "trace",
                       delay: int = 0, reference: str | None = None) -> BuchiAutomaton:
    """``L(a)`` intersected with the words whose ``component`` is K-consistent per ``mode``."""
    return materialize(KripkeRestriction(a, component, k, mode, delay, reference))


def cylindrify(a: BuchiAutomaton, alphabet: Alphabet) -> BuchiAutomaton:
    """Reinterpret ``a`` over a larger alphabet, leaving the new components unconstrained.

    ``alphabet`` must contain every component of ``a``'s alphabet; components
    may be reordered.
    """
    if alphabet == a.alphabet:
        return a
    positions = [alphabet.index(c.name) for c in a.alphabet]
    for c, j in zip(a.alphabet, positions):
        if alphabet.components[j] != c:
            raise AlphabetError(f"component {c.name!r} changes its domain")
    extra = [j for j in range(len(alphabet)) if j not in positions]
    extra_values = [alphabet.components[j].values for j in extra]
    fillers = list(itertools.product(*extra_values))
    delta = []
    for row in a.delta:
        new_row = {}
        for letter, succs in row.items():
            for fill in fillers:
                full = [None] * len(alphabet)
                for v, j in zip(letter, positions):
                    full[j] = v
                for v, j in zip(fill, extra):
                    full[j] = v
                new_row[tuple(full)] = succs
        delta.append(new_row)
    return BuchiAutomaton(alphabet, a.initial, delta, a.acceptance, a.names)
