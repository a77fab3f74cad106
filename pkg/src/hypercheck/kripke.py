"""Finite Kripke structures, their JSON format, and lasso words/paths."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Iterable

from hypercheck.errors import KripkeError, NotAPathError

_KEYS = ("states", "initial", "transitions", "aps", "labels")


@dataclass(frozen=True)
class LassoWord:
    """The ultimately periodic word ``stem . loop^omega``."""

    stem: tuple
    loop: tuple

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("lasso loop must be nonempty")

    def __len__(self):
        return len(self.stem) + len(self.loop)

    def __getitem__(self, i: int):
        if i < len(self.stem):
            return self.stem[i]
        return self.loop[(i - len(self.stem)) % len(self.loop)]

    def prefix(self, n: int) -> tuple:
        return tuple(self[i] for i in range(n))

    def map(self, fn) -> LassoWord:
        return LassoWord(tuple(map(fn, self.stem)), tuple(map(fn, self.loop)))

    def reshape(self, stem_len: int, loop_len: int) -> LassoWord:
        """Same word with a stem of ``stem_len`` and a loop of ``loop_len``
        (which must be a multiple of the current period)."""
        if stem_len < len(self.stem) or loop_len % len(self.loop):
            raise ValueError("cannot reshape lasso to a shorter stem or incompatible loop")
        return LassoWord(self.prefix(stem_len), tuple(self[stem_len + i] for i in range(loop_len)))

    def canonical(self) -> LassoWord:
        """Shortest stem and primitive loop; equal words have equal canonical forms."""
        loop = self.loop
        n = len(loop)
        for p in range(1, n + 1):
            if n % p == 0 and loop[:p] * (n // p) == loop:
                loop = loop[:p]
                break
        stem = self.stem
        while stem and stem[-1] == loop[-1]:
            stem = stem[:-1]
            loop = loop[-1:] + loop[:-1]
        return LassoWord(stem, loop)

    def same_word(self, other: LassoWord) -> bool:
        return self.canonical() == other.canonical()

    def to_json(self, letter=lambda x: x) -> dict:
        return {"stem": [letter(a) for a in self.stem], "loop": [letter(a) for a in self.loop]}


def common_shape(words: Iterable[LassoWord]) -> tuple[int, int]:
    """Stem and loop length onto which all ``words`` can be reshaped."""
    stem, loop = 0, 1
    for w in words:
        stem = max(stem, len(w.stem))
        loop = loop * len(w.loop) // gcd(loop, len(w.loop))
    return stem, loop


@dataclass(frozen=True)
class KripkeStructure:
    """A finite Kripke structure with last-state labeling.

    ``states`` keeps file order; the position of a state in that list is its
    dense index, used by every automaton construction.
    """

    states: tuple[str, ...]
    initial: str
    transitions: dict[str, tuple[str, ...]]
    aps: tuple[str, ...]
    labels: dict[str, frozenset[str]]
    index: dict[str, int] = field(init=False, repr=False, compare=False)
    succ: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    label_mask: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise KripkeError("a Kripke structure needs at least one state")
        if len(set(states)) != len(states):
            raise KripkeError("duplicate state identifiers")
        index = {q: i for i, q in enumerate(states)}
        if self.initial not in index:
            raise KripkeError(f"initial state {self.initial!r} is not a state")
        aps = tuple(self.aps)
        if len(set(aps)) != len(aps):
            raise KripkeError("duplicate atomic propositions")
        transitions = {}
        for q, succs in self.transitions.items():
            if q not in index:
                raise KripkeError(f"transition source {q!r} is not a state")
            for t in succs:
                if t not in index:
                    raise KripkeError(f"transition {q!r} -> {t!r} targets an unknown state")
            transitions[q] = tuple(dict.fromkeys(succs))
        for q in states:
            if not transitions.get(q):
                raise KripkeError(f"state {q!r} has no successor; the transition relation must be total")
        labels = {}
        for q, props in self.labels.items():
            if q not in index:
                raise KripkeError(f"label for unknown state {q!r}")
            for a in props:
                if a not in aps:
                    raise KripkeError(f"state {q!r} is labeled with unknown proposition {a!r}")
            labels[q] = frozenset(props)
        for q in states:
            labels.setdefault(q, frozenset())
        bit = {a: 1 << i for i, a in enumerate(aps)}
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "aps", aps)
        object.__setattr__(self, "transitions", transitions)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "succ", tuple(tuple(index[t] for t in transitions[q]) for q in states))
        object.__setattr__(self, "label_mask",
                           tuple(sum(bit[a] for a in labels[q]) for q in states))

    @property
    def initial_index(self) -> int:
        return self.index[self.initial]

    def __len__(self):
        return len(self.states)

    def label(self, state: str) -> frozenset[str]:
        return self.labels[state]

    def is_path_step(self, a: str, b: str) -> bool:
        return b in self.transitions[a]

    def restrict_aps(self, aps: Iterable[str]) -> KripkeStructure:
        """Same structure observing only ``aps`` (kept in this structure's order)."""
        keep = [a for a in self.aps if a in set(aps)]
        return KripkeStructure(self.states, self.initial, self.transitions, tuple(keep),
                               {q: self.labels[q] & set(keep) for q in self.states})

    def to_json(self) -> dict[str, Any]:
        return {
            "states": list(self.states),
            "initial": self.initial,
            "transitions": {q: list(self.transitions[q]) for q in self.states},
            "aps": list(self.aps),
            "labels": {q: [a for a in self.aps if a in self.labels[q]] for q in self.states},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def kripke_from_json(data: Any) -> KripkeStructure:
    if not isinstance(data, dict):
        raise KripkeError("Kripke structure JSON must be an object")
    unknown = set(data) - set(_KEYS)
    if unknown:
        raise KripkeError(f"unknown keys in Kripke structure: {sorted(unknown)}")
    missing = [k for k in _KEYS if k not in data]
    if missing:
        raise KripkeError(f"missing keys in Kripke structure: {missing}")
    states, initial, trans, aps, labels = (data[k] for k in _KEYS)
    if not (isinstance(states, list) and all(isinstance(q, str) for q in states)):
        raise KripkeError("'states' must be an array of strings")
    if not isinstance(initial, str):
        raise KripkeError("'initial' must be a string")
    if not (isinstance(aps, list) and all(isinstance(a, str) for a in aps)):
        raise KripkeError("'aps' must be an array of strings")
    for key, obj in (("transitions", trans), ("labels", labels)):
        if not isinstance(obj, dict) or not all(
                isinstance(v, list) and all(isinstance(x, str) for x in v) for v in obj.values()):
            raise KripkeError(f"'{key}' must map states to arrays of strings")
    return KripkeStructure(tuple(states), initial, trans, tuple(aps), labels)


def parse_kripke(text: str) -> KripkeStructure:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise KripkeError(f"malformed JSON: {exc}") from None
    return kripke_from_json(data)


def load_kripke(path) -> KripkeStructure:
    with open(path, encoding="utf-8") as fh:
        return parse_kripke(fh.read())


def enumerate_lasso_paths(k: KripkeStructure, max_stem: int, max_loop: int) -> set[LassoWord]:
    """All paths of ``k`` from the initial state of the form ``stem . loop^omega``
    with ``|stem| <= max_stem`` and ``|loop| <= max_loop``, in canonical form."""
    if max_loop < 1 or max_stem < 0:
        raise ValueError("lasso bounds must satisfy max_stem >= 0 and max_loop >= 1")
    out: set[LassoWord] = set()
    succ = k.succ
    s0 = k.initial_index

    def loops_from(start: int):
        # simple and non-simple cycles of length <= max_loop through ``start``
        stack = [(start, (start,))]
        while stack:
            q, seq = stack.pop()
            if start in succ[q]:
                yield seq
            if len(seq) < max_loop:
                for t in succ[q]:
                    stack.append((t, seq + (t,)))

    stems = [()]
    frontier = [()]
    for _ in range(max_stem):
        nxt = []
        for stem in frontier:
            choices = succ[stem[-1]] if stem else (s0,)
            for t in choices:
                nxt.append(stem + (t,))
        stems.extend(nxt)
        frontier = nxt
    cache = {}
    for stem in stems:
        heads = succ[stem[-1]] if stem else (s0,)
        for h in heads:
            if h not in cache:
                cache[h] = list(loops_from(h))
            for loop in cache[h]:
                word = LassoWord(tuple(k.states[i] for i in stem), tuple(k.states[i] for i in loop))
                out.add(word.canonical())
    return out


def is_path(k: KripkeStructure, p: LassoWord) -> bool:
    seq = p.prefix(len(p) + 1)
    if not seq or seq[0] != k.initial:
        return False
    if any(q not in k.index for q in seq):
        return False
    return all(k.is_path_step(a, b) for a, b in zip(seq, seq[1:]))


def trace_of(k: KripkeStructure, p: LassoWord) -> LassoWord:
    """Label sequence of the lasso path ``p`` (canonical form)."""
    if not is_path(k, p):
        raise NotAPathError(f"{p} is not a path of the Kripke structure from {k.initial!r}")
    return p.map(lambda q: k.labels[q]).canonical()
