"""Structured tuple alphabets.

Every letter is a tuple of small integers, one per named component:

* ``labels`` components hold a bitmask over ``aps`` (a subset of 2^AP),
* ``states`` components hold a Kripke state index,
* ``padded`` components hold a state index or ``BOT``.

The unit alphabet has no components; its only letter is ``()``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from hypercheck.errors import AlphabetError

BOT = -1


@dataclass(frozen=True)
class Component:
    name: str
    kind: str
    size: int
    aps: tuple[str, ...] = ()

    @property
    def values(self) -> tuple[int, ...]:
        vals = tuple(range(self.size))
        return vals + (BOT,) if self.kind == "padded" else vals

    def encode_labels(self, labels: Iterable[str]) -> int:
        if self.kind != "labels":
            raise AlphabetError(f"component {self.name!r} does not hold label sets")
        labels = set(labels)
        return sum(1 << i for i, a in enumerate(self.aps) if a in labels)

    def decode_labels(self, value: int) -> frozenset[str]:
        return frozenset(a for i, a in enumerate(self.aps) if value >> i & 1)

    def describe(self) -> dict:
        out = {"name": self.name, "kind": self.kind, "size": self.size}
        if self.aps:
            out["aps"] = list(self.aps)
        return out


def labels_component(name: str, aps: Iterable[str]) -> Component:
    aps = tuple(aps)
    return Component(name, "labels", 1 << len(aps), aps)


def prop_component(name: str) -> Component:
    return labels_component(name, (name,))


def states_component(name: str, n: int, padded: bool = False) -> Component:
    return Component(name, "padded" if padded else "states", n)


@dataclass(frozen=True)
class Alphabet:
    components: tuple[Component, ...] = ()

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.components)

    def index(self, name: str) -> int:
        for i, c in enumerate(self.components):
            if c.name == name:
                return i
        raise AlphabetError(f"alphabet has no component {name!r} (components: {list(self.names)})")

    def __getitem__(self, name: str) -> Component:
        return self.components[self.index(name)]

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def letters(self):
        return itertools.product(*(c.values for c in self.components))

    @property
    def size(self) -> int:
        n = 1
        for c in self.components:
            n *= len(c.values)
        return n

    def without(self, name: str) -> Alphabet:
        i = self.index(name)
        return Alphabet(self.components[:i] + self.components[i + 1:])

    def check_letter(self, letter) -> None:
        if len(letter) != len(self.components):
            raise AlphabetError(f"letter {letter!r} has arity {len(letter)}, expected {len(self.components)}")
        for v, c in zip(letter, self.components):
            if v not in c.values:
                raise AlphabetError(f"value {v!r} is outside the domain of component {c.name!r}")


UNIT = Alphabet(())
