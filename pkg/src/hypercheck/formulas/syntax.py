"""Abstract syntax shared by all supported hyperlogics.

A single immutable node type covers every logic.  ``op`` selects the node
kind; the remaining fields carry the payload relevant to that kind:

* ``atom``: ``name`` is the proposition, ``var`` the trace/path variable
  (``None`` for plain LTL atoms and quantified propositions).
* ``quant``: ``quant`` is ``"exists"``/``"forall"``, ``sort`` one of
  ``trace``, ``path``, ``prop``, ``fo``, ``so``, ``var`` the bound name.
* ``K``: knowledge operator; ``obs`` is the observation set, ``var`` the trace.
* ``P``, ``lt``, ``eq``, ``in``, ``E``: MPL[E] atoms with operands in ``args``
  (``P`` also carries the proposition in ``name``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator


class LogicId(enum.Enum):
    LTL = "ltl"
    HyperLTL = "hyperltl"
    HyperQPTL = "hyperqptl"
    HyperQPTL_K = "hyperqptl-k"
    HyperCTLStar = "hyperctls"
    MPLE = "mple"
    HyperQPTLPlus = "hyperqptl+"
    S1SE = "s1se"
    HyperQCTLStar = "hyperqctls"

    @property
    def undecidable(self) -> bool:
        return self in UNDECIDABLE

    @classmethod
    def from_selector(cls, text: str) -> "LogicId":
        from hypercheck.errors import UnknownLogicError

        try:
            return cls(text.strip().lower())
        except ValueError:
            raise UnknownLogicError(f"unknown logic selector {text!r}") from None


UNDECIDABLE = frozenset({LogicId.HyperQPTLPlus, LogicId.S1SE, LogicId.HyperQCTLStar})

UNARY_TEMPORAL = frozenset({"X", "F", "G"})
BINARY_TEMPORAL = frozenset({"U", "W"})
TEMPORAL = UNARY_TEMPORAL | BINARY_TEMPORAL
BOOLEAN_BINARY = frozenset({"and", "or", "implies", "iff"})
MPL_ATOMS = frozenset({"P", "lt", "eq", "in", "E"})


@dataclass(frozen=True)
class Formula:
    op: str
    children: tuple[Formula, ...] = ()
    name: str | None = None
    var: str | None = None
    quant: str | None = None
    sort: str | None = None
    args: tuple[str, ...] = ()
    obs: frozenset[str] | None = None
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        key = (self.op, self.children, self.name, self.var, self.quant, self.sort, self.args, self.obs)
        object.__setattr__(self, "_hash", hash(key))

    def __hash__(self):
        return self._hash

    def __str__(self):
        from hypercheck.formulas.printer import to_text

        return to_text(self)

    @property
    def body(self) -> Formula:
        return self.children[0]

    @property
    def is_quantifier(self) -> bool:
        return self.op == "quant"

    def walk(self) -> Iterator[Formula]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def replace_children(self, children) -> Formula:
        return Formula(self.op, tuple(children), self.name, self.var, self.quant,
                       self.sort, self.args, self.obs)


TRUE = Formula("true")
FALSE = Formula("false")


def atom(name: str, var: str | None = None) -> Formula:
    return Formula("atom", name=name, var=var)


def neg(f: Formula) -> Formula:
    return Formula("not", (f,))


def _fold(op, unit, fs):
    fs = list(fs)
    if not fs:
        return unit
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Formula(op, (f, out))
    return out


def conj(*fs: Formula) -> Formula:
    return _fold("and", TRUE, fs)


def disj(*fs: Formula) -> Formula:
    return _fold("or", FALSE, fs)


def implies(a: Formula, b: Formula) -> Formula:
    return Formula("implies", (a, b))


def iff(a: Formula, b: Formula) -> Formula:
    return Formula("iff", (a, b))


def nxt(f: Formula) -> Formula:
    return Formula("X", (f,))


def eventually(f: Formula) -> Formula:
    return Formula("F", (f,))


def always(f: Formula) -> Formula:
    return Formula("G", (f,))


def until(a: Formula, b: Formula) -> Formula:
    return Formula("U", (a, b))


def weak_until(a: Formula, b: Formula) -> Formula:
    return Formula("W", (a, b))


def quantifier(quant: str, sort: str, var: str, body: Formula) -> Formula:
    return Formula("quant", (body,), var=var, quant=quant, sort=sort)


def forall(var: str, body: Formula, sort: str = "trace") -> Formula:
    return quantifier("forall", sort, var, body)


def exists(var: str, body: Formula, sort: str = "trace") -> Formula:
    return quantifier("exists", sort, var, body)


def knows(obs, var: str, body: Formula) -> Formula:
    return Formula("K", (body,), var=var, obs=frozenset(obs))


def pred(label: str, x: str) -> Formula:
    return Formula("P", name=label, args=(x,))


def prefix_of(x: str, y: str) -> Formula:
    return Formula("lt", args=(x, y))


def same(x: str, y: str) -> Formula:
    return Formula("eq", args=(x, y))


def member(x: str, X: str) -> Formula:
    return Formula("in", args=(x, X))


def equal_level(x: str, y: str) -> Formula:
    return Formula("E", args=(x, y))


def flip(quant: str) -> str:
    return "forall" if quant == "exists" else "exists"


def split_prefix(f: Formula) -> tuple[list[tuple[str, str, str]], Formula]:
    """Split leading quantifiers off ``f``: ``([(quant, sort, var), ...], matrix)``."""
    prefix = []
    while f.op == "quant":
        prefix.append((f.quant, f.sort, f.var))
        f = f.body
    return prefix, f


def join_prefix(prefix, matrix: Formula) -> Formula:
    for quant, sort, var in reversed(list(prefix)):
        matrix = quantifier(quant, sort, var, matrix)
    return matrix


def has_quantifier(f: Formula) -> bool:
    return any(n.op == "quant" for n in f.walk())


def alternations(quants) -> int:
    """Number of polarity switches in a sequence of ``"exists"``/``"forall"``."""
    quants = list(quants)
    return sum(1 for a, b in zip(quants, quants[1:]) if a != b)


def atoms_of(f: Formula) -> set[tuple[str, str | None]]:
    return {(n.name, n.var) for n in f.walk() if n.op == "atom"}


def bound_names(f: Formula) -> set[str]:
    return {n.var for n in f.walk() if n.op == "quant"}


def all_names(f: Formula) -> set[str]:
    names = set()
    for n in f.walk():
        for v in (n.name, n.var):
            if v is not None:
                names.add(v)
        names.update(n.args)
        if n.obs:
            names.update(n.obs)
    return names


def fresh_name(base: str, taken) -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"


def rename_bound(f: Formula, mapping: dict[str, str]) -> Formula:
    """Alpha-rename bound variables (and their occurrences) per ``mapping``.

    Renames are applied by name, so the mapping must not capture names
    already used elsewhere in ``f``.
    """

    def go(node, active):
        if node.op == "quant" and node.var in mapping:
            active = active | {node.var}
            body = go(node.body, active)
            return Formula("quant", (body,), var=mapping[node.var], quant=node.quant, sort=node.sort)
        kids = tuple(go(c, active) for c in node.children)
        name, var, args = node.name, node.var, node.args
        if node.op == "atom":
            if var is not None and var in active:
                var = mapping[var]
            if var is None and name in active:
                name = mapping[name]
        elif node.op == "K" and var in active:
            var = mapping[var]
        elif node.op in MPL_ATOMS:
            args = tuple(mapping[a] if a in active else a for a in args)
        return Formula(node.op, kids, name, var, node.quant, node.sort, args, node.obs)

    return go(f, frozenset())


def unique_binders(f: Formula) -> Formula:
    """Rename binders so that every quantifier binds a distinct name."""
    taken = set(all_names(f))
    seen: set[str] = set()

    def go(node):
        if node.op == "quant":
            if node.var in seen:
                new = fresh_name(node.var, taken)
                taken.add(new)
                node = rename_bound(node, {node.var: new})
            seen.add(node.var)
            return node.replace_children([go(node.body)])
        if not node.children:
            return node
        return node.replace_children([go(c) for c in node.children])

    return go(f)
