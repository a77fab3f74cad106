"""LTL matrices to Büchi automata over tuple alphabets.

The translation is an on-the-fly tableau.  The matrix is brought into
negation normal form; a tableau node is the set of closure formulas a
position is obliged to satisfy, expanded until only literals and
next-step obligations remain:

* ``a | b`` branches, ``a & b`` keeps both;
* ``F a`` becomes ``a`` or ``X F a``, ``G a`` becomes ``a & X G a``;
* ``a U b`` and ``a W b`` become ``b`` or ``a & X (a U b)`` (resp. ``W``).

A node steps to every expansion of its next-step obligations.  Each ``U``
and ``F`` node contributes one acceptance set (the eventuality is not
pending, or its target was chosen), giving a generalized automaton that is
then degeneralized.  Formulas are only tracked while some obligation needs
them, so properties like ``F a`` give weak automata.
"""

from __future__ import annotations

import itertools
from typing import Mapping, Sequence

from hypercheck.automata.alphabet import BOT, Alphabet, labels_component, states_component
from hypercheck.automata.buchi import BuchiAutomaton, degeneralize, reduce_bisimulation, trim
from hypercheck.errors import AlphabetError
from hypercheck.formulas.rewrite import to_nnf
from hypercheck.formulas.syntax import Formula
from hypercheck.kripke import KripkeStructure


def component_of(node: Formula) -> str:
    """The alphabet component an atom reads: its index variable, else its own name."""
    return node.var if node.var is not None else node.name


def default_aps(matrix: Formula, components: Sequence[str]) -> dict[str, tuple[str, ...]]:
    """Per component, the sorted proposition names the matrix reads from it."""
    aps: dict[str, set] = {c: set() for c in components}
    for node in matrix.walk():
        if node.op == "atom":
            comp = component_of(node)
            if comp not in aps:
                raise AlphabetError(f"atom {node} reads component {comp!r}, which is not among {list(components)}")
            aps[comp].add(node.name)
    return {c: tuple(sorted(v)) for c, v in aps.items()}


EVENTUALITY = ("U", "F")


def _target(node: Formula) -> Formula:
    return node.children[1] if node.op == "U" else node.body


def _expand(todo, atom_key):
    """Tableau nodes ``(literals, next, old)`` for the obligations in ``todo``.

    ``atom_key`` maps an atom to its ``(component, bit)`` or ``None`` when
    it can never be true.  Literals are pairs ``(key, value)``.
    """
    out = []
    stack = [(tuple(todo), frozenset(), frozenset(), frozenset())]
    while stack:
        todo, old, lits, nxt = stack.pop()
        dead = False
        while todo and not dead:
            f, todo = todo[0], todo[1:]
            if f in old:
                continue
            old = old | {f}
            op = f.op
            if op == "true":
                continue
            if op == "false":
                dead = True
            elif op == "atom" or (op == "not" and f.body.op == "atom"):
                positive = op == "atom"
                key = atom_key(f if positive else f.body)
                if key is None:
                    dead = positive
                elif (key, not positive) in lits:
                    dead = True
                else:
                    lits = lits | {(key, positive)}
            elif op == "and":
                todo = f.children + todo
            elif op == "or":
                stack.append(((f.children[1],) + todo, old, lits, nxt))
                todo = (f.children[0],) + todo
            elif op == "X":
                nxt = nxt | {f.body}
            elif op == "G":
                todo = (f.body,) + todo
                nxt = nxt | {f}
            elif op == "F":
                stack.append((todo, old, lits, nxt | {f}))
                todo = (f.body,) + todo
            elif op in ("U", "W"):
                a, b = f.children
                stack.append(((a,) + todo, old, lits, nxt | {f}))
                todo = (b,) + todo
            else:
                raise ValueError(f"unexpected node {op!r} in an LTL matrix")
        if not dead:
            out.append((lits, nxt, old))
    return out


def matrix_to_nba(matrix: Formula, components: Sequence[str],
                  aps: Mapping[str, Sequence[str]] | None = None) -> BuchiAutomaton:
    """Büchi automaton for the words satisfying ``matrix``.

    ``components`` orders the alphabet; component ``c`` holds label sets over
    ``aps[c]`` (by default the propositions the matrix reads from ``c``).  The
    atom ``a[c]`` (or bare ``c`` for a quantified proposition) is true iff
    ``a`` is in component ``c``'s label set; atoms whose proposition is not in
    ``aps[c]`` are false.
    """
    components = list(components)
    if len(set(components)) != len(components):
        raise AlphabetError(f"duplicate components {components}")
    used = default_aps(matrix, components)
    if aps is None:
        aps = used
    aps = {c: tuple(aps.get(c, ())) for c in components}
    alphabet = Alphabet(tuple(labels_component(c, aps[c]) for c in components))
    root = to_nnf(matrix)
    eventualities = sorted({n for n in root.walk() if n.op in EVENTUALITY}, key=str)

    def atom_key(node):
        comp = component_of(node)
        if node.name not in aps[comp]:
            return None
        return components.index(comp), aps[comp].index(node.name)

    def letters_of(lits) -> list[tuple]:
        choices = []
        for ci, c in enumerate(components):
            full = (1 << len(aps[c])) - 1
            must = sum(1 << bit for (cj, bit), v in lits if cj == ci and v)
            never = sum(1 << bit for (cj, bit), v in lits if cj == ci and not v)
            choices.append([m for m in range(full + 1) if m & must == must and not m & never])
        return list(itertools.product(*choices))

    expansions: dict = {}

    def successors(nxt):
        if nxt not in expansions:
            found = {}
            for lits, new_nxt, old in _expand(sorted(nxt, key=str), atom_key):
                acc = tuple(e not in old or _target(e) in old for e in eventualities)
                found.setdefault((lits, new_nxt, acc), None)
            expansions[nxt] = list(found)
        return expansions[nxt]

    ids: dict = {}
    order: list = []

    def intern(node):
        if node not in ids:
            ids[node] = len(order)
            order.append(node)
        return ids[node]

    initial = [intern(node) for node in successors(frozenset({root}))]
    delta = []
    k = 0
    while k < len(order):
        lits, nxt, _ = order[k]
        succ = tuple(intern(node) for node in successors(nxt))
        delta.append({letter: succ for letter in letters_of(lits)} if succ else {})
        k += 1
    acceptance = [frozenset(q for q, node in enumerate(order) if node[2][i]) for i in range(len(eventualities))]
    gnba = BuchiAutomaton(alphabet, initial, delta, acceptance)
    return reduce_bisimulation(trim(degeneralize(trim(gnba))))


def relabel_to_states(a: BuchiAutomaton, k: KripkeStructure, padded: bool = False,
                      components: Sequence[str] | None = None) -> BuchiAutomaton:
    """Read label-set components through the labeling of ``k``.

    Each selected component (default: all) becomes a state component
    (``padded``: state or ``BOT``); a state reads like its label set and
    ``BOT`` reads as the empty label set.  Other components are kept.
    """
    selected = set(a.alphabet.names if components is None else components)
    comps = []
    masks = []
    for c in a.alphabet:
        if c.name not in selected:
            comps.append(c)
            masks.append({v: v for v in c.values})
            continue
        if c.kind != "labels":
            raise AlphabetError(f"component {c.name!r} does not hold label sets")
        missing = [p for p in c.aps if p not in k.aps]
        if missing:
            raise AlphabetError(f"propositions {missing} of component {c.name!r} are not in the Kripke structure")
        comps.append(states_component(c.name, len(k), padded))
        m = {s: sum(1 << j for j, p in enumerate(c.aps) if p in k.labels[name])
             for s, name in enumerate(k.states)}
        if padded:
            m[BOT] = 0
        masks.append(m)
    alphabet = Alphabet(tuple(comps))
    index: dict = {}
    for letter in alphabet.letters():
        label_letter = tuple(m[v] for m, v in zip(masks, letter))
        index.setdefault(label_letter, []).append(letter)
    delta = []
    for row in a.delta:
        new_row = {}
        for label_letter, succs in row.items():
            for letter in index.get(label_letter, ()):
                new_row[letter] = succs
        delta.append(new_row)
    return BuchiAutomaton(alphabet, a.initial, delta, a.acceptance, a.names)
