"""Explicit (generalized) Büchi automata and the algorithms that only read them.

Automata are immutable after construction.  States are dense integers in
discovery order, which makes every construction deterministic.  Any object
exposing ``alphabet``, ``initial``, ``out(q)``, ``acc_mask(q)`` and
``num_sets`` can be fed to :func:`explore` and the product constructions;
complementation uses that to stay on-the-fly.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable

from hypercheck.automata.alphabet import UNIT, Alphabet
from hypercheck.kripke import LassoWord


class BuchiAutomaton:
    """Nondeterministic Büchi automaton with one or more acceptance sets.

    ``acceptance`` is a tuple of state sets.  One set is the ordinary Büchi
    condition; several sets form a generalized condition (every set must be
    visited infinitely often); zero sets accept every infinite run.
    """

    __slots__ = ("alphabet", "initial", "delta", "acceptance", "names", "_masks")

    def __init__(self, alphabet: Alphabet, initial, delta, acceptance, names=None):
        self.alphabet = alphabet
        self.initial = tuple(initial)
        self.delta = tuple(delta)
        self.acceptance = tuple(frozenset(f) for f in acceptance)
        self.names = tuple(names) if names is not None else tuple(range(len(self.delta)))
        masks = [0] * len(self.delta)
        for i, f in enumerate(self.acceptance):
            for q in f:
                masks[q] |= 1 << i
        self._masks = masks

    @property
    def num_states(self) -> int:
        return len(self.delta)

    def __len__(self):
        return len(self.delta)

    @property
    def num_sets(self) -> int:
        return len(self.acceptance)

    @property
    def is_generalized(self) -> bool:
        return len(self.acceptance) != 1

    @property
    def accepting(self) -> frozenset[int]:
        if self.is_generalized:
            raise ValueError("generalized automaton has no single accepting set; degeneralize first")
        return self.acceptance[0]

    def out(self, q: int) -> dict:
        return self.delta[q]

    def acc_mask(self, q: int) -> int:
        return self._masks[q]

    def transitions(self):
        for q, row in enumerate(self.delta):
            for letter, succs in row.items():
                for t in succs:
                    yield q, letter, t

    @property
    def num_transitions(self) -> int:
        return sum(len(s) for row in self.delta for s in row.values())

    def is_deterministic(self) -> bool:
        return len(self.initial) <= 1 and all(len(s) <= 1 for row in self.delta for s in row.values())

    def to_json(self) -> dict:
        return {
            "alphabet": [c.describe() for c in self.alphabet],
            "states": [str(n) for n in self.names],
            "initial": list(self.initial),
            "transitions": [[q, list(letter), t] for q, letter, t in self.transitions()],
            "acceptance": [sorted(f) for f in self.acceptance],
        }

    def __repr__(self):
        return (f"BuchiAutomaton(components={list(self.alphabet.names)}, states={self.num_states}, "
                f"transitions={self.num_transitions}, sets={self.num_sets})")


def explore(alphabet: Alphabet, initial: Iterable[Hashable],
            out: Callable[[Hashable], Iterable[tuple[tuple, Hashable]]],
            acc_mask: Callable[[Hashable], int], num_sets: int,
            simplify: bool = True) -> BuchiAutomaton:
    """Build the reachable part of an implicitly given automaton.

    ``out(key)`` yields ``(letter, successor_key)`` pairs; ``acc_mask(key)``
    gives the acceptance sets ``key`` belongs to as a bitmask.
    """
    ids: dict = {}
    names = []
    queue = deque()

    def intern(key):
        i = ids.get(key)
        if i is None:
            i = ids[key] = len(names)
            names.append(key)
            queue.append(key)
        return i

    init = []
    for key in initial:
        i = intern(key)
        if i not in init:
            init.append(i)
    delta = []
    masks = []
    while queue:
        key = queue.popleft()
        row: dict = {}
        for letter, succ in out(key):
            j = intern(succ)
            bucket = row.get(letter)
            if bucket is None:
                row[letter] = [j]
            elif j not in bucket:
                bucket.append(j)
        delta.append({letter: tuple(b) for letter, b in row.items()})
        masks.append(acc_mask(key))
    sets = [frozenset(q for q, m in enumerate(masks) if m >> i & 1) for i in range(num_sets)]
    if simplify:
        sets = _simplify_sets(sets, len(delta), num_sets)
    return BuchiAutomaton(alphabet, init, delta, sets, names)


def _simplify_sets(sets, n, num_sets):
    everything = frozenset(range(n))
    kept = []
    for f in sets:
        if f != everything and f not in kept:
            kept.append(f)
    if not kept and num_sets >= 1:
        kept = [everything]
    return kept


def empty_automaton(alphabet: Alphabet = UNIT) -> BuchiAutomaton:
    return BuchiAutomaton(alphabet, (), (), (frozenset(),))


def universal_automaton(alphabet: Alphabet = UNIT) -> BuchiAutomaton:
    row = {letter: (0,) for letter in alphabet.letters()}
    return BuchiAutomaton(alphabet, (0,), (row,), (frozenset({0}),), ("all",))


def strongly_connected_components(nodes, succ) -> list[list]:
    """Tarjan's algorithm, iterative; components come out in reverse topological order."""
    index: dict = {}
    low: dict = {}
    on_stack = set()
    stack = []
    result = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work and low[v] < low[work[-1][0]]:
                low[work[-1][0]] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                result.append(comp)
    return result


def _accepting_components(nodes, succ, mask, num_sets):
    full = (1 << num_sets) - 1
    good = []
    for comp in strongly_connected_components(nodes, succ):
        if len(comp) == 1:
            v = comp[0]
            if v not in set(succ(v)):
                continue
        m = 0
        for v in comp:
            m |= mask(v)
        if m & full == full:
            good.append(comp)
    return good


def _successor_sets(a) -> list[list[int]]:
    out = []
    for row in a.delta:
        seen = {}
        for succs in row.values():
            for t in succs:
                seen[t] = None
        out.append(list(seen))
    return out


def trim(a: BuchiAutomaton) -> BuchiAutomaton:
    """Drop states that are unreachable or cannot reach an accepting cycle."""
    succ = _successor_sets(a)
    reach = set()
    todo = list(a.initial)
    reach.update(todo)
    while todo:
        q = todo.pop()
        for t in succ[q]:
            if t not in reach:
                reach.add(t)
                todo.append(t)
    order = sorted(reach)
    good_sccs = _accepting_components(order, lambda q: succ[q], a.acc_mask, a.num_sets)
    live = set()
    for comp in good_sccs:
        live.update(comp)
    pred: dict[int, list[int]] = {q: [] for q in order}
    for q in order:
        for t in succ[q]:
            pred[t].append(q)
    todo = list(live)
    while todo:
        q = todo.pop()
        for p in pred[q]:
            if p not in live:
                live.add(p)
                todo.append(p)
    if len(live) == a.num_states:
        return a
    keep = [q for q in range(a.num_states) if q in live]
    renum = {q: i for i, q in enumerate(keep)}
    delta = []
    for q in keep:
        row = {}
        for letter, succs in a.delta[q].items():
            kept = tuple(renum[t] for t in succs if t in renum)
            if kept:
                row[letter] = kept
        delta.append(row)
    init = [renum[q] for q in a.initial if q in renum]
    sets = [frozenset(renum[q] for q in f if q in renum) for f in a.acceptance]
    return BuchiAutomaton(a.alphabet, init, delta, sets, [a.names[q] for q in keep])


def degeneralize(a) -> BuchiAutomaton:
    """Counter construction turning ``m`` acceptance sets into one (``m * |Q|`` states)."""
    m = a.num_sets
    if m == 1 and isinstance(a, BuchiAutomaton):
        return a
    if m == 0:
        return explore(a.alphabet, a.initial, lambda q: ((l, t) for l, ts in a.out(q).items() for t in ts),
                       lambda q: 1, 1, simplify=False)

    def out(key):
        q, i = key
        j = (i + 1) % m if a.acc_mask(q) >> i & 1 else i
        for letter, succs in a.out(q).items():
            for t in succs:
                yield letter, (t, j)

    def mask(key):
        q, i = key
        return 1 if i == 0 and a.acc_mask(q) & 1 else 0

    return explore(a.alphabet, [(q, 0) for q in a.initial], out, mask, 1, simplify=False)


def accepting_run(a) -> tuple[LassoWord, LassoWord] | None:
    """Nested depth-first search for an accepting lasso.

    Returns ``(word, run)`` where ``run[i]`` is the state before reading
    ``word[i]``, or ``None`` if the language is empty.
    """
    if a.num_sets != 1:
        a = degeneralize(a)
    edges_cache: dict = {}

    def edges(q):
        e = edges_cache.get(q)
        if e is None:
            e = edges_cache[q] = [(l, t) for l, ts in a.out(q).items() for t in ts]
        return e

    visited1 = set()
    visited2 = set()

    def inner(seed):
        stack = [(seed, iter(edges(seed)))]
        letters = []
        while stack:
            q, it = stack[-1]
            step = next(it, None)
            if step is None:
                stack.pop()
                if letters:
                    letters.pop()
                continue
            letter, t = step
            if t == seed:
                return [s for s, _ in stack], letters + [letter]
            if t not in visited2:
                visited2.add(t)
                stack.append((t, iter(edges(t))))
                letters.append(letter)
        return None

    for s0 in a.initial:
        if s0 in visited1:
            continue
        visited1.add(s0)
        stack = [(s0, iter(edges(s0)))]
        letters = []
        while stack:
            q, it = stack[-1]
            step = next(it, None)
            if step is not None:
                letter, t = step
                if t not in visited1:
                    visited1.add(t)
                    stack.append((t, iter(edges(t))))
                    letters.append(letter)
                continue
            if a.acc_mask(q) & 1:
                cycle = inner(q)
                if cycle is not None:
                    cyc_states, cyc_letters = cycle
                    stem_states = [s for s, _ in stack][:-1]
                    return (LassoWord(tuple(letters), tuple(cyc_letters)),
                            LassoWord(tuple(stem_states), tuple(cyc_states)))
            stack.pop()
            if letters:
                letters.pop()
    return None


def is_empty(a) -> LassoWord | None:
    """``None`` iff the language of ``a`` is empty; otherwise an accepted lasso."""
    found = accepting_run(a)
    return None if found is None else found[0]


def language_is_empty(a) -> bool:
    return accepting_run(a) is None


def accepts_lasso(a, w: LassoWord) -> bool:
    """Membership of ``stem . loop^omega`` via the product with the word's lasso automaton."""
    for letter in w.stem + w.loop:
        a.alphabet.check_letter(letter)
    stem_len, n = len(w.stem), len(w)
    start = [(q, 0) for q in a.initial]
    graph: dict = {}
    todo = list(start)
    for node in start:
        graph.setdefault(node, None)
    while todo:
        node = todo.pop()
        q, pos = node
        nxt_pos = pos + 1 if pos + 1 < n else stem_len
        succs = [(t, nxt_pos) for t in a.out(q).get(w[pos], ())]
        graph[node] = succs
        for s in succs:
            if s not in graph:
                graph[s] = None
                todo.append(s)
    good = _accepting_components(list(graph), lambda v: graph[v], lambda v: a.acc_mask(v[0]), a.num_sets)
    return bool(good)


def reduce_bisimulation(a: BuchiAutomaton) -> BuchiAutomaton:
    """Quotient by the coarsest bisimulation that respects acceptance-set membership."""
    n = a.num_states
    if n <= 1:
        return a
    block = [a.acc_mask(q) for q in range(n)]
    count = len(set(block))
    while True:
        sigs = {}
        new_block = []
        for q in range(n):
            row = a.delta[q]
            sig = (block[q], frozenset((letter, block[t]) for letter, succs in row.items() for t in succs))
            new_block.append(sigs.setdefault(sig, len(sigs)))
        block = new_block
        if len(sigs) == count:
            break
        count = len(sigs)
    if count == n:
        return a
    reps = {}
    for q in range(n):
        reps.setdefault(block[q], q)
    order = sorted(reps, key=reps.get)
    renum = {b: i for i, b in enumerate(order)}
    delta = []
    for b in order:
        row = {}
        for letter, succs in a.delta[reps[b]].items():
            row[letter] = tuple(dict.fromkeys(renum[block[t]] for t in succs))
        delta.append(row)
    init = list(dict.fromkeys(renum[block[q]] for q in a.initial))
    sets = [frozenset(renum[block[q]] for q in f) for f in a.acceptance]
    return BuchiAutomaton(a.alphabet, init, delta, sets, [a.names[reps[b]] for b in order])
