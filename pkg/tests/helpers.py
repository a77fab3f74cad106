"""Shared structures and seeded random generators for the test suite."""

from __future__ import annotations

import random

from hypercheck.automata.alphabet import Alphabet, labels_component
from hypercheck.automata.buchi import BuchiAutomaton
from hypercheck.formulas import syntax as s
from hypercheck.formulas.syntax import Formula
from hypercheck.kripke import KripkeStructure, LassoWord, common_shape
from hypercheck.oracle.ltl_eval import eval_ltl_lasso


def kripke(transitions: dict, labels: dict, aps=None, initial="s0") -> KripkeStructure:
    states = tuple(transitions)
    if aps is None:
        aps = tuple(sorted({a for ls in labels.values() for a in ls}))
    return KripkeStructure(states, initial, {q: tuple(t) for q, t in transitions.items()},
                           tuple(aps), {q: set(labels.get(q, ())) for q in states})


def seven_state_tree(mutated: bool = False) -> KripkeStructure:
    """Root with two children, each with two self-looping grandchildren.

    The two left grandchildren carry ``a``; the mutation removes it from one.
    """
    trans = {"s0": ["s1", "s2"], "s1": ["s3", "s4"], "s2": ["s5", "s6"],
             "s3": ["s3"], "s4": ["s4"], "s5": ["s5"], "s6": ["s6"]}
    labels = {"s3": {"a"}, "s4": set() if mutated else {"a"}}
    return kripke(trans, labels, ("a",))


def branching_kripke(leaves: dict, aps) -> KripkeStructure:
    """``s0`` branching into self-looping leaves with the given labels."""
    trans = {"s0": list(leaves)}
    trans.update({q: [q] for q in leaves})
    return kripke(trans, leaves, aps)


# random generators -------------------------------------------------------------

def random_kripke(rng: random.Random, n: int, aps=("a", "b"), max_out: int = 2) -> KripkeStructure:
    states = [f"s{i}" for i in range(n)]
    trans = {q: sorted({rng.choice(states) for _ in range(rng.randint(1, max_out))}) for q in states}
    labels = {q: {p for p in aps if rng.random() < 0.5} for q in states}
    return kripke(trans, labels, aps)


def random_tree_kripke(rng: random.Random, aps=("a", "b"), depth: int = 2) -> KripkeStructure:
    """A random tree of the given depth whose leaves loop; it has finitely many traces."""
    trans, labels = {}, {}
    level = ["s0"]
    for d in range(depth + 1):
        nxt = []
        for q in level:
            labels[q] = {p for p in aps if rng.random() < 0.5}
            if d == depth:
                trans[q] = [q]
                continue
            trans[q] = [f"{q}{i}" for i in range(rng.randint(1, 2))]
            nxt.extend(trans[q])
        level = nxt
    return kripke(trans, labels, aps)


def random_matrix(rng: random.Random, atoms, depth: int = 3, temporal: int = 2,
                  ops=("not", "and", "or", "implies", "iff"), temporal_ops=("X", "F", "G", "U", "W")) -> Formula:
    """Random quantifier-free formula over ``atoms`` with at most ``temporal`` temporal operators."""
    budget = [temporal]

    def go(d):
        if d == 0 or rng.random() < 0.25:
            if rng.random() < 0.92:
                return rng.choice(atoms)
            return rng.choice([s.TRUE, s.FALSE])
        choices = list(ops) + (list(temporal_ops) if budget[0] > 0 else [])
        op = rng.choice(choices)
        if op in temporal_ops:
            budget[0] -= 1
        if op in ("not", "X", "F", "G"):
            return Formula(op, (go(d - 1),))
        return Formula(op, (go(d - 1), go(d - 1)))

    return go(depth)


def random_hyperltl(rng: random.Random, aps=("a", "b"), max_traces: int = 2, temporal: int = 2,
                    sort: str = "trace") -> Formula:
    n = rng.randint(1, max_traces)
    traces = ["pi", "rho", "tau"][:n]
    atoms = [s.atom(p, t) for p in aps for t in traces]
    matrix = random_matrix(rng, atoms, depth=3, temporal=temporal)
    f = matrix
    for t in reversed(traces):
        f = s.quantifier(rng.choice(["forall", "exists"]), sort, t, f)
    return f


def random_hyperqptl(rng: random.Random, aps=("a",)) -> Formula:
    traces = ["pi", "rho"][:rng.randint(1, 2)]
    atoms = [s.atom(p, t) for p in aps for t in traces] + [s.atom("q")]
    matrix = random_matrix(rng, atoms, depth=3, temporal=2)
    prefix = [("trace", t) for t in traces]
    prefix.insert(rng.randint(0, len(prefix)), ("prop", "q"))
    f = matrix
    for sort, v in reversed(prefix):
        f = s.quantifier(rng.choice(["forall", "exists"]), sort, v, f)
    return f


def random_branching(rng: random.Random, aps=("a",)) -> Formula:
    """Random sentence of the X-guarded HyperCTL* fragment (one or two paths)."""
    outer = s.atom(rng.choice(aps), "pi")

    def inner():
        atoms = [s.atom(p, v) for p in aps for v in ("pi", "rho")]
        body = random_matrix(rng, atoms, depth=2, temporal=1)
        return s.quantifier(rng.choice(["forall", "exists"]), "path", "rho", body)

    part = inner()
    for _ in range(rng.randint(0, 2)):
        part = s.nxt(part)
    combine = rng.choice(["and", "or", "iff", "implies"])
    body = Formula(combine, (random_matrix(rng, [outer], depth=1, temporal=1), part))
    return s.quantifier(rng.choice(["forall", "exists"]), "path", "pi", body)


def random_mple(rng: random.Random, labels=("a",), depth: int = 2) -> Formula:
    """Random closed MPL[E] sentence with at most three quantifiers."""
    counter = [0]

    def atom(fo, so):
        choices = []
        if fo:
            choices += ["P", "lt", "eq", "E"]
            if so:
                choices.append("in")
        op = rng.choice(choices)
        if op == "P":
            return s.pred(rng.choice(labels), rng.choice(fo))
        if op == "in":
            return s.member(rng.choice(fo), rng.choice(so))
        x, y = rng.choice(fo), rng.choice(fo)
        return {"lt": s.prefix_of, "eq": s.same, "E": s.equal_level}[op](x, y)

    def go(d, fo, so, quants):
        if quants < 3 and (not fo or (d > 0 and rng.random() < 0.5)):
            counter[0] += 1
            sort = "so" if fo == [] and rng.random() < 0.3 else "fo"
            if sort == "so":
                var = f"Y{counter[0]}"
                body = go(d, fo, so + [var], quants + 1)
            else:
                var = f"x{counter[0]}"
                body = go(d, fo + [var], so, quants + 1)
            return s.quantifier(rng.choice(["forall", "exists"]), sort, var, body)
        if not fo:
            return rng.choice([s.TRUE, s.FALSE])
        if d == 0 or rng.random() < 0.3:
            a = atom(fo, so)
            return s.neg(a) if rng.random() < 0.3 else a
        op = rng.choice(["and", "or", "not"])
        if op == "not":
            return s.neg(go(d - 1, fo, so, quants))
        return Formula(op, (go(d - 1, fo, so, quants), go(d - 1, fo, so, quants)))

    return go(depth, [], [], 0)


def random_nba(rng: random.Random, n: int, letters: int = 4, density: float = 0.8) -> BuchiAutomaton:
    aps = ("a", "b")[: max(1, (letters - 1).bit_length())]
    alphabet = Alphabet((labels_component("x", aps),))
    domain = list(alphabet.letters())[:letters]
    delta = []
    for _ in range(n):
        row = {}
        for letter in domain:
            succs = sorted({rng.randrange(n) for _ in range(rng.randint(0, 2))})
            if succs and rng.random() < density:
                row[letter] = tuple(succs)
        delta.append(row)
    accepting = frozenset(q for q in range(n) if rng.random() < 0.3)
    return BuchiAutomaton(alphabet, (0,), delta, (accepting,))


def random_lasso(rng: random.Random, letters, max_stem: int = 4, max_loop: int = 4) -> LassoWord:
    stem = tuple(rng.choice(letters) for _ in range(rng.randint(0, max_stem)))
    loop = tuple(rng.choice(letters) for _ in range(rng.randint(1, max_loop)))
    return LassoWord(stem, loop)


def random_label_lasso(rng: random.Random, aps, max_stem: int = 3, max_loop: int = 3) -> LassoWord:
    sets = sorted({frozenset(p for j, p in enumerate(aps) if m >> j & 1) for m in range(1 << len(aps))},
                  key=sorted)
    return random_lasso(rng, sets, max_stem, max_loop)


def encode(assignment: dict, components, aps: dict) -> LassoWord:
    """Tuple-letter lasso holding each component's label lasso (bit ``i`` = ``aps[c][i]``)."""
    words = [assignment[c] for c in components]
    stem, loop = common_shape(words)
    shaped = [w.reshape(stem, loop) for w in words]

    def letter(i):
        return tuple(sum(1 << j for j, p in enumerate(aps[c]) if p in w[i])
                     for c, w in zip(components, shaped))

    return LassoWord(tuple(letter(i) for i in range(stem)), tuple(letter(stem + i) for i in range(loop)))


# the information-flow and promptness corpus -------------------------------------

NI = "forall pi. forall pi'. G (i[pi] <-> i[pi']) -> G (o[pi] <-> o[pi'])"
GNI = "forall pi. forall pi'. exists pi''. G (h[pi] <-> h[pi'']) & G (o[pi'] <-> o[pi''])"
PROMPT = "Eprop d. forall p1. (!d) U (p[p1] & F d)"

CORPUS = [
    # (name, logic, formula, structure, expected verdict)
    ("ni-holds", "hyperltl", NI, branching_kripke({"s1": {"h", "o"}, "s2": {"o"}}, ("h", "i", "o")), True),
    ("ni-fails", "hyperltl", NI, branching_kripke({"s1": {"o"}, "s2": set()}, ("h", "i", "o")), False),
    ("gni-holds", "hyperltl", GNI,
     branching_kripke({"s1": {"h", "o"}, "s2": {"h"}, "s3": {"o"}, "s4": set()}, ("h", "o")), True),
    ("gni-fails", "hyperltl", GNI, branching_kripke({"s1": {"h", "o"}, "s2": set()}, ("h", "o")), False),
    ("prompt-holds", "hyperqptl", PROMPT, branching_kripke({"s1": {"p"}, "s2": {"p"}}, ("p",)), True),
    ("prompt-fails", "hyperqptl", PROMPT, branching_kripke({"s1": {"p"}, "s2": set()}, ("p",)), False),
]


# knowledge and witness oracles --------------------------------------------------

def is_trace(k: KripkeStructure, w: LassoWord) -> bool:
    """Whether the label lasso ``w`` is the trace of some path of ``k``."""
    n = len(w.stem) + len(w.loop)

    def nxt(i):
        return i + 1 if i + 1 < n else len(w.stem)

    def fits(i, q):
        return k.labels[q] == w[i]

    start = (0, k.initial)
    if not fits(*start):
        return False
    seen = {start}
    todo = [start]
    edges = {}
    while todo:
        i, q = todo.pop()
        edges[(i, q)] = [(nxt(i), t) for t in k.transitions[q] if fits(nxt(i), t)]
        for node in edges[(i, q)]:
            if node not in seen:
                seen.add(node)
                todo.append(node)
    # prune nodes without successors; what remains carries an infinite path
    alive = set(seen)
    changed = True
    while changed:
        changed = False
        for node in list(alive):
            if not any(t in alive for t in edges[node]):
                alive.discard(node)
                changed = True
    return start in alive


def random_knowledge(rng: random.Random, aps=("a", "b")) -> Formula:
    """``Q pi.`` a matrix with one positive knowledge subformula about ``pi``."""
    obs = frozenset(p for p in aps if rng.random() < 0.5)
    inner = random_matrix(rng, [s.atom(p, "pi") for p in aps], depth=2, temporal=1)
    f = s.knows(obs, "pi", inner)
    for _ in range(rng.randint(1, 2)):
        side = random_matrix(rng, [s.atom(p, "pi") for p in aps], depth=1, temporal=0)
        wrap = rng.choice(["X", "F", "G", "and", "or", "implies"])
        if wrap in ("X", "F", "G"):
            f = Formula(wrap, (f,))
        elif wrap == "implies":
            f = s.implies(side, f)
        else:
            f = Formula(wrap, (side, f))
    return s.quantifier(rng.choice(["forall", "exists"]), "trace", "pi", f)


def knowledge_oracle(traces, f: Formula) -> bool:
    """Truth of ``Q pi. matrix`` (one trace quantifier, knowledge about ``pi``)
    over a finite trace set, evaluating knowledge directly.

    With all traces unrolled to a common shape ``(S, L)``, observation
    agreement no longer changes after position ``S + L - 1``, so each
    knowledge value is a lasso with stem ``S + L`` and loop ``L``.
    """
    stem, loop = common_shape(traces)
    traces = [t.reshape(stem, loop) for t in traces]
    horizon = stem + 2 * loop
    tables: dict = {}

    def table(node):
        if node not in tables:
            body = [[eval_ltl_lasso(node.body, {"pi": t}, i) for i in range(horizon)] for t in traces]
            views = [[frozenset(t[j] & node.obs) for j in range(horizon)] for t in traces]
            tables[node] = body, views
        return tables[node]

    def knows(node, p, i):
        body, views = table(node)
        return all(body[o][i] for o in range(len(traces)) if views[o][:i + 1] == views[p][:i + 1])

    def value(p):
        pi = traces[p]
        names = {}

        def replace(node):
            if node.op == "K":
                name = names.setdefault(node, f"k{len(names)}")
                return s.atom(name)
            if not node.children:
                return node
            return node.replace_children([replace(c) for c in node.children])

        matrix = replace(f.body)
        assignment = {"pi": pi}
        for node, name in names.items():
            bits = tuple(knows(node, p, i) for i in range(horizon))
            assignment[name] = LassoWord(bits[:stem + loop], bits[stem + loop:])
        return eval_ltl_lasso(matrix, assignment)

    test = all if f.quant == "forall" else any
    return test(value(p) for p in range(len(traces)))
