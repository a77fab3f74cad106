"""Model checking for MPL[E], monadic path logic with the equal-level predicate.

A first-order variable denotes a nonempty finite prefix of a path from the
initial state, a second-order variable a full path.  Words carry one padded
state component per free variable: a first-order component spells its
prefix and then reads ``BOT`` forever, a second-order component spells its
path.  Words of this shape are called well formed.

The automaton of a subformula reads exactly its free variables and accepts
exactly the well-formed words satisfying it.  Atoms are deterministic
monitors; conjunction and disjunction are products and unions over the
merged variables; an existential quantifier restricts its component to the
Kripke structure (prefix or full path) and projects it away; a universal
quantifier is the well-formed complement of the existential quantifier over
the negated body.  The sentence holds iff the automaton of its negation is
empty.
"""

from __future__ import annotations

from dataclasses import dataclass

from hypercheck.automata.alphabet import BOT, UNIT, Alphabet, states_component
from hypercheck.automata.buchi import (
    BuchiAutomaton,
    empty_automaton,
    explore,
    language_is_empty,
    reduce_bisimulation,
    trim,
)
from hypercheck.automata.complement import complement, complement_lazy
from hypercheck.automata.ops import Join, KripkeRestriction, Product, materialize, project_exists, union
from hypercheck.engines.common import (
    DEFAULT_MAX_ALTERNATIONS,
    Step,
    Timer,
    Verdict,
    check_alternations,
)
from hypercheck.errors import AlphabetError
from hypercheck.formulas import syntax as s
from hypercheck.formulas.rewrite import desugar_label_sets, to_nnf
from hypercheck.formulas.syntax import MPL_ATOMS, Formula, LogicId, unique_binders
from hypercheck.formulas.validate import validate
from hypercheck.kripke import KripkeStructure

# status of a first-order component: must start now, running, ended
_FRESH, _RUNNING, _ENDED = 0, 1, 2


@dataclass(frozen=True)
class VarEnv:
    """Free variables of a subformula, in a fixed global order, with sorts ``fo``/``so``."""

    variables: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        names = self.names
        if len(set(names)) != len(names):
            raise AlphabetError(f"duplicate variables in {list(names)}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.variables)

    @property
    def sorts(self) -> tuple[str, ...]:
        return tuple(sort for _, sort in self.variables)

    def __len__(self):
        return len(self.variables)

    def __contains__(self, name):
        return name in self.names

    def alphabet(self, k: KripkeStructure) -> Alphabet:
        return Alphabet(tuple(states_component(v, len(k), padded=True) for v in self.names))

    def sort_of(self, name: str) -> str:
        return dict(self.variables)[name]

    def union(self, other: VarEnv, order: dict[str, int]) -> VarEnv:
        merged = dict(self.variables)
        merged.update(other.variables)
        return VarEnv(tuple(sorted(merged.items(), key=lambda item: order[item[0]])))

    def minus(self, other: VarEnv) -> VarEnv:
        return VarEnv(tuple(v for v in self.variables if v[0] not in other))


def _monitor(env: VarEnv, k: KripkeStructure, args=(), step=None, start=True,
             negated: bool = False) -> BuchiAutomaton:
    """Deterministic automaton over ``env`` checking well-formedness and an atom.

    ``step(phase, values)`` folds the values of ``args`` at each position
    into a phase; the atom holds iff the final phase is truthy once every
    first-order component has ended.  ``negated`` accepts the well-formed
    words on which the atom fails instead.
    """
    alphabet = env.alphabet(k)
    first_order = [sort == "fo" for sort in env.sorts]
    positions = [env.names.index(x) for x in args]
    letters = list(alphabet.letters())

    def advance(status, letter):
        new = []
        for st, v, fo in zip(status, letter, first_order):
            if not fo or st == _FRESH:
                if v == BOT:
                    return None
                new.append(_RUNNING if fo else _FRESH)
            elif st == _RUNNING:
                new.append(_RUNNING if v != BOT else _ENDED)
            elif v != BOT:
                return None
            else:
                new.append(_ENDED)
        return tuple(new)

    def out(key):
        status, phase = key
        for letter in letters:
            nxt = advance(status, letter)
            if nxt is None:
                continue
            if step is not None:
                yield letter, (nxt, step(phase, tuple(letter[i] for i in positions)))
            else:
                yield letter, (nxt, phase)

    def acc_mask(key):
        status, phase = key
        ended = all(st == _ENDED for st, fo in zip(status, first_order) if fo)
        return int(ended and bool(phase) != negated)

    initial = ((_FRESH,) * len(env), start)
    return explore(alphabet, [initial], out, acc_mask, 1)


def wf_automaton(env: VarEnv, k: KripkeStructure) -> BuchiAutomaton:
    """All well-formed words over ``env``."""
    return _monitor(env, k)


def _atom_step(atom: Formula, k: KripkeStructure):
    op = atom.op
    if op == "P":
        label = atom.name

        def step(phase, vals):
            v = vals[0]
            return phase if v == BOT else label in k.labels[k.states[v]]

        return step, False
    if op == "lt" or op == "in":
        return (lambda ok, vals: ok and (vals[0] == BOT or vals[0] == vals[1])), True
    if op == "eq":
        return (lambda ok, vals: ok and vals[0] == vals[1]), True
    if op == "E":
        return (lambda ok, vals: ok and (vals[0] == BOT) == (vals[1] == BOT)), True
    raise ValueError(f"{op!r} is not an MPL[E] atom")


def atom_automaton(atom: Formula, env: VarEnv, k: KripkeStructure, negated: bool = False) -> BuchiAutomaton:
    """Automaton for an MPL[E] atom (or its negation) over ``env``; other components are free.

    ``P{a}(x)`` reads the label of the last state of ``x``; ``x < y`` is the
    prefix order (equality allowed); ``x in X`` says ``x`` is a prefix of the
    path ``X``; ``E(x, y)`` says both prefixes have the same length.
    """
    for x in atom.args:
        if x not in env:
            raise AlphabetError(f"atom {atom} mentions {x!r}, which is not among {list(env.names)}")
    step, start = _atom_step(atom, k)
    return _monitor(env, k, atom.args, step, start, negated)


def negate_wf(a, env: VarEnv, k: KripkeStructure) -> BuchiAutomaton:
    """Well-formed words over ``env`` that ``a`` rejects."""
    if not len(env):
        return complement(materialize(a))
    lazy = Product(complement_lazy(a), wf_automaton(env, k))
    return reduce_bisimulation(trim(materialize(lazy)))


def elim_exists_fo(a, x: str, k: KripkeStructure) -> BuchiAutomaton:
    """``exists x`` for a first-order component: ``x`` spells a prefix of a path, then ``BOT``."""
    restricted = trim(materialize(KripkeRestriction(a, x, k, "prefix")))
    return reduce_bisimulation(project_exists(restricted, x))


def elim_exists_so(a, X: str, k: KripkeStructure) -> BuchiAutomaton:
    """``exists X`` for a second-order component: ``X`` spells a full path."""
    restricted = trim(materialize(KripkeRestriction(a, X, k, "full_path")))
    return reduce_bisimulation(project_exists(restricted, X))


def mple_alternations(f: Formula) -> int:
    """Most polarity switches along a chain of nested quantifiers (``f`` in NNF).

    A chain is counted from an implicit existential at the root, since the
    checker complements once for every maximal universal block.
    """
    best = 0

    def go(node, quants):
        nonlocal best
        if node.op == "quant":
            quants = quants + [node.quant]
        if not node.children:
            best = max(best, s.alternations(["exists"] + quants))
        for child in node.children:
            go(child, quants)

    go(f, [])
    return best


class _Builder:
    def __init__(self, k: KripkeStructure, sorts: dict[str, str], order: dict[str, int], steps, dump):
        self.k = k
        self.sorts = sorts
        self.order = order
        self.steps = steps
        self.dump = dump

    def env_of(self, f: Formula) -> VarEnv:
        free = _free_vars(f)
        return VarEnv(tuple((v, self.sorts[v]) for v in sorted(free, key=self.order.__getitem__)))

    def build(self, f: Formula) -> tuple[BuchiAutomaton, VarEnv]:
        op = f.op
        if op == "true":
            return wf_automaton(VarEnv(), self.k), VarEnv()
        if op == "false":
            return empty_automaton(UNIT), VarEnv()
        if op in MPL_ATOMS:
            env = self.env_of(f)
            return trim(atom_automaton(f, env, self.k)), env
        if op == "not":
            body = f.body
            if body.op == "true":
                return self.build(s.FALSE)
            if body.op == "false":
                return self.build(s.TRUE)
            if body.op in MPL_ATOMS:
                env = self.env_of(body)
                return trim(atom_automaton(body, env, self.k, negated=True)), env
            return self.build(to_nnf(f))
        if op in ("and", "or"):
            (a, ea), (b, eb) = self.build(f.children[0]), self.build(f.children[1])
            env = ea.union(eb, self.order)
            alphabet = env.alphabet(self.k)
            if op == "and":
                return reduce_bisimulation(trim(materialize(Join(a, b, alphabet)))), env
            wa = materialize(Join(a, wf_automaton(env.minus(ea), self.k), alphabet))
            wb = materialize(Join(b, wf_automaton(env.minus(eb), self.k), alphabet))
            return reduce_bisimulation(trim(union(wa, wb))), env
        if op == "quant":
            return self.build_quantifier(f)
        raise ValueError(f"unexpected node {op!r} in an MPL[E] formula")

    def build_quantifier(self, f: Formula):
        var = f.var
        if f.quant == "forall":
            a, env = self.build(s.exists(var, to_nnf(s.neg(f.body)), f.sort))
            return negate_wf(a, env, self.k), env
        a, env = self.build(f.body)
        if var not in env:
            return a, env
        if f.sort == "fo":
            a = elim_exists_fo(a, var, self.k)
        else:
            a = elim_exists_so(a, var, self.k)
        rest = VarEnv(tuple(v for v in env.variables if v[0] != var))
        self.steps.append(Step(f"exists{'1' if f.sort == 'fo' else '2'} {var}", a.num_states))
        if self.dump:
            self.dump(f"after_{var}", a)
        return a, rest


def _free_vars(f: Formula) -> set[str]:
    if f.op in MPL_ATOMS:
        return set(f.args)
    if f.op == "quant":
        return _free_vars(f.body) - {f.var}
    out = set()
    for child in f.children:
        out |= _free_vars(child)
    return out


def prepare(f: Formula) -> Formula:
    """Validate, desugar label-set constants and make binders unique."""
    validate(f, LogicId.MPLE)
    return unique_binders(desugar_label_sets(f))


def check_mple(k: KripkeStructure, f: Formula, *,
               max_alternations: int | None = DEFAULT_MAX_ALTERNATIONS,
               witness: bool = False, dump=None) -> Verdict:
    """Decide ``k |= f`` for a closed MPL[E] sentence (no witnesses)."""
    timer = Timer()
    negation = to_nnf(s.neg(prepare(f)))
    depth = mple_alternations(negation)
    check_alternations([("exists", "forall")[i % 2] for i in range(depth + 1)], max_alternations)
    order: dict[str, int] = {}
    sorts: dict[str, str] = {}
    for node in negation.walk():
        if node.op == "quant" and node.var not in order:
            order[node.var] = len(order)
            sorts[node.var] = node.sort
    steps: list[Step] = []
    builder = _Builder(k, sorts, order, steps, dump)
    a, env = builder.build(negation)
    if len(env):
        raise AlphabetError(f"sentence has free variables {list(env.names)}")
    if dump:
        dump("final", a)
    return Verdict(language_is_empty(a), None, steps, timer.ms())

