"""Model checking for LTL, HyperLTL, HyperQPTL and HyperQPTL with knowledge.

The sentence is dualized (quantifiers flipped, matrix negated); the matrix
becomes a Büchi automaton with one label-set component per trace variable
and per quantified proposition, and quantifiers are eliminated
innermost-first.  Trace components are first intersected with the traces of
the Kripke structure; propositional components are projected directly.  The
dualized sentence is false, and the original true, iff the final automaton
over the unit alphabet is empty.
"""

from __future__ import annotations

from hypercheck.automata.buchi import accepting_run
from hypercheck.automata.ops import KripkeRestriction, materialize
from hypercheck.engines.common import (
    DEFAULT_MAX_ALTERNATIONS,
    Step,
    Timer,
    Verdict,
    check_alternations,
    decide_prefix,
)
from hypercheck.formulas import syntax as s
from hypercheck.formulas.rewrite import dualize_negation, eliminate_knowledge
from hypercheck.formulas.syntax import Formula, LogicId, split_prefix
from hypercheck.formulas.validate import validate
from hypercheck.kripke import KripkeStructure, LassoWord, trace_of
from hypercheck.ltl_translation import matrix_to_nba, relabel_to_states

LTL_TRACE = "pi"


def lift_ltl(f: Formula, var: str = LTL_TRACE) -> Formula:
    """``forall var. f`` with every atom indexed by ``var``."""

    def go(node):
        if node.op == "atom":
            return s.atom(node.name, var)
        if not node.children:
            return node
        return node.replace_children([go(c) for c in node.children])

    return s.forall(var, go(f))


def component_aps(prefix, matrix: Formula, k: KripkeStructure) -> dict[str, tuple[str, ...]]:
    """Label-set domain per component: the propositions the matrix reads that ``k`` knows."""
    aps = {}
    for _, sort, var in prefix:
        if sort == "prop":
            aps[var] = (var,)
        else:
            names = {n.name for n in matrix.walk() if n.op == "atom" and n.var == var}
            aps[var] = tuple(sorted(p for p in names if p in k.aps))
    return aps


def check_linear(k: KripkeStructure, f: Formula, logic: LogicId | str = LogicId.HyperLTL, *,
                 witness: bool = False, max_alternations: int | None = DEFAULT_MAX_ALTERNATIONS,
                 dump=None) -> Verdict:
    if isinstance(logic, str):
        logic = LogicId.from_selector(logic)
    timer = Timer()
    validate(f, logic)
    if logic is LogicId.LTL:
        f = lift_ltl(f)
    elif logic is LogicId.HyperQPTL_K:
        f = eliminate_knowledge(f)
        validate(f, LogicId.HyperQPTL)
    prefix, _ = split_prefix(f)
    g = dualize_negation(f)
    gprefix, gmatrix = split_prefix(g)
    check_alternations([q for q, _, _ in gprefix], max_alternations)
    comps = [var for _, _, var in gprefix]
    aps = component_aps(gprefix, gmatrix, k)
    sorts = {var: sort for _, sort, var in gprefix}

    def matrix_automaton(negated):
        return matrix_to_nba(s.neg(gmatrix) if negated else gmatrix, comps, aps)

    def restrict(a, var):
        if sorts[var] == "prop":
            return materialize(a)
        return materialize(KripkeRestriction(a, var, k, "trace"))

    labels = [f"{q} {var}" if sort != "prop" else f"{q}prop {var}" for q, sort, var in prefix]
    steps: list[Step] = []
    dual_prefix = [(q, var, label) for (q, _, var), label in zip(gprefix, labels)]
    dual_holds = decide_prefix(dual_prefix, matrix_automaton, restrict, steps, dump)
    holds = not dual_holds
    counterexample = None
    if witness and not holds and all(q == "forall" for q, _, _ in prefix):
        counterexample = extract_witness(k, gprefix, gmatrix, aps)
    return Verdict(holds, counterexample, steps, timer.ms())


def extract_witness(k: KripkeStructure, prefix, matrix: Formula, aps) -> dict[str, LassoWord]:
    """Traces (and proposition values) satisfying the existential sentence ``prefix. matrix``.

    Trace components are relabeled to Kripke states and restricted to paths,
    so the accepted lasso spells one path per trace variable.
    """
    comps = [var for _, _, var in prefix]
    traces = [var for _, sort, var in prefix if sort != "prop"]
    a = relabel_to_states(matrix_to_nba(matrix, comps, aps), k, components=traces)
    lazy = a
    for var in traces:
        lazy = KripkeRestriction(lazy, var, k, "path")
    found = accepting_run(materialize(lazy))
    if found is None:
        raise AssertionError("no witness although the dualized sentence holds")
    word, _ = found
    out = {}
    for i, (_, sort, var) in enumerate(prefix):
        column = word.map(lambda letter: letter[i])
        if sort == "prop":
            out[var] = column.map(lambda v: frozenset({var}) if v else frozenset()).canonical()
        else:
            out[var] = trace_of(k, column.map(lambda v: k.states[v]))
    return out


def check_hyperltl(k: KripkeStructure, f: Formula, **options) -> Verdict:
    return check_linear(k, f, LogicId.HyperLTL, **options)


def check_hyperqptl(k: KripkeStructure, f: Formula, **options) -> Verdict:
    return check_linear(k, f, LogicId.HyperQPTL, **options)


def check_hyperqptl_k(k: KripkeStructure, f: Formula, **options) -> Verdict:
    return check_linear(k, f, LogicId.HyperQPTL_K, **options)


def check_ltl(k: KripkeStructure, f: Formula, **options) -> Verdict:
    return check_linear(k, f, LogicId.LTL, **options)
