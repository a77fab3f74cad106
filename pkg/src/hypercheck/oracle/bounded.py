"""Brute-force checking of prenex hyperproperties over bounded lasso domains.

Trace quantifiers range over the traces of lasso paths with bounded stem
and loop, propositional quantifiers over bounded lassos of truth values.
The bounded domains are subsets of the true ones, so the bounded verdict
transfers by monotonicity: a bounded ``holds`` is sound when every
universal quantifier ranges over an exhaustive domain, a bounded ``fails``
is sound when every existential one does.  A trace domain is exhaustive
when the structure has finitely many traces and the bounds reach all of
them; propositional domains never are.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from hypercheck.automata.buchi import strongly_connected_components
from hypercheck.engines.linear import lift_ltl
from hypercheck.formulas.rewrite import eliminate_knowledge
from hypercheck.formulas.syntax import Formula, LogicId, split_prefix
from hypercheck.formulas.validate import validate
from hypercheck.kripke import KripkeStructure, LassoWord, enumerate_lasso_paths, trace_of
from hypercheck.oracle.ltl_eval import eval_ltl_lasso


class Outcome(enum.Enum):
    HOLDS = "holds_within_bound"
    FAILS = "fails_within_bound"
    UNKNOWN = "unknown"


@dataclass
class ThreeValued:
    """A bounded verdict that is reported only where it is sound.

    ``bounded`` is the raw truth value over the bounded domains.  For
    ``FAILS``, ``assignment`` maps the leading universal quantifiers to
    values under which the rest of the sentence is false in the bounded
    domains.
    """

    outcome: Outcome
    bounded: bool
    assignment: dict[str, LassoWord] = field(default_factory=dict)

    @property
    def is_sound(self) -> bool:
        return self.outcome is not Outcome.UNKNOWN

    def agrees_with(self, holds: bool) -> bool:
        """False only when a sound bounded verdict contradicts ``holds``."""
        if self.outcome is Outcome.HOLDS:
            return holds
        if self.outcome is Outcome.FAILS:
            return not holds
        return True


def trace_count(k: KripkeStructure) -> int | None:
    """Number of distinct traces of ``k``, or ``None`` if there are infinitely many.

    Works on the subset construction over labels, a deterministic automaton
    whose states all have successors: it has infinitely many words iff a
    state with two successors is reachable from a cycle.
    """
    succ, labels, states = k.succ, k.labels, k.states
    start = frozenset({k.initial_index})
    graph: dict = {}
    todo = [start]
    while todo:
        subset = todo.pop()
        if subset in graph:
            continue
        by_label: dict = {}
        for q in subset:
            for t in succ[q]:
                by_label.setdefault(labels[states[t]], set()).add(t)
        graph[subset] = [frozenset(v) for v in by_label.values()]
        todo.extend(graph[subset])

    cyclic = set()
    for comp in strongly_connected_components(list(graph), graph.__getitem__):
        if len(comp) > 1 or comp[0] in graph[comp[0]]:
            cyclic.update(comp)
    after_cycle = set(cyclic)
    stack = list(cyclic)
    while stack:
        for child in graph[stack.pop()]:
            if child not in after_cycle:
                after_cycle.add(child)
                stack.append(child)
    if any(len(graph[node]) > 1 for node in after_cycle):
        return None

    memo: dict = {}

    def count(node):
        if node in after_cycle:
            return 1
        if node not in memo:
            memo[node] = sum(count(child) for child in graph[node])
        return memo[node]

    return count(start)


def trace_domain(k: KripkeStructure, max_stem: int, max_loop: int) -> tuple[list[LassoWord], bool]:
    """Bounded traces of ``k`` and whether they are all its traces."""
    paths = enumerate_lasso_paths(k, max_stem, max_loop)
    traces = sorted({trace_of(k, p) for p in paths}, key=_lasso_key)
    total = trace_count(k)
    return traces, total is not None and total == len(traces)


def prop_domain(name: str, max_stem: int, max_loop: int) -> list[LassoWord]:
    """All lassos over ``{}, {name}`` within the bounds (canonical, deduplicated)."""
    values = (frozenset(), frozenset({name}))
    out = set()
    for n in range(max_stem + 1):
        for stem in itertools.product(values, repeat=n):
            for m in range(1, max_loop + 1):
                for loop in itertools.product(values, repeat=m):
                    out.add(LassoWord(stem, loop).canonical())
    return sorted(out, key=_lasso_key)


def _lasso_key(w: LassoWord):
    return (len(w.stem), len(w.loop), repr(w))


def bounded_check(k: KripkeStructure, f: Formula, max_stem: int, max_loop: int,
                  logic: LogicId | str = LogicId.HyperLTL) -> ThreeValued:
    """Evaluate a prenex sentence over bounded domains, reporting only sound verdicts."""
    if max_stem < 1 or max_loop < 1:
        raise ValueError("oracle bounds must be at least 1")
    if isinstance(logic, str):
        logic = LogicId.from_selector(logic)
    validate(f, logic)
    if logic is LogicId.LTL:
        f = lift_ltl(f)
    elif logic is LogicId.HyperQPTL_K:
        f = eliminate_knowledge(f)
    prefix, matrix = split_prefix(f)
    traces, exhaustive = trace_domain(k, max_stem, max_loop)
    domains = []
    for quant, sort, var in prefix:
        if sort == "prop":
            domains.append((quant, var, prop_domain(var, max_stem, max_loop), False))
        else:
            domains.append((quant, var, traces, exhaustive))

    def holds(i, assignment):
        if i == len(domains):
            return eval_ltl_lasso(matrix, assignment)
        quant, var, values, _ = domains[i]
        test = any if quant == "exists" else all
        return test(holds(i + 1, {**assignment, var: v}) for v in values)

    value = holds(0, {})
    if value:
        sound = all(exact for quant, _, _, exact in domains if quant == "forall")
        return ThreeValued(Outcome.HOLDS if sound else Outcome.UNKNOWN, True)
    sound = all(exact for quant, _, _, exact in domains if quant == "exists")
    if not sound:
        return ThreeValued(Outcome.UNKNOWN, False)
    return ThreeValued(Outcome.FAILS, False, _refutation(domains, holds))


def _refutation(domains, holds) -> dict[str, LassoWord]:
    """Values for the leading universal block that falsify the rest."""
    lead = 0
    while lead < len(domains) and domains[lead][0] == "forall":
        lead += 1
    names = [var for _, var, _, _ in domains[:lead]]
    for combo in itertools.product(*(values for _, _, values, _ in domains[:lead])):
        assignment = dict(zip(names, combo))
        if not holds(lead, assignment):
            return assignment
    raise AssertionError("bounded verdict is false but no refuting assignment exists")


def is_universal(f: Formula) -> bool:
    prefix, _ = split_prefix(f)
    return all(q == "forall" for q, _, _ in prefix)

