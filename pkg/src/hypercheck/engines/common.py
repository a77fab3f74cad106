"""Verdicts and the quantifier-elimination loop shared by the prenex engines."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from hypercheck.automata.buchi import BuchiAutomaton, language_is_empty, reduce_bisimulation, trim
from hypercheck.automata.complement import complement_lazy
from hypercheck.automata.ops import materialize, project_exists
from hypercheck.errors import ResourceGuardError
from hypercheck.formulas.syntax import alternations
from hypercheck.kripke import LassoWord

DEFAULT_MAX_ALTERNATIONS = 2


@dataclass
class Step:
    quantifier: str
    states: int


@dataclass
class Verdict:
    holds: bool
    counterexample: dict[str, LassoWord] | None = None
    steps: list[Step] = field(default_factory=list)
    time_ms: int = 0

    def __bool__(self):
        return self.holds


class Timer:
    def __init__(self):
        self.start = time.perf_counter()

    def ms(self) -> int:
        return int(round((time.perf_counter() - self.start) * 1000))


def check_alternations(quants, limit: int | None) -> None:
    depth = alternations(quants)
    if limit is not None and depth > limit:
        raise ResourceGuardError(
            f"quantifier alternation depth {depth} exceeds the limit of {limit} "
            "(raise it with --max-alternations)")


def decide_prefix(prefix: list[tuple[str, str, str]],
                  matrix_automaton: Callable[[bool], BuchiAutomaton],
                  restrict: Callable[[object, str], BuchiAutomaton],
                  steps: list[Step] | None = None,
                  dump: Callable[[str, BuchiAutomaton], None] | None = None) -> bool:
    """Truth of ``Q1 x1 ... Qn xn. M`` by innermost-first elimination.

    ``prefix`` lists ``(quant, var, label)``; ``matrix_automaton(negated)``
    builds the automaton for ``M`` (or ``not M``); ``restrict(a, var)``
    intersects a possibly lazy automaton with the domain of ``var`` and
    returns an explicit one.  The loop keeps a flag telling whether the
    current automaton describes the formula eliminated so far or its
    negation.  Existential blocks project directly, universal blocks
    project the negation, and a complement is taken only where the
    polarity switches.
    """
    if steps is None:
        steps = []
    negated = bool(prefix) and prefix[-1][0] == "forall"
    a = matrix_automaton(negated)
    if dump:
        dump("matrix", a)
    lazy = a
    for pos in range(len(prefix) - 1, -1, -1):
        quant, var, label = prefix[pos]
        if (quant == "forall") != negated:
            if not (isinstance(lazy, BuchiAutomaton) and lazy.is_deterministic()):
                # every remaining variable is restricted later anyway; doing it
                # first keeps the complement from tracking irrelevant words
                for _, outer, _ in prefix[:pos + 1]:
                    lazy = trim(restrict(lazy, outer))
            lazy = complement_lazy(lazy)
            negated = not negated
        restricted = trim(restrict(lazy, var))
        a = reduce_bisimulation(project_exists(restricted, var))
        lazy = a
        steps.append(Step(label, a.num_states))
        if dump:
            dump(f"after_{var}", a)
    a = materialize(lazy)
    nonempty = not language_is_empty(a)
    return nonempty != negated
