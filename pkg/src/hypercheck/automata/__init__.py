"""Büchi automata over structured tuple alphabets."""

from hypercheck.automata.alphabet import BOT, UNIT, Alphabet, Component, labels_component, states_component
from hypercheck.automata.buchi import (
    BuchiAutomaton,
    accepting_run,
    accepts_lasso,
    degeneralize,
    is_empty,
    language_is_empty,
    reduce_bisimulation,
    trim,
)
from hypercheck.automata.complement import complement
from hypercheck.automata.ops import (
    cylindrify,
    intersect,
    project_exists,
    project_forall,
    restrict_to_kripke,
    union,
)

__all__ = [
    "BOT", "UNIT", "Alphabet", "BuchiAutomaton", "Component",
    "accepting_run", "accepts_lasso", "complement", "cylindrify", "degeneralize",
    "intersect", "is_empty", "labels_component", "language_is_empty", "project_exists",
    "project_forall", "reduce_bisimulation", "restrict_to_kripke", "states_component",
    "trim", "union",
]
