"""HyperCTL* model checking for the X-guarded quantifier fragment.

In the fragment every path quantifier sits below Boolean connectives and
``X`` operators only, relative to its nearest enclosing quantifier.  Each
quantifier is therefore evaluated at one fixed time: the number of ``X``
operators on the way down from the root.  A path bound at time ``d``
starts in the state its parent path occupies at time ``d``, and positions
are re-based, so atoms at global time ``j >= d`` read the new path at
offset ``j - d``.

The negated sentence is brought into prenex form (negations pushed to
the atoms, quantifiers flipped, equivalences expanded with fresh copies of
their binders).  Pulling a quantifier out of a conjunction, disjunction or
``X`` is sound because every path domain is nonempty and the quantifier's
domain is fixed by its start time.  The matrix automaton reads one padded
state component per path: ``BOT`` before the path's start time, then the
path's states.
"""

from __future__ import annotations

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
from hypercheck.formulas.rewrite import to_nnf
from hypercheck.formulas.syntax import Formula, LogicId, flip, unique_binders
from hypercheck.formulas.validate import validate
from hypercheck.kripke import KripkeStructure
from hypercheck.ltl_translation import matrix_to_nba, relabel_to_states

ROOT = "root"


def start_delay_analysis(f: Formula) -> dict[str, tuple[str, int]]:
    """For every path variable: its parent variable (or ``"root"``) and the
    number of ``X`` operators between its binder and the parent's."""
    validate(f, LogicId.HyperCTLStar)
    out: dict[str, tuple[str, int]] = {}

    def go(node, parent, delay):
        if node.op == "quant":
            out[node.var] = (parent, delay)
            go(node.body, node.var, 0)
        elif node.op == "X":
            go(node.body, parent, delay + 1)
        else:
            for child in node.children:
                go(child, parent, delay)

    go(f, ROOT, 0)
    return out


def prenex_with_delays(f: Formula):
    """Prenex form of a fragment formula (negation-normal, unique binders).

    Returns ``(prefix, matrix)`` where ``prefix`` lists
    ``(quant, var, parent, start_time)`` in binding order.
    """
    prefix = []

    def go(node, parent, since, start):
        op = node.op
        if op == "quant":
            t = start + since
            prefix.append((node.quant, node.var, parent, t))
            return go(node.body, node.var, 0, t)
        if op == "X":
            return s.nxt(go(node.body, parent, since + 1, start))
        if op in ("and", "or"):
            return node.replace_children([go(c, parent, since, start) for c in node.children])
        return node

    matrix = go(f, None, 0, 0)
    return prefix, matrix


def check_hyperctls(k: KripkeStructure, f: Formula, *,
                    max_alternations: int | None = DEFAULT_MAX_ALTERNATIONS,
                    witness: bool = False, dump=None) -> Verdict:
    """Decide ``k |= f``; ``witness`` is accepted for interface symmetry but no
    counterexample is reconstructed for branching-time sentences."""
    timer = Timer()
    validate(f, LogicId.HyperCTLStar)
    negation = unique_binders(to_nnf(s.neg(f)))
    prefix, matrix = prenex_with_delays(negation)
    check_alternations([q for q, _, _, _ in prefix], max_alternations)
    comps = [var for _, var, _, _ in prefix]
    aps = {}
    for var in comps:
        names = {n.name for n in matrix.walk() if n.op == "atom" and n.var == var}
        aps[var] = tuple(sorted(p for p in names if p in k.aps))
    info = {var: (parent, t) for _, var, parent, t in prefix}

    def matrix_automaton(negated):
        m = s.neg(matrix) if negated else matrix
        return relabel_to_states(matrix_to_nba(m, comps, aps), k, padded=True)

    def restrict(a, var):
        parent, t = info[var]
        if parent is None:
            return materialize(KripkeRestriction(a, var, k, "path"))
        return materialize(KripkeRestriction(a, var, k, "delayed_start", t, parent))

    steps: list[Step] = []
    labelled = [(q, var, f"{flip(q)} {var}") for q, var, _, _ in prefix]
    negation_holds = decide_prefix(labelled, matrix_automaton, restrict, steps, dump)
    return Verdict(not negation_holds, None, steps, timer.ms())
