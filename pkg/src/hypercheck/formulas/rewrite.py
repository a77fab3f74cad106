"""Semantics-preserving rewrites: dualization, negation normal form, knowledge elimination."""

from __future__ import annotations

from hypercheck.errors import PolarityError
from hypercheck.formulas import syntax as s
from hypercheck.formulas.syntax import (
    FALSE,
    TRUE,
    Formula,
    all_names,
    flip,
    fresh_name,
    has_quantifier,
    join_prefix,
    split_prefix,
)
from hypercheck.formulas.validate import is_label_set


def dualize_negation(f: Formula) -> Formula:
    """Return a formula equivalent to ``not f``.

    For a prenex sentence the quantifiers are flipped and the matrix is
    negated; anything else gets a negation at the root.
    """
    prefix, matrix = split_prefix(f)
    if not prefix or has_quantifier(matrix):
        return s.neg(f)
    flipped = [(flip(q), sort, var) for q, sort, var in prefix]
    return join_prefix(flipped, s.neg(matrix))


def to_nnf(f: Formula) -> Formula:
    """Push negations down to atoms.

    ``->`` and ``<->`` are expanded; the temporal operators are kept, with
    ``!(a U b)`` becoming ``!b W (!a & !b)`` and ``!(a W b)`` becoming
    ``!b U (!a & !b)``.  Quantifiers flip polarity; knowledge nodes are
    left in place (negated if needed).
    """
    return _nnf(f, False)


def _nnf(f: Formula, negate: bool) -> Formula:
    op = f.op
    if op == "true":
        return FALSE if negate else TRUE
    if op == "false":
        return TRUE if negate else FALSE
    if op == "not":
        return _nnf(f.body, not negate)
    if op == "and" or op == "or":
        a, b = (_nnf(c, negate) for c in f.children)
        dual = {"and": "or", "or": "and"}[op] if negate else op
        return Formula(dual, (a, b))
    if op == "implies":
        a, b = f.children
        return _nnf(Formula("or", (s.neg(a), b)), negate)
    if op == "iff":
        a, b = f.children
        if negate:
            return Formula("or", (
                Formula("and", (_nnf(a, False), _nnf(b, True))),
                Formula("and", (_nnf(a, True), _nnf(b, False))),
            ))
        return Formula("or", (
            Formula("and", (_nnf(a, False), _nnf(b, False))),
            Formula("and", (_nnf(a, True), _nnf(b, True))),
        ))
    if op == "X":
        return s.nxt(_nnf(f.body, negate))
    if op == "F":
        return Formula("G" if negate else "F", (_nnf(f.body, negate),))
    if op == "G":
        return Formula("F" if negate else "G", (_nnf(f.body, negate),))
    if op == "U" or op == "W":
        a, b = f.children
        if not negate:
            return Formula(op, (_nnf(a, False), _nnf(b, False)))
        dual = "W" if op == "U" else "U"
        return Formula(dual, (_nnf(b, True), Formula("and", (_nnf(a, True), _nnf(b, True)))))
    if op == "quant":
        quant = flip(f.quant) if negate else f.quant
        return s.quantifier(quant, f.sort, f.var, _nnf(f.body, negate))
    if op == "K":
        node = s.knows(f.obs, f.var, _nnf(f.body, False))
        return s.neg(node) if negate else node
    # atoms of every logic
    return s.neg(f) if negate else f


def desugar_label_sets(f: Formula) -> Formula:
    """Rewrite ``x in X_a`` (free ``X_a``) into ``P{a}(x)``."""

    def go(node, bound):
        if node.op == "quant":
            return node.replace_children([go(node.body, bound | {node.var})])
        if node.op == "in":
            x, X = node.args
            if X not in bound and is_label_set(X):
                return s.pred(X[2:], x)
            return node
        if not node.children:
            return node
        return node.replace_children([go(c, bound) for c in node.children])

    return go(f, frozenset())


def substitute_trace(f: Formula, old: str, new: str) -> Formula:
    """Replace the trace index ``old`` by ``new`` in every indexed atom."""
    if f.op == "atom":
        return s.atom(f.name, new) if f.var == old else f
    if f.op == "K" and f.var == old:
        return s.knows(f.obs, new, substitute_trace(f.body, old, new))
    if not f.children:
        return f
    return f.replace_children([substitute_trace(c, old, new) for c in f.children])


def _knowledge_polarity(f: Formula, positive: bool, out: list):
    op = f.op
    if op == "K":
        out.append((f, positive))
        return
    if op == "not":
        _knowledge_polarity(f.body, not positive, out)
    elif op == "implies":
        _knowledge_polarity(f.children[0], not positive, out)
        _knowledge_polarity(f.children[1], positive, out)
    elif op == "iff":
        for c in f.children:
            if any(n.op == "K" for n in c.walk()):
                out.append((c, None))
    else:
        for c in f.children:
            _knowledge_polarity(c, positive, out)


def knowledge_requirement(obs, trace: str, body: Formula, u: str, r: str, other: str) -> Formula:
    """The constraint forcing proposition ``u`` to mark only positions where
    the observer of ``obs`` along ``trace`` knows ``body``::

        forall r. forall other. ((r U (u & r & X G !r)) & G (r -> obs_trace = obs_other))
                                 -> G ((r & X !r) -> body[other/trace])
    """
    ru, uu = s.atom(r), s.atom(u)
    marks_prefix = s.until(ru, s.conj(uu, ru, s.nxt(s.always(s.neg(ru)))))
    agree = s.conj(*(s.iff(s.atom(a, trace), s.atom(a, other)) for a in sorted(obs)))
    same_view = s.always(s.implies(ru, agree))
    at_end = s.always(s.implies(s.conj(ru, s.nxt(s.neg(ru))), substitute_trace(body, trace, other)))
    return s.forall(r, s.forall(other, s.implies(s.conj(marks_prefix, same_view), at_end), "trace"), "prop")


def eliminate_knowledge(f: Formula) -> Formula:
    """Replace every knowledge operator by a fresh existentially quantified proposition.

    Each ``K{A}[pi] psi`` in the matrix becomes a proposition ``u`` (read at
    the occurrence position).  The output prefix is the input prefix,
    followed by ``Eprop u...``, then ``Aprop r... forall pi'...``; the matrix
    is conjoined with one requirement per occurrence.  Only positive
    occurrences are supported.
    """
    prefix, matrix = split_prefix(f)
    found: list = []
    _knowledge_polarity(matrix, True, found)
    if not found:
        return f
    for node, positive in found:
        if positive is not True:
            raise PolarityError(
                f"knowledge operator {node} occurs negatively; only positive occurrences can be eliminated")

    taken = set(all_names(f))
    replacement = {}
    props, requirements = [], []
    for node, _ in found:
        if node in replacement:
            continue
        u = fresh_name("u", taken)
        taken.add(u)
        r = fresh_name("r", taken)
        taken.add(r)
        other = fresh_name(node.var + "'", taken)
        taken.add(other)
        replacement[node] = s.atom(u)
        props.append(u)
        req = knowledge_requirement(node.obs, node.var, node.body, u, r, other)
        requirements.append(req)

    def replace(n):
        if n in replacement:
            return replacement[n]
        if not n.children:
            return n
        return n.replace_children([replace(c) for c in n.children])

    new_matrix = replace(matrix)
    universal, bodies = [], []
    for req in requirements:
        req_prefix, req_body = split_prefix(req)
        universal.extend(req_prefix)
        bodies.append(req_body)
    full_prefix = list(prefix) + [("exists", "prop", u) for u in props]
    # requirement quantifiers: all propositional ones first, then the traces
    full_prefix += [q for q in universal if q[1] == "prop"] + [q for q in universal if q[1] == "trace"]
    return join_prefix(full_prefix, s.conj(new_matrix, *bodies))
