"""Translation of prenex HyperLTL into MPL[E].

Each trace quantifier becomes a second-order quantifier over a path
variable ``T_pi``.  Time is a first-order variable ranging over prefixes of
the first quantified path: the prefix of length ``i + 1`` stands for
position ``i``.  An atom ``a[pi]`` at position ``x`` reads the last state
of the prefix of ``T_pi`` that has the same length as ``x``.  Temporal
operators become first-order quantifiers over longer prefixes:

* ``F phi`` at ``x``: some ``z`` in ``T1`` with ``x < z`` satisfies ``phi``;
* ``G phi`` at ``x``: every such ``z`` does;
* ``phi U psi`` at ``x``: some such ``z`` satisfies ``psi`` and every ``w``
  with ``x < w < z``, ``w != z``, satisfies ``phi``;
* ``X phi`` at ``x``: the one-longer prefix ``y`` of ``T1`` satisfies ``phi``.

The matrix is translated in negation normal form.  Unique helper positions
(atom positions on other traces, successors) may be bound either
existentially or universally; the translator picks the polarity of the
nearest enclosing quantifier so that no extra alternation is introduced.
"""

from __future__ import annotations

from hypercheck.errors import ValidationError
from hypercheck.formulas import syntax as s
from hypercheck.formulas.rewrite import to_nnf
from hypercheck.formulas.syntax import Formula, LogicId, all_names, fresh_name, split_prefix
from hypercheck.formulas.validate import validate


def hyperltl_to_mple(f: Formula) -> Formula:
    """An MPL[E] sentence equivalent to the prenex HyperLTL sentence ``f``."""
    validate(f, LogicId.HyperLTL)
    prefix, matrix = split_prefix(f)
    if not prefix:
        raise ValidationError("a HyperLTL sentence needs at least one trace quantifier")
    return _Translator(f, prefix).run(matrix)


class _Translator:
    def __init__(self, f: Formula, prefix):
        self.taken = set(all_names(f))
        self.prefix = prefix
        self.paths = {var: self.fresh(f"T_{var}") for _, _, var in prefix}
        self.first_trace = prefix[0][2]
        self.first = self.paths[self.first_trace]

    def fresh(self, base: str) -> str:
        name = fresh_name(base, self.taken)
        self.taken.add(name)
        return name

    def run(self, matrix: Formula) -> Formula:
        body = self.tr(to_nnf(matrix), None, self.prefix[-1][0])
        for quant, _, var in reversed(self.prefix):
            body = s.quantifier(quant, "so", self.paths[var], body)
        return body

    # helpers ---------------------------------------------------------------

    def bind(self, quant: str, var: str, guards, body: Formula) -> Formula:
        """``exists var. guards & body`` or ``forall var. !guards | body``.

        ``guards`` holds ``(positive, negated)`` formula pairs.
        """
        if quant == "exists":
            return s.exists(var, s.conj(*(g for g, _ in guards), body), "fo")
        return s.forall(var, s.disj(*(n for _, n in guards), body), "fo")

    def plain(self, g: Formula):
        return g, s.neg(g)

    def minimal(self, x: str):
        """``x`` has length one: every prefix of ``x`` equals ``x``."""
        z, z2 = self.fresh("z"), self.fresh("z")
        pos = s.forall(z, s.disj(s.neg(s.prefix_of(z, x)), s.same(z, x)), "fo")
        neg = s.exists(z2, s.conj(s.prefix_of(z2, x), s.neg(s.same(z2, x))), "fo")
        return pos, neg

    def successor(self, x: str, y: str):
        """``y`` extends ``x`` by exactly one state."""
        w, w2 = self.fresh("w"), self.fresh("w")
        pos = s.conj(s.prefix_of(x, y), s.neg(s.same(x, y)), s.forall(
            w, s.disj(s.neg(s.prefix_of(w, y)), s.prefix_of(w, x), s.same(w, y)), "fo"))
        neg = s.disj(s.neg(s.prefix_of(x, y)), s.same(x, y), s.exists(
            w2, s.conj(s.prefix_of(w2, y), s.neg(s.prefix_of(w2, x)), s.neg(s.same(w2, y))), "fo"))
        return pos, neg

    # translation -----------------------------------------------------------

    def tr(self, node: Formula, x: str | None, quant: str) -> Formula:
        op = node.op
        if op in ("true", "false"):
            return node
        if op == "atom":
            return self.literal(node, False, x, quant)
        if op == "not":
            return self.literal(node.body, True, x, quant)
        if op in ("and", "or"):
            return node.replace_children([self.tr(c, x, quant) for c in node.children])
        if op == "X":
            if x is None:
                x0 = self.fresh("t")
                return self.bind(quant, x0, [self.plain(s.member(x0, self.first)), self.minimal(x0)],
                                 self.tr(node, x0, quant))
            y = self.fresh("t")
            return self.bind(quant, y, [self.plain(s.member(y, self.first)), self.successor(x, y)],
                             self.tr(node.body, y, quant))
        if op == "F":
            z = self.fresh("t")
            return s.exists(z, s.conj(*self.later(z, x), self.tr(node.body, z, "exists")), "fo")
        if op == "G":
            z = self.fresh("t")
            guard = [s.neg(g) for g in self.later(z, x)]
            return s.forall(z, s.disj(*guard, self.tr(node.body, z, "forall")), "fo")
        if op == "U":
            left, right = node.children
            z = self.fresh("t")
            w = self.fresh("t")
            before = [s.neg(s.prefix_of(w, z)), s.same(w, z)]
            if x is not None:
                before.insert(0, s.neg(s.prefix_of(x, w)))
            hold = s.forall(w, s.disj(*before, self.tr(left, w, "forall")), "fo")
            return s.exists(z, s.conj(*self.later(z, x), self.tr(right, z, "exists"), hold), "fo")
        if op == "W":
            left, right = node.children
            return s.disj(self.tr(s.until(left, right), x, quant), self.tr(s.always(left), x, quant))
        raise ValidationError(f"cannot translate {op!r} into MPL[E]")

    def later(self, z: str, x: str | None) -> list[Formula]:
        """Guards for ``z`` ranging over positions at or after ``x`` on the first path."""
        guards = [s.member(z, self.first)]
        if x is not None:
            guards.append(s.prefix_of(x, z))
        return guards

    def literal(self, atom: Formula, negative: bool, x: str | None, quant: str) -> Formula:
        def lit(y):
            p = s.pred(atom.name, y)
            return s.neg(p) if negative else p

        path = self.paths[atom.var]
        y = self.fresh("t")
        if x is None:
            return self.bind(quant, y, [self.plain(s.member(y, path)), self.minimal(y)], lit(y))
        if atom.var == self.first_trace:
            return lit(x)
        return self.bind(quant, y, [self.plain(s.member(y, path)), self.plain(s.equal_level(x, y))], lit(y))
