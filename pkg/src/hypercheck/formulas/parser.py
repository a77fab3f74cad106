"""Recursive-descent parser for the ASCII formula syntax.

Precedence, loosest first: quantifiers (extend as far right as possible),
``<->``, ``->`` (right associative), ``|``, ``&``, ``U``/``W`` (right
associative), then the prefix operators ``!``, ``X``, ``F``, ``G`` and
``K{a,b}[pi]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from hypercheck.errors import FormulaSyntaxError, UndecidableLogicError
from hypercheck.formulas import syntax as s
from hypercheck.formulas.syntax import Formula, LogicId

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<sym><->|->|[()\[\]{},.!~&|<=])|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
)

QUANTIFIER_WORDS = {
    "forall": ("forall", None),
    "exists": ("exists", None),
    "forall1": ("forall", "fo"),
    "exists1": ("exists", "fo"),
    "forall2": ("forall", "so"),
    "exists2": ("exists", "so"),
    "Aprop": ("forall", "prop"),
    "Eprop": ("exists", "prop"),
}
RESERVED = set(QUANTIFIER_WORDS) | {"X", "F", "G", "U", "W", "true", "false", "in"}

_DEFAULT_SORT = {
    LogicId.HyperLTL: "trace",
    LogicId.HyperQPTL: "trace",
    LogicId.HyperQPTL_K: "trace",
    LogicId.HyperCTLStar: "path",
    LogicId.MPLE: "fo",
}


_DISPLAY = {
    LogicId.HyperQPTLPlus: "HyperQPTL+",
    LogicId.S1SE: "S1S[E]",
    LogicId.HyperQCTLStar: "HyperQCTL*",
}


def undecidable_message(logic: LogicId) -> str:
    name = _DISPLAY.get(logic, logic.name)
    return (f"model checking for {name} is undecidable; "
            "no decision procedure exists, refusing to run")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rfind("\n") + 1
        else:
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str, logic: LogicId):
        self.toks = tokenize(text)
        self.i = 0
        self.logic = logic

    # token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return FormulaSyntaxError(msg, tok.line, tok.col)

    def accept(self, text) -> bool:
        if self.tok.kind != "eof" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text) -> _Tok:
        tok = self.tok
        if not self.accept(text):
            found = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return tok

    def ident(self) -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.text in RESERVED:
            found = tok.text or "end of input"
            raise self.error(f"expected identifier, found {found!r}")
        self.i += 1
        return tok.text

    # grammar
    def parse(self) -> Formula:
        f = self.formula()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return f

    def formula(self) -> Formula:
        if self.tok.kind == "ident" and self.tok.text in QUANTIFIER_WORDS:
            return self.quantified()
        return self.equivalence()

    def quantified(self) -> Formula:
        tok = self.tok
        quant, sort = QUANTIFIER_WORDS[tok.text]
        self.i += 1
        if sort is None:
            sort = _DEFAULT_SORT.get(self.logic)
            if sort is None:
                raise self.error(f"quantifier {tok.text!r} is not part of {self.logic.name}", tok)
        var = self.ident()
        self.expect(".")
        return s.quantifier(quant, sort, var, self.formula())

    def equivalence(self) -> Formula:
        left = self.implication()
        while self.accept("<->"):
            left = s.iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return s.implies(left, self.implication_rhs())
        return left

    def implication_rhs(self) -> Formula:
        if self.tok.kind == "ident" and self.tok.text in QUANTIFIER_WORDS:
            return self.quantified()
        return self.implication()

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.accept("|"):
            left = Formula("or", (left, self.conjunction()))
        return left

    def conjunction(self) -> Formula:
        left = self.temporal()
        while self.accept("&"):
            left = Formula("and", (left, self.temporal()))
        return left

    def temporal(self) -> Formula:
        left = self.unary()
        if self.tok.kind == "ident" and self.tok.text in ("U", "W"):
            op = self.tok.text
            self.i += 1
            return Formula(op, (left, self.temporal()))
        return left

    def unary(self) -> Formula:
        tok = self.tok
        if tok.kind == "sym" and tok.text in ("!", "~"):
            self.i += 1
            return s.neg(self.unary())
        if tok.kind == "ident":
            if tok.text in ("X", "F", "G"):
                self.i += 1
                return Formula(tok.text, (self.unary(),))
            if tok.text in QUANTIFIER_WORDS:
                return self.quantified()
            if tok.text == "K" and self.peek().text == "{":
                self.i += 1
                obs = self.name_set()
                self.expect("[")
                var = self.ident()
                self.expect("]")
                return s.knows(obs, var, self.unary())
        return self.primary()

    def name_set(self) -> list[str]:
        self.expect("{")
        names = []
        if not self.accept("}"):
            names.append(self.ident())
            while self.accept(","):
                names.append(self.ident())
            self.expect("}")
        return names

    def primary(self) -> Formula:
        tok = self.tok
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if tok.kind != "ident":
            found = tok.text or "end of input"
            raise self.error(f"expected a formula, found {found!r}")
        if tok.text == "true":
            self.i += 1
            return s.TRUE
        if tok.text == "false":
            self.i += 1
            return s.FALSE
        if tok.text == "P" and self.peek().text == "{":
            self.i += 1
            self.expect("{")
            label = self.ident()
            self.expect("}")
            self.expect("(")
            x = self.ident()
            self.expect(")")
            return s.pred(label, x)
        if tok.text == "E" and self.peek().text == "(":
            self.i += 1
            self.expect("(")
            x = self.ident()
            self.expect(",")
            y = self.ident()
            self.expect(")")
            return s.equal_level(x, y)
        name = self.ident()
        if self.accept("["):
            var = self.ident()
            self.expect("]")
            return s.atom(name, var)
        if self.accept("<"):
            return s.prefix_of(name, self.ident())
        if self.accept("="):
            return s.same(name, self.ident())
        if self.tok.kind == "ident" and self.tok.text == "in":
            self.i += 1
            return s.member(name, self.ident())
        return s.atom(name)


def parse_formula(text: str, logic: LogicId | str) -> Formula:
    """Parse ``text`` as a formula of ``logic``.

    The result is syntactic only; call :func:`validate` to check closedness
    and the logic-specific shape restrictions.
    """
    if isinstance(logic, str):
        logic = LogicId.from_selector(logic)
    if logic.undecidable:
        raise UndecidableLogicError(undecidable_message(logic))
    return _Parser(text, logic).parse()
