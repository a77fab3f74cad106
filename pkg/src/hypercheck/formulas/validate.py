from __future__ import annotations

from hypercheck.errors import (
    FragmentError,
    FreeVariableError,
    NonPrenexError,
    UndecidableLogicError,
    ValidationError,
)
from hypercheck.formulas.parser import undecidable_message
from hypercheck.formulas.syntax import (
    MPL_ATOMS,
    TEMPORAL,
    Formula,
    LogicId,
    split_prefix,
)

_LINEAR_SORTS = {
    LogicId.HyperLTL: {"trace"},
    LogicId.HyperQPTL: {"trace", "prop"},
    LogicId.HyperQPTL_K: {"trace", "prop"},
}


def validate(f: Formula, logic: LogicId | str) -> None:
    """Raise unless ``f`` is a closed sentence of ``logic`` in the supported shape."""
    if isinstance(logic, str):
        logic = LogicId.from_selector(logic)
    if logic.undecidable:
        raise UndecidableLogicError(undecidable_message(logic))
    if logic is LogicId.LTL:
        _validate_ltl(f)
    elif logic in _LINEAR_SORTS:
        _validate_linear(f, logic)
    elif logic is LogicId.HyperCTLStar:
        _validate_branching(f)
    else:
        _validate_mple(f)


def _forbid(f: Formula, ops, logic_name: str):
    for node in f.walk():
        if node.op in ops:
            raise ValidationError(f"operator {node.op!r} is not part of {logic_name}")


def _validate_ltl(f: Formula):
    _forbid(f, {"quant", "K"} | MPL_ATOMS, "LTL")
    for node in f.walk():
        if node.op == "atom" and node.var is not None:
            raise ValidationError("LTL atoms must not carry a trace index")


def _check_binders(prefix):
    seen = set()
    for _, _, var in prefix:
        if var in seen:
            raise ValidationError(f"variable {var!r} is bound twice")
        seen.add(var)


def _validate_linear(f: Formula, logic: LogicId):
    prefix, matrix = split_prefix(f)
    _check_binders(prefix)
    allowed = _LINEAR_SORTS[logic]
    for _, sort, var in prefix:
        if sort not in allowed:
            raise ValidationError(f"{sort} quantifier over {var!r} is not part of {logic.name}")
    forbidden = set(MPL_ATOMS)
    if logic is not LogicId.HyperQPTL_K:
        forbidden.add("K")
    _forbid(matrix, forbidden, logic.name)
    if any(n.op == "quant" for n in matrix.walk()):
        raise NonPrenexError(f"{logic.name} formulas must be in prenex form")
    traces = {v for _, srt, v in prefix if srt == "trace"}
    props = {v for _, srt, v in prefix if srt == "prop"}
    for node in matrix.walk():
        if node.op == "atom":
            if node.var is None:
                if node.name not in props:
                    raise FreeVariableError(f"proposition {node.name!r} is not bound")
            elif node.var not in traces:
                raise FreeVariableError(f"trace variable {node.var!r} is free")
        elif node.op == "K":
            if node.var not in traces:
                raise FreeVariableError(f"trace variable {node.var!r} is free")
            if any(n.op == "K" for n in node.body.walk()):
                raise ValidationError("nested knowledge operators are not supported")


def _validate_branching(f: Formula):
    _forbid(f, {"K"} | MPL_ATOMS, "HyperCTL*")
    seen = set()

    def go(node, scope, under_temporal_operand):
        if node.op == "quant":
            if node.sort != "path":
                raise ValidationError(f"{node.sort} quantifiers are not part of HyperCTL*")
            if under_temporal_operand:
                raise FragmentError(
                    f"quantifier over {node.var!r} occurs inside an until/eventually/globally "
                    "operand; only X-guarded quantifiers are supported")
            if node.var in seen:
                raise ValidationError(f"variable {node.var!r} is bound twice")
            seen.add(node.var)
            go(node.body, scope + (node.var,), False)
            return
        if node.op == "atom":
            if node.var is None:
                raise ValidationError(f"atom {node.name!r} lacks a path variable")
            if node.var not in scope:
                raise FreeVariableError(f"path variable {node.var!r} is free")
            return
        if node.op in TEMPORAL and not scope:
            raise ValidationError("temporal operators must occur inside the scope of a path quantifier")
        nested = under_temporal_operand or node.op in ("U", "W", "F", "G")
        for child in node.children:
            go(child, scope, nested)

    go(f, (), False)


def _validate_mple(f: Formula):
    _forbid(f, TEMPORAL | {"K"}, "MPL[E]")

    def go(node, fo, so):
        if node.op == "quant":
            if node.sort == "fo":
                go(node.body, fo | {node.var}, so)
            elif node.sort == "so":
                go(node.body, fo, so | {node.var})
            else:
                raise ValidationError(f"{node.sort} quantifiers are not part of MPL[E]")
            return
        if node.op == "atom":
            raise ValidationError(f"bare atom {node.name!r} is not part of MPL[E]; use P{{a}}(x)")
        if node.op in MPL_ATOMS:
            firsts = node.args if node.op != "in" else node.args[:1]
            for x in firsts:
                if x not in fo:
                    kind = "second-order" if x in so else "free"
                    raise FreeVariableError(f"first-order variable {x!r} is {kind}")
            if node.op == "in":
                X = node.args[1]
                if X not in so and not is_label_set(X):
                    kind = "first-order" if X in fo else "free"
                    raise FreeVariableError(f"second-order variable {X!r} is {kind}")
            return
        for child in node.children:
            go(child, fo, so)

    go(f, frozenset(), frozenset())


def is_label_set(name: str) -> bool:
    """``X_a`` names the free second-order constant for proposition ``a``."""
    return name.startswith("X_") and len(name) > 2
