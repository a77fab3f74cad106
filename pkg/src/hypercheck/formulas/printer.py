"""Canonical pretty-printer: single spaces, explicit parentheses around binary operators."""

from __future__ import annotations

from hypercheck.formulas.syntax import Formula

_BINARY = {"and": "&", "or": "|", "implies": "->", "iff": "<->", "U": "U", "W": "W"}
_QUANT_WORDS = {
    ("forall", "trace"): "forall", ("exists", "trace"): "exists",
    ("forall", "path"): "forall", ("exists", "path"): "exists",
    ("forall", "fo"): "forall1", ("exists", "fo"): "exists1",
    ("forall", "so"): "forall2", ("exists", "so"): "exists2",
    ("forall", "prop"): "Aprop", ("exists", "prop"): "Eprop",
}


def _operand(f: Formula) -> str:
    text = to_text(f)
    return f"({text})" if f.op == "quant" else text


def to_text(f: Formula) -> str:
    op = f.op
    if op == "true" or op == "false":
        return op
    if op == "atom":
        return f.name if f.var is None else f"{f.name}[{f.var}]"
    if op == "not":
        return "!" + _operand(f.body)
    if op in ("X", "F", "G"):
        return f"{op} {_operand(f.body)}"
    if op in _BINARY:
        left, right = f.children
        return f"({_operand(left)} {_BINARY[op]} {_operand(right)})"
    if op == "quant":
        return f"{_QUANT_WORDS[(f.quant, f.sort)]} {f.var}. {to_text(f.body)}"
    if op == "K":
        return f"K{{{','.join(sorted(f.obs))}}}[{f.var}] {_operand(f.body)}"
    if op == "P":
        return f"P{{{f.name}}}({f.args[0]})"
    if op == "lt":
        return f"{f.args[0]} < {f.args[1]}"
    if op == "eq":
        return f"{f.args[0]} = {f.args[1]}"
    if op == "in":
        return f"{f.args[0]} in {f.args[1]}"
    if op == "E":
        return f"E({f.args[0]}, {f.args[1]})"
    raise ValueError(f"unknown node kind {op!r}")
