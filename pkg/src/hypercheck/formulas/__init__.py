"""Formula syntax, parsing, validation and rewrites for all supported logics."""

from hypercheck.formulas.parser import parse_formula
from hypercheck.formulas.printer import to_text
from hypercheck.formulas.rewrite import (
    desugar_label_sets,
    dualize_negation,
    eliminate_knowledge,
    to_nnf,
)
from hypercheck.formulas.syntax import FALSE, TRUE, Formula, LogicId, split_prefix
from hypercheck.formulas.validate import validate

__all__ = [
    "FALSE", "TRUE", "Formula", "LogicId",
    "desugar_label_sets", "dualize_negation", "eliminate_knowledge",
    "parse_formula", "split_prefix", "to_nnf", "to_text", "validate",
]
