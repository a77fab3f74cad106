"""Independent ground truth for the engines."""

from hypercheck.oracle.bounded import Outcome, ThreeValued, bounded_check
from hypercheck.oracle.differential import differential
from hypercheck.oracle.ltl_eval import eval_ltl_lasso
from hypercheck.oracle.translate import hyperltl_to_mple

__all__ = ["Outcome", "ThreeValued", "bounded_check", "differential", "eval_ltl_lasso", "hyperltl_to_mple"]
