"""Model-checking engines, one per family of logics."""

from hypercheck.engines.branching import check_hyperctls, start_delay_analysis
from hypercheck.engines.common import Step, Verdict
from hypercheck.engines.linear import check_hyperltl, check_hyperqptl, check_hyperqptl_k, check_linear, check_ltl
from hypercheck.engines.mple import check_mple

__all__ = [
    "Step", "Verdict", "check_hyperctls", "check_hyperltl", "check_hyperqptl",
    "check_hyperqptl_k", "check_linear", "check_ltl", "check_mple", "start_delay_analysis",
]
