"""Differential testing: several engines and the bounded oracle on one instance."""

from __future__ import annotations

from hypercheck.engines.branching import check_hyperctls
from hypercheck.engines.linear import check_linear, lift_ltl
from hypercheck.engines.mple import check_mple
from hypercheck.errors import HyperCheckError
from hypercheck.formulas import syntax as s
from hypercheck.formulas.syntax import Formula, LogicId
from hypercheck.kripke import KripkeStructure
from hypercheck.oracle.bounded import bounded_check
from hypercheck.oracle.translate import hyperltl_to_mple

ENGINES = ("linear", "branching", "mple")
DEFAULT_BOUNDS = (2, 2)


def as_paths(f: Formula) -> Formula:
    """Read trace quantifiers as path quantifiers (a prenex HyperCTL* sentence)."""
    if f.op == "quant":
        return s.quantifier(f.quant, "path" if f.sort == "trace" else f.sort, f.var, as_paths(f.body))
    return f


def run_engine(name: str, k: KripkeStructure, f: Formula, logic: LogicId,
               max_alternations: int | None = None):
    """Verdict of engine ``name`` on ``f`` read in ``logic``."""
    if name == "linear":
        return check_linear(k, f, logic, max_alternations=max_alternations)
    hyper = lift_ltl(f) if logic is LogicId.LTL else f
    if logic not in (LogicId.LTL, LogicId.HyperLTL):
        raise HyperCheckError(f"engine {name!r} only takes HyperLTL sentences in a differential run")
    if name == "branching":
        return check_hyperctls(k, as_paths(hyper), max_alternations=max_alternations)
    if name == "mple":
        return check_mple(k, hyperltl_to_mple(hyper), max_alternations=max_alternations)
    raise ValueError(f"unknown engine {name!r}; choose from {ENGINES}")


def differential(k: KripkeStructure, f: Formula, engines=ENGINES,
                 logic: LogicId | str = LogicId.HyperLTL, bounds=DEFAULT_BOUNDS,
                 max_alternations: int | None = None) -> dict:
    """Run ``engines`` and the bounded oracle on ``k |= f``.

    The report holds per-engine verdicts (or errors), timings and automaton
    sizes, the bounded outcome, and ``disagreement``: engines disagree with
    each other, or one contradicts a sound bounded verdict.
    """
    if isinstance(logic, str):
        logic = LogicId.from_selector(logic)
    results = {}
    verdicts = {}
    for name in engines:
        try:
            v = run_engine(name, k, f, logic, max_alternations)
        except HyperCheckError as exc:
            results[name] = {"error": str(exc)}
            continue
        verdicts[name] = v.holds
        results[name] = {
            "verdict": "holds" if v.holds else "fails",
            "time_ms": v.time_ms,
            "steps": [{"quantifier": st.quantifier, "states": st.states} for st in v.steps],
        }
    report = {"formula": str(f), "logic": logic.value, "engines": results}
    reasons = []
    if len(set(verdicts.values())) > 1:
        reasons.append("engines disagree")
    if bounds is not None:
        bounded = bounded_check(k, f, bounds[0], bounds[1], logic)
        report["bounded"] = {"outcome": bounded.outcome.value, "value": bounded.bounded,
                             "bounds": list(bounds)}
        for name, holds in verdicts.items():
            if not bounded.agrees_with(holds):
                reasons.append(f"{name} contradicts the sound bounded verdict")
    report["disagreement"] = bool(reasons)
    report["reasons"] = reasons
    return report
