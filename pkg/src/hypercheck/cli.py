"""Command-line driver: load a Kripke structure and a sentence, print the verdict as JSON.

Exit status: 0 when a verdict was computed (whichever it is), 1 when a
differential or oracle run found a disagreement, 2 on input or validation
errors, 3 for logics whose model checking problem is undecidable, 4 when a
resource guard trips.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys

from hypercheck.engines.branching import check_hyperctls
from hypercheck.engines.linear import check_linear
from hypercheck.engines.mple import check_mple
from hypercheck.errors import HyperCheckError, ResourceGuardError, UndecidableLogicError
from hypercheck.formulas.parser import parse_formula, undecidable_message
from hypercheck.formulas.syntax import LogicId
from hypercheck.kripke import load_kripke
from hypercheck.oracle.bounded import bounded_check
from hypercheck.oracle.differential import differential

log = logging.getLogger("hypercheck")

EXIT_OK, EXIT_DISAGREEMENT, EXIT_INPUT, EXIT_UNDECIDABLE, EXIT_RESOURCE = 0, 1, 2, 3, 4
LINEAR = (LogicId.LTL, LogicId.HyperLTL, LogicId.HyperQPTL, LogicId.HyperQPTL_K)
SELECTORS = [logic.value for logic in LogicId]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypercheck", description=__doc__.splitlines()[0])
    p.add_argument("--logic", required=True, metavar="LOGIC",
                   help="one of: " + ", ".join(SELECTORS))
    p.add_argument("--kripke", metavar="FILE", help="Kripke structure as JSON")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--formula", metavar="FILE", help="file holding the sentence")
    src.add_argument("--inline", metavar="TEXT", help="the sentence itself")
    p.add_argument("--witness", action="store_true",
                   help="attach counterexample traces when a universal sentence fails")
    p.add_argument("--oracle-bounds", metavar="STEM,LOOP", type=_bounds,
                   help="also run the bounded oracle with these lasso bounds")
    p.add_argument("--differential", action="store_true",
                   help="compare all applicable engines and the bounded oracle")
    p.add_argument("--max-alternations", metavar="N", type=_limit, default=2,
                   help="quantifier alternation cap, or 'none' (default: 2)")
    p.add_argument("--deterministic", action="store_true",
                   help="omit timings so identical inputs give identical output")
    p.add_argument("--dump-automata", metavar="DIR", help="write intermediate automata as JSON files")
    return p


def _bounds(text: str) -> tuple[int, int]:
    try:
        stem, loop = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected STEM,LOOP, e.g. 3,3") from None
    if stem < 1 or loop < 1:
        raise argparse.ArgumentTypeError("oracle bounds must be at least 1")
    return stem, loop


def _limit(text: str) -> int | None:
    if text.lower() == "none":
        return None
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a non-negative integer or 'none'") from None
    if n < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer or 'none'")
    return n


def _dumper(directory: str):
    os.makedirs(directory, exist_ok=True)
    counter = [0]

    def dump(stage: str, automaton):
        counter[0] += 1
        name = re.sub(r"[^A-Za-z0-9_]+", "_", stage)
        path = os.path.join(directory, f"{counter[0]:02d}_{name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(automaton.to_json(), fh, indent=1)
        log.info("wrote %s", path)

    return dump


def _lasso_json(word):
    return word.to_json(lambda letter: sorted(letter) if not isinstance(letter, bool) else letter)


def check(args) -> tuple[dict, int]:
    """Run one check; returns the JSON document and the exit status."""
    logic = LogicId.from_selector(args.logic)
    if logic.undecidable:
        raise UndecidableLogicError(undecidable_message(logic))
    if args.kripke is None:
        raise HyperCheckError("--kripke is required")
    if args.formula is None and args.inline is None:
        raise HyperCheckError("one of --formula or --inline is required")
    k = load_kripke(args.kripke)
    if args.formula is not None:
        with open(args.formula, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = args.inline
    f = parse_formula(text, logic)
    dump = _dumper(args.dump_automata) if args.dump_automata else None
    options = {"max_alternations": args.max_alternations, "witness": args.witness, "dump": dump}
    if logic in LINEAR:
        verdict = check_linear(k, f, logic, **options)
    elif logic is LogicId.HyperCTLStar:
        verdict = check_hyperctls(k, f, **options)
    else:
        verdict = check_mple(k, f, **options)
    out = {
        "verdict": "holds" if verdict.holds else "fails",
        "logic": logic.value,
        "counterexample": None,
        "stats": {
            "steps": [{"quantifier": st.quantifier, "states": st.states} for st in verdict.steps],
            "time_ms": 0 if args.deterministic else verdict.time_ms,
        },
    }
    if verdict.counterexample is not None:
        out["counterexample"] = {v: _lasso_json(w) for v, w in verdict.counterexample.items()}
    status = EXIT_OK
    if args.oracle_bounds and logic in LINEAR:
        bounded = bounded_check(k, f, *args.oracle_bounds, logic)
        out["oracle"] = {"outcome": bounded.outcome.value, "value": bounded.bounded,
                         "bounds": list(args.oracle_bounds)}
        if not bounded.agrees_with(verdict.holds):
            log.error("the bounded oracle contradicts the verdict")
            status = EXIT_DISAGREEMENT
    elif args.oracle_bounds:
        raise HyperCheckError("--oracle-bounds needs a linear-time logic")
    if args.differential:
        if logic not in LINEAR:
            raise HyperCheckError("--differential needs a linear-time logic")
        engines = ("linear", "branching", "mple") if logic in (LogicId.LTL, LogicId.HyperLTL) else ("linear",)
        report = differential(k, f, engines, logic, args.oracle_bounds or (2, 2), args.max_alternations)
        if args.deterministic:
            for result in report["engines"].values():
                result.pop("time_ms", None)
        out["differential"] = report
        if report["disagreement"]:
            log.error("differential run found a disagreement: %s", "; ".join(report["reasons"]))
            status = EXIT_DISAGREEMENT
    return out, status


def main(argv=None) -> int:
    logging.basicConfig(format="hypercheck: %(message)s", level=logging.WARNING, stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        out, status = check(args)
    except UndecidableLogicError as exc:
        log.error("%s", exc)
        return EXIT_UNDECIDABLE
    except ResourceGuardError as exc:
        log.error("%s", exc)
        return EXIT_RESOURCE
    except (HyperCheckError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    json.dump(out, sys.stdout, indent=2, sort_keys=args.deterministic)
    sys.stdout.write("\n")
    summary = f"{out['logic']}: {out['verdict']}"
    if not args.deterministic:
        summary += f" ({out['stats']['time_ms']} ms)"
    print(summary, file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
