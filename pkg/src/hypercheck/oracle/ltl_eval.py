"""Exact LTL evaluation on ultimately periodic words.

All assigned lassos are unrolled to a common shape (longest stem, least
common multiple of the loops).  Every position of that shape has a unique
successor position, so each temporal operator is a fixpoint over finitely
many positions: least fixpoints for ``U`` and ``F``, greatest for ``W`` and
``G``.
"""

from __future__ import annotations

from typing import Mapping

from hypercheck.errors import UnassignedVariableError
from hypercheck.formulas.syntax import Formula
from hypercheck.kripke import LassoWord, common_shape

SINGLE = None


def _holds(letter, name: str) -> bool:
    if isinstance(letter, bool):
        return letter
    return name in letter


def eval_ltl_lasso(matrix: Formula, assignment: Mapping[str | None, LassoWord] | LassoWord,
                   i: int = 0) -> bool:
    """Truth of the quantifier-free ``matrix`` at position ``i``.

    ``assignment`` maps trace variables and quantified propositions to
    lassos.  Trace lassos hold label sets; proposition lassos hold booleans
    or label sets.  The atom ``a[pi]`` reads ``assignment[pi]``, a bare atom
    ``p`` reads ``assignment[p]``; a single lasso may be passed for plain LTL.
    """
    if isinstance(assignment, LassoWord):
        assignment = {SINGLE: assignment}
    words = dict(assignment)
    needed = set()
    for node in matrix.walk():
        if node.op == "atom":
            key = node.var if node.var is not None else node.name
            if key not in words:
                if SINGLE in words and node.var is None:
                    continue
                raise UnassignedVariableError(f"no lasso assigned to {key!r}")
            needed.add(key)
        elif node.op == "quant" or node.op == "K":
            raise ValueError(f"eval_ltl_lasso takes a quantifier-free matrix, found {node.op!r}")
    if SINGLE in words:
        needed.add(SINGLE)
    stem, loop = common_shape(words[k] for k in needed) if needed else (0, 1)
    n = stem + loop
    nxt = [j + 1 for j in range(n)]
    nxt[-1] = stem
    if i >= n:
        i = stem + (i - stem) % loop
    cache: dict[Formula, list[bool]] = {}

    def fix(step, start):
        val = [start] * n
        changed = True
        while changed:
            changed = False
            for j in range(n - 1, -1, -1):
                v = step(j, val)
                if v != val[j]:
                    val[j] = v
                    changed = True
        return val

    def ev(f: Formula) -> list[bool]:
        got = cache.get(f)
        if got is not None:
            return got
        op = f.op
        if op == "true":
            val = [True] * n
        elif op == "false":
            val = [False] * n
        elif op == "atom":
            key = f.var if f.var is not None else f.name
            w = words[key] if key in words else words[SINGLE]
            val = [_holds(w[j], f.name) for j in range(n)]
        elif op == "not":
            val = [not v for v in ev(f.body)]
        elif op in ("and", "or", "implies", "iff"):
            a, b = ev(f.children[0]), ev(f.children[1])
            combine = {
                "and": lambda x, y: x and y,
                "or": lambda x, y: x or y,
                "implies": lambda x, y: (not x) or y,
                "iff": lambda x, y: x == y,
            }[op]
            val = [combine(x, y) for x, y in zip(a, b)]
        elif op == "X":
            a = ev(f.body)
            val = [a[nxt[j]] for j in range(n)]
        elif op == "F":
            a = ev(f.body)
            val = fix(lambda j, v: a[j] or v[nxt[j]], False)
        elif op == "G":
            a = ev(f.body)
            val = fix(lambda j, v: a[j] and v[nxt[j]], True)
        elif op == "U":
            a, b = ev(f.children[0]), ev(f.children[1])
            val = fix(lambda j, v: b[j] or (a[j] and v[nxt[j]]), False)
        elif op == "W":
            a, b = ev(f.children[0]), ev(f.children[1])
            val = fix(lambda j, v: b[j] or (a[j] and v[nxt[j]]), True)
        else:
            raise ValueError(f"operator {op!r} is not part of LTL")
        cache[f] = val
        return val

    return ev(matrix)[i]
