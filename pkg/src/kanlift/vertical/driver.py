"""Run the pipeline relations forward (compile) or backward (lift)."""

from __future__ import annotations

from typing import Optional

from ..ir.encode import decode, encode
from ..relcore import DEFAULT_BUDGET, SearchBudgetExceeded, run
from .relations import PASS_KINDS, PASSES, PassName, compileR

__all__ = ["NotInImage", "SearchBudgetExceeded", "compile", "lift", "compile_pass", "lift_pass", "run_relation"]


class NotInImage(Exception):
    """The relation has no answer for the given program."""

    def __init__(self, what: str, detail: str = ""):
        msg = f"{what} has no counterpart under the relation"
        super().__init__(msg + (f": {detail}" if detail else ""))
        self.what = what


def run_relation(rel, term, forward: bool, limit: Optional[int] = 1, budget: int = DEFAULT_BUDGET) -> list:
    """Answers of ``rel`` with ``term`` on the left (forward) or right side."""
    if forward:
        return run(limit, 1, lambda q: rel(term, q), budget=budget)
    return run(limit, 1, lambda q: rel(q, term), budget=budget)


def _one(rel, program, forward, kind, budget, what):
    answers = run_relation(rel, encode(program), forward, 1, budget)
    if not answers:
        raise NotInImage(what)
    return decode(answers[0], kind)


def compile(program, *, budget: int = DEFAULT_BUDGET):
    """Normal-form Lustre ``Program`` to ``ClightProgram``."""
    return _one(compileR, program, True, "clight", budget, "Lustre program")


def lift(program, *, budget: int = DEFAULT_BUDGET):
    """Canonical ``ClightProgram`` back to normal-form Lustre."""
    return _one(compileR, program, False, "lustre", budget, "C program")


def compile_pass(name: PassName, program, *, budget: int = DEFAULT_BUDGET):
    return _one(PASSES[name], program, True, PASS_KINDS[name][1], budget, f"{PASS_KINDS[name][0]} program")


def lift_pass(name: PassName, program, *, budget: int = DEFAULT_BUDGET):
    return _one(PASSES[name], program, False, PASS_KINDS[name][0], budget, f"{PASS_KINDS[name][1]} program")
