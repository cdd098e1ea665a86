"""Embedded relational engine: terms, unification, goals, search."""

from .engine import (
    DEFAULT_BUDGET,
    Answer,
    Goal,
    SearchBudgetExceeded,
    State,
    conj,
    disj,
    eq,
    fail,
    fresh,
    neq,
    project,
    relation,
    run,
    run_answers,
    run_star,
    succeed,
)
from .kernel import EMPTY, IMPLEMENTATION, unify, walk, walk_star
from .nat import addR, mulR, squareR
from .terms import NIL, ZERO, Reified, Term, Var, atom, cons, from_list, integer, nat, nat_value, to_list, tup

__all__ = [
    "DEFAULT_BUDGET", "Answer", "Goal", "SearchBudgetExceeded", "State", "conj", "disj", "eq", "fail",
    "fresh", "neq", "project", "relation", "run", "run_answers", "run_star", "succeed", "EMPTY",
    "IMPLEMENTATION", "unify", "walk", "walk_star", "addR", "mulR", "squareR", "NIL", "ZERO", "Reified",
    "Term", "Var", "atom", "cons", "from_list", "integer", "nat", "nat_value", "to_list", "tup",
]
