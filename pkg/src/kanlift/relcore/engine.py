"""Goals, streams and the search driver.

A stream is ``None`` (no answers), a pair ``(state, stream)``, or a
zero-argument callable that produces a stream when forced. Disjunction
swaps operands whenever it meets a suspension, which gives the usual
interleaving search: a finite answer reachable through any branch is
eventually produced even when a sibling branch never ends.
"""

from __future__ import annotations

import functools
import sys
from dataclasses import dataclass
from typing import Callable, Optional

from .kernel import EMPTY, unify, walk, walk_star
from .terms import Reified, Var, term_vars

DEFAULT_BUDGET = 1_000_000
# Forcing nested suspensions recurses once per pending conjunct.
_RECURSION_LIMIT = 20000


class SearchBudgetExceeded(Exception):
    def __init__(self, budget: int):
        super().__init__(f"search exceeded its budget of {budget} steps")
        self.budget = budget


class State:
    """Substitution, disequality store and the next free variable id."""

    __slots__ = ("subst", "store", "counter")

    def __init__(self, subst=EMPTY, store=(), counter=0):
        self.subst = subst
        self.store = store
        self.counter = counter

    def __repr__(self):
        return f"State(bindings={len(self.subst)}, constraints={len(self.store)}, next={self.counter})"


Stream = object  # None | tuple[State, Stream] | Callable[[], Stream]
Goal = Callable[[State], Stream]


# -- disequality store ------------------------------------------------------
#
# A constraint is (pairs, ids): the prefix of bindings that would make the two
# original terms equal, and the variables it mentions. It is violated when
# every pair holds at once.


def _constraint(added, s_ext, s):
    pairs = tuple((Var(i), s_ext.get(i)) for i in added)
    ids = set(added)
    for _, t in pairs:
        ids.update(v.id for v in term_vars(walk_star(t, s)))
    return pairs, frozenset(ids)


def _recheck(store, s, bound):
    """Re-verify constraints mentioning a freshly bound variable.

    Returns the new store, or None if some constraint is now violated.
    """
    touched = set(bound)
    out = []
    for c in store:
        pairs, ids = c
        if ids.isdisjoint(touched):
            out.append(c)
            continue
        added = []
        s2 = s
        for a, b in pairs:
            s2 = unify(a, b, s2, added)
            if s2 is None:
                break
        if s2 is None:
            continue
        if not added:
            return None
        out.append(_constraint(added, s2, s))
    return tuple(out)


# -- streams ----------------------------------------------------------------


def mplus(s1, s2):
    if s1 is None:
        return s2
    if type(s1) is tuple:
        return (s1[0], mplus(s1[1], s2))
    return lambda: mplus(s2, s1())


def bind(stream, goal):
    if stream is None:
        return None
    if type(stream) is tuple:
        return mplus(goal(stream[0]), bind(stream[1], goal))
    return lambda: bind(stream(), goal)


# -- goals ------------------------------------------------------------------


def succeed(state):
    return (state, None)


def fail(state):
    return None


def eq(u, v) -> Goal:
    """Goal that unifies ``u`` and ``v``."""

    def goal(state):
        bound = []
        s = unify(u, v, state.subst, bound)
        if s is None:
            return None
        store = state.store
        if bound and store:
            store = _recheck(store, s, bound)
            if store is None:
                return None
        return (State(s, store, state.counter), None)

    return goal


def neq(u, v) -> Goal:
    """Goal requiring ``u`` and ``v`` never to become equal."""

    def goal(state):
        added = []
        s2 = unify(u, v, state.subst, added)
        if s2 is None:
            return (state, None)
        if not added:
            return None
        c = _constraint(added, s2, state.subst)
        return (State(state.subst, state.store + (c,), state.counter), None)

    return goal


def conj(*goals: Goal) -> Goal:
    if not goals:
        return succeed
    if len(goals) == 1:
        return goals[0]

    def goal(state):
        stream = goals[0](state)
        for g in goals[1:]:
            stream = bind(stream, g)
        return stream

    return goal


def disj(*goals: Goal) -> Goal:
    if not goals:
        return fail

    def goal(state):
        def force():
            stream = goals[-1](state)
            for g in reversed(goals[:-1]):
                stream = mplus(g(state), stream)
            return stream

        return force

    return goal


def fresh(k: int, body: Callable[..., Goal]) -> Goal:
    """Allocate ``k`` new variables and run ``body(*vars)``."""

    def goal(state):
        n = state.counter
        vs = [Var(n + i) for i in range(k)]
        return body(*vs)(State(state.subst, state.store, n + k))

    return goal


def relation(fn: Callable[..., Goal]) -> Callable[..., Goal]:
    """Decorator delaying construction and execution of a relation body.

    Recursive relations can then refer to themselves without building an
    infinite goal, and every call becomes a suspension point for the
    interleaving search.
    """

    @functools.wraps(fn)
    def wrapper(*args):
        def goal(state):
            return lambda: fn(*args)(state)

        return goal

    return wrapper


def project(term, body: Callable[[object], Goal]) -> Goal:
    """Run ``body`` on the current walk* of ``term`` (non-relational escape)."""

    def goal(state):
        return body(walk_star(term, state.subst))(state)

    return goal


# -- running ----------------------------------------------------------------


@dataclass(frozen=True)
class Answer:
    value: object
    constraints: tuple  # tuple of disjunctions; each a tuple of (lhs, rhs) pairs


def _reify(value, constraints, s):
    value = walk_star(value, s)
    names: dict[int, Reified] = {}

    def name_vars(t):
        for v in term_vars(t):
            if v.id not in names:
                names[v.id] = Reified(len(names))

    def replace(t):
        tt = type(t)
        if tt is Var:
            return names[t.id]
        if tt is tuple:
            return (t[0],) + tuple(replace(e) for e in t[1:])
        return t

    name_vars(value)
    answer_ids = set(names)
    out = []
    for pairs, _ in constraints:
        walked = [(walk_star(a, s), walk_star(b, s)) for a, b in pairs]
        mentioned = {v.id for a, b in walked for v in term_vars(a) + term_vars(b)}
        if answer_ids.isdisjoint(mentioned):
            continue
        for a, b in walked:
            name_vars(a)
            name_vars(b)
        out.append(tuple((replace(a), replace(b)) for a, b in walked))
    return replace(value), tuple(out)


def run_answers(
    limit: Optional[int],
    nvars: int,
    builder: Callable[..., Goal],
    *,
    budget: int = DEFAULT_BUDGET,
) -> list[Answer]:
    """Run ``builder(*query_vars)`` and return up to ``limit`` answers."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    qs = [Var(i) for i in range(nvars)]
    query = qs[0] if nvars == 1 else ("q",) + tuple(qs)
    stream = builder(*qs)(State(EMPTY, (), nvars))
    answers: list[Answer] = []
    steps = 0
    if sys.getrecursionlimit() < _RECURSION_LIMIT:
        sys.setrecursionlimit(_RECURSION_LIMIT)
    while stream is not None and (limit is None or len(answers) < limit):
        if type(stream) is tuple:
            state, stream = stream
            value, cs = _reify(query, state.store, state.subst)
            if nvars != 1:
                value = value[1:]
            answers.append(Answer(value, cs))
        else:
            steps += 1
            if steps > budget:
                raise SearchBudgetExceeded(budget)
            stream = stream()
    return answers


def run(limit: Optional[int], nvars: int, builder: Callable[..., Goal], *, budget: int = DEFAULT_BUDGET) -> list:
    """Reified answers only; a tuple per answer when ``nvars > 1``."""
    return [a.value for a in run_answers(limit, nvars, builder, budget=budget)]


def run_star(nvars: int, builder: Callable[..., Goal], *, budget: int = DEFAULT_BUDGET) -> list:
    return run(None, nvars, builder, budget=budget)
