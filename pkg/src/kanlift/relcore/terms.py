"""Logic terms.

A term is one of:

* ``Var``   -- a logic variable,
* ``str``   -- an atom,
* ``int``   -- a signed 64-bit integer,
* ``tuple`` -- a tagged tuple ``(tag, *elems)`` whose first slot is a
  non-empty ``str`` tag.

Native Python values are used for everything but variables so the unifier
can dispatch on ``type(t)`` without attribute lookups.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Union

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

NIL = "nil"
ZERO = "O"


class Var:
    __slots__ = ("id",)

    def __init__(self, id: int):
        self.id = id

    def __eq__(self, other):
        return type(other) is Var and other.id == self.id

    def __hash__(self):
        return hash(("Var", self.id))

    def __repr__(self):
        return f"_.{self.id}"


class Reified:
    """Placeholder standing in for a variable left unbound in an answer."""

    __slots__ = ("index",)

    def __init__(self, index: int):
        self.index = index

    def __eq__(self, other):
        return type(other) is Reified and other.index == self.index

    def __hash__(self):
        return hash(("Reified", self.index))

    def __repr__(self):
        return f"_{self.index}"


Term = Union[Var, str, int, tuple]


def atom(name: str) -> str:
    if not isinstance(name, str):
        raise TypeError(f"atom name must be str, got {type(name).__name__}")
    return name


def integer(value: int) -> int:
    if type(value) is not int:
        raise TypeError(f"integer term must be int, got {type(value).__name__}")
    if not INT64_MIN <= value <= INT64_MAX:
        raise OverflowError(f"{value} does not fit in a signed 64-bit integer")
    return value


def tup(tag: str, *elems: Term) -> tuple:
    if not isinstance(tag, str) or not tag:
        raise ValueError("tuple tag must be a non-empty string")
    return (tag, *elems)


def is_term(t) -> bool:
    """Structural check that ``t`` is a well-formed term."""
    tt = type(t)
    if tt is Var or tt is str:
        return True
    if tt is int:
        return INT64_MIN <= t <= INT64_MAX
    if tt is tuple:
        return bool(t) and type(t[0]) is str and bool(t[0]) and all(is_term(e) for e in t[1:])
    return False


def cons(head: Term, tail: Term) -> tuple:
    return ("cons", head, tail)


def from_list(items: Iterable[Term], tail: Term = NIL) -> Term:
    items = list(items)
    out = tail
    for item in reversed(items):
        out = ("cons", item, out)
    return out


def iter_list(t: Term) -> Iterator[Term]:
    """Yield the elements of a ground cons-list; raises ValueError otherwise."""
    while type(t) is tuple and len(t) == 3 and t[0] == "cons":
        yield t[1]
        t = t[2]
    if t != NIL:
        raise ValueError(f"not a proper list tail: {t!r}")


def to_list(t: Term) -> list:
    return list(iter_list(t))


def nat(n: int) -> Term:
    if n < 0:
        raise ValueError("naturals are non-negative")
    out: Term = ZERO
    for _ in range(n):
        out = ("S", out)
    return out


def nat_value(t: Term) -> int:
    n = 0
    while type(t) is tuple and len(t) == 2 and t[0] == "S":
        n += 1
        t = t[1]
    if t != ZERO:
        raise ValueError(f"not a ground natural: {t!r}")
    return n


def term_vars(t: Term) -> list[Var]:
    """Variables of ``t`` in order of first appearance (left to right)."""
    seen: dict[int, Var] = {}
    stack = [t]
    while stack:
        x = stack.pop()
        tx = type(x)
        if tx is Var:
            seen.setdefault(x.id, x)
        elif tx is tuple:
            stack.extend(reversed(x[1:]))
    return list(seen.values())


def show(t) -> str:
    tt = type(t)
    if tt is tuple:
        if t[0] == "cons" or t == NIL:
            try:
                return "[" + ", ".join(show(e) for e in iter_list(t)) + "]"
            except ValueError:
                pass
        if t[0] == "S":
            try:
                return f"{nat_value(t)}n"
            except ValueError:
                pass
        return f"{t[0]}(" + ", ".join(show(e) for e in t[1:]) + ")"
    return repr(t) if tt is not str else t
