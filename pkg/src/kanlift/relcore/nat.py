"""Peano arithmetic relations: ``O`` and ``("S", n)``."""

from __future__ import annotations

from .engine import Goal, conj, disj, eq, fresh, relation
from .terms import ZERO


def succ(n):
    return ("S", n)


@relation
def addR(x, y, total) -> Goal:
    """x + y = total; finite whenever ``x`` or ``total`` is ground."""
    return disj(
        conj(eq(x, ZERO), eq(y, total)),
        fresh(2, lambda x1, t1: conj(
            eq(x, succ(x1)),
            eq(total, succ(t1)),
            addR(x1, y, t1),
        )),
    )


@relation
def mulR(x, y, product) -> Goal:
    """x * y = product.

    The successor case is split on ``y`` so that, with ``product`` ground,
    every recursive call sees a strictly smaller product; the sum is solved
    before the recursive product for the same reason.
    """
    return disj(
        conj(eq(x, ZERO), eq(product, ZERO)),
        fresh(1, lambda x1: conj(eq(x, succ(x1)), eq(y, ZERO), eq(product, ZERO))),
        fresh(3, lambda x1, y1, p1: conj(
            eq(x, succ(x1)),
            eq(y, succ(y1)),
            addR(y, p1, product),
            mulR(x1, y, p1),
        )),
    )


def squareR(root, square) -> Goal:
    return mulR(root, root, square)
