"""C-to-C rewrites that move near-canonical programs into the compiler's image.

Passes run in a fixed order: sequence re-association, skip insertion, then
declaration ordering. ``canonicalize_c`` iterates them to a fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Iterable, Optional

from .ir.clight import (
    CFun, CIf, ClightProgram, CReturn, CSeq, CSkip, reset_name, seq_leaves, step_name,
)


@dataclass(frozen=True)
class RewritePass:
    name: str
    transform: Callable[[ClightProgram], ClightProgram]


class CanonicalizationDiverged(RuntimeError):
    pass


def _map_bodies(c: ClightProgram, fn) -> ClightProgram:
    return replace(c, functions=tuple(replace(f, body=fn(f.body, f)) for f in c.functions))


def _reassoc(s):
    if isinstance(s, CSeq):
        first, second = s.first, s.second
        while isinstance(first, CSeq):
            first, second = first.first, CSeq(first.second, second)
        return CSeq(_reassoc(first), _reassoc(second))
    if isinstance(s, CIf):
        return CIf(s.cond, _reassoc(s.then), _reassoc(s.orelse))
    return s


def reassoc_seq(c: ClightProgram) -> ClightProgram:
    """Right-nest every sequence, keeping the order of its leaves."""
    return _map_bodies(c, lambda body, f: _reassoc(body))


def _chain(stmts):
    out = stmts[-1]
    for s in reversed(stmts[:-1]):
        out = CSeq(s, out)
    return out


def _skip_terminate(body, f: CFun):
    leaves = [s for s in seq_leaves(body) if not isinstance(s, CSkip)]
    if f.ret is None and (not leaves or not isinstance(leaves[-1], CReturn)):
        leaves.append(CReturn(None))
    if not leaves or not isinstance(leaves[-1], CReturn):
        return body  # no final return to anchor on; leave it for the relation to reject
    return _chain(leaves[:-1] + [CSkip(), leaves[-1]])


def insert_skips(c: ClightProgram) -> ClightProgram:
    """End every function body in ``skip; return``, dropping other skips on the spine.

    A void function without a final return gets one.
    """
    return _map_bodies(c, _skip_terminate)


def order_decls(c: ClightProgram) -> ClightProgram:
    """Per struct, in struct order: its step function, then its reset function.

    Functions that match no struct keep their relative order at the end.
    """
    by_name = {f.name: f for f in c.functions}
    ordered: list[CFun] = []
    for s in c.structs:
        for name in (step_name(s.name), reset_name(s.name)):
            f = by_name.pop(name, None)
            if f is not None:
                ordered.append(f)
    ordered += [f for f in c.functions if f.name in by_name]
    return replace(c, functions=tuple(ordered))


PASSES: dict[str, RewritePass] = {
    p.name: p for p in (
        RewritePass("reassoc-seq", reassoc_seq),
        RewritePass("insert-skips", insert_skips),
        RewritePass("decl-order", order_decls),
    )
}
PASS_ORDER = tuple(PASSES)


def select_passes(names: Optional[Iterable[str]]) -> list[RewritePass]:
    """Registered passes named in ``names`` (all when None), in the fixed order."""
    if names is None:
        return [PASSES[n] for n in PASS_ORDER]
    wanted = list(names)
    unknown = [n for n in wanted if n not in PASSES]
    if unknown:
        raise KeyError(f"unknown pass(es): {', '.join(unknown)}; known: {', '.join(PASS_ORDER)}")
    return [p for n, p in PASSES.items() if n in wanted]


def canonicalize_c(c: ClightProgram, passes: Optional[Iterable[str]] = None) -> ClightProgram:
    selected = select_passes(passes)
    cap = max(1, 2 * len(selected))
    for _ in range(cap):
        prev = c
        for p in selected:
            c = p.transform(c)
        if c == prev:
            return c
    raise CanonicalizationDiverged(f"no fixpoint after {cap} rounds")
