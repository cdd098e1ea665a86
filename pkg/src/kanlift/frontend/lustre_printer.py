"""Canonical Lustre layout."""

from __future__ import annotations

from ..ir.lustre import Binop, BoolLit, Call, Decl, Fby, IntLit, Node, Program, Unop, VarRef

# Binding strength; higher binds tighter.
_LEVEL = {"or": 1, "and": 2, "=": 3, "<>": 3, "<": 3, "<=": 3, ">": 3, ">=": 3,
          "+": 4, "-": 4, "*": 5, "/": 5}
_UNARY = 6
_ATOM = 7


def print_expr(e, ctx: int = 0) -> str:
    """Render ``e``; ``ctx`` is the level its position requires."""
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, VarRef):
        return e.name
    if isinstance(e, Call):
        return f"{e.node}(" + ", ".join(print_expr(a) for a in e.args) + ")"
    if isinstance(e, Unop):
        if e.op == "-" and isinstance(e.arg, IntLit):
            inner = f"({e.arg.value})"  # keep it from folding into a literal
        else:
            inner = print_expr(e.arg, _UNARY)
            if e.op == "-" and inner.startswith("-"):
                inner = f"({inner})"  # "--" would open a comment
        sep = " " if e.op == "not" else ""
        return _wrap(f"{e.op}{sep}{inner}", _UNARY, ctx)
    if isinstance(e, Binop):
        lvl = _LEVEL[e.op]
        if lvl == 3:  # comparisons do not chain
            left, right = print_expr(e.left, 4), print_expr(e.right, 4)
        else:
            left, right = print_expr(e.left, lvl), print_expr(e.right, lvl + 1)
        return _wrap(f"{left} {e.op} {right}", lvl, ctx)
    if isinstance(e, Fby):
        text = f"{print_expr(e.init)} fby {print_expr(e.arg, 3)}"
        return text if ctx == 0 else f"({text})"
    raise TypeError(f"not an expression: {e!r}")


def _wrap(text: str, lvl: int, ctx: int) -> str:
    return f"({text})" if lvl < ctx else text


def _params(ds) -> str:
    return "; ".join(f"{d.name} : {d.type}" for d in ds)


def print_node(n: Node) -> str:
    lines = [f"node {n.name} ({_params(n.inputs)}) returns ({_params(n.outputs)})"]
    for k, d in enumerate(n.locals):
        lead = "  var " if k == 0 else "      "
        lines.append(f"{lead}{d.name} : {d.type};")
    lines.append("  let")
    for q in n.equations:
        lines.append(f"    {q.target} = {print_expr(q.expr)};")
    lines.append("  tel")
    return "\n".join(lines) + "\n"


def print_lustre(p: Program) -> str:
    return "\n".join(print_node(n) for n in p.nodes)
