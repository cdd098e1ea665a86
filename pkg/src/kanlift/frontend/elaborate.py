"""Static checks on parsed Lustre: scoping, typing and causality.

The program is returned unchanged when it is accepted; declarations already
carry every variable's type and the base clock, and ``expr_type`` recovers
the type of any sub-expression.
"""

from __future__ import annotations

from typing import Optional

from ..ir.lustre import (
    BOOL, INT, Binop, BoolLit, Call, Fby, IntLit, Node, Program, Unop, VarRef,
)
from .diagnostics import Diagnostic, DiagnosticError

PHASE = "elaborate"

_ARITH = ("+", "-", "*", "/")
_ORDER = ("<", "<=", ">", ">=")
_EQUAL = ("=", "<>")
_LOGIC = ("and", "or")


class _Types:
    def __init__(self, prog: Program, env: dict[str, str], diags: list[Diagnostic]):
        self.prog = prog
        self.env = env
        self.diags = diags

    def err(self, msg, span):
        self.diags.append(Diagnostic("error", span, msg, PHASE))

    def check(self, e) -> Optional[str]:
        """Type of ``e``, or None after reporting an error inside it."""
        if isinstance(e, IntLit):
            return INT
        if isinstance(e, BoolLit):
            return BOOL
        if isinstance(e, VarRef):
            if e.name not in self.env:
                self.err(f"undefined variable '{e.name}'", e.span)
                return None
            return self.env[e.name]
        if isinstance(e, Unop):
            t = self.check(e.arg)
            want = INT if e.op == "-" else BOOL
            if t is not None and t != want:
                self.err(f"operator '{e.op}' expects {want}, got {t}", e.span)
                return None
            return want if t is not None else None
        if isinstance(e, Binop):
            l, r = self.check(e.left), self.check(e.right)
            if l is None or r is None:
                return None
            if e.op in _ARITH or e.op in _ORDER:
                if l != INT or r != INT:
                    self.err(f"operator '{e.op}' expects {INT} operands, got {l} and {r}", e.span)
                    return None
                return INT if e.op in _ARITH else BOOL
            if e.op in _LOGIC:
                if l != BOOL or r != BOOL:
                    self.err(f"operator '{e.op}' expects {BOOL} operands, got {l} and {r}", e.span)
                    return None
                return BOOL
            if l != r:
                self.err(f"operator '{e.op}' compares {l} with {r}", e.span)
                return None
            return BOOL
        if isinstance(e, Fby):
            c, a = self.check(e.init), self.check(e.arg)
            if c is not None and a is not None and c != a:
                self.err(f"fby initial value has type {c} but the stream has type {a}", e.span)
                return None
            return a if c is not None else None
        if isinstance(e, Call):
            arg_types = [self.check(a) for a in e.args]
            try:
                callee = self.prog.node(e.node)
            except KeyError:
                self.err(f"call to unknown node '{e.node}'", e.span)
                return None
            if len(callee.outputs) != 1:
                self.err(f"call to node '{e.node}' with {len(callee.outputs)} outputs; calls need exactly one", e.span)
                return None
            if len(arg_types) != len(callee.inputs):
                self.err(f"node '{e.node}' expects {len(callee.inputs)} arguments, got {len(arg_types)}", e.span)
                return None
            for k, (t, d) in enumerate(zip(arg_types, callee.inputs)):
                if t is not None and t != d.type:
                    self.err(f"argument {k + 1} of '{e.node}' should be {d.type}, got {t}", e.span)
            return callee.outputs[0].type
        raise TypeError(f"not an expression: {e!r}")


def expr_type(prog: Program, node: Node, e) -> Optional[str]:
    env = {d.name: d.type for d in node.decls()}
    return _Types(prog, env, []).check(e)


def instant_deps(e) -> list[str]:
    """Variables ``e`` reads in the same instant (not under ``fby``)."""
    out: list[str] = []

    def go(x):
        if isinstance(x, VarRef):
            out.append(x.name)
        elif isinstance(x, Unop):
            go(x.arg)
        elif isinstance(x, Binop):
            go(x.left)
            go(x.right)
        elif isinstance(x, Call):
            for a in x.args:
                go(a)

    go(e)
    return out


def calls(e) -> list[Call]:
    out: list[Call] = []

    def go(x):
        if isinstance(x, Call):
            out.append(x)
            for a in x.args:
                go(a)
        elif isinstance(x, Unop):
            go(x.arg)
        elif isinstance(x, Binop):
            go(x.left)
            go(x.right)
        elif isinstance(x, Fby):
            go(x.arg)

    go(e)
    return out


def find_cycle(graph: dict[str, list[str]]) -> Optional[list[str]]:
    """Some cycle of ``graph`` as a list of vertices, or None."""
    color: dict[str, int] = {}
    stack: list[str] = []

    def visit(v) -> Optional[list[str]]:
        color[v] = 1
        stack.append(v)
        for w in graph.get(v, ()):
            if w not in graph:
                continue
            if color.get(w) == 1:
                return stack[stack.index(w):] + [w]
            if w not in color:
                found = visit(w)
                if found:
                    return found
        stack.pop()
        color[v] = 2
        return None

    for v in graph:
        if v not in color:
            found = visit(v)
            if found:
                return found
    return None


def _check_node(prog: Program, n: Node, diags: list[Diagnostic]):
    def err(msg, span=n.span):
        diags.append(Diagnostic("error", span, msg, PHASE))

    if len(n.outputs) != 1:
        err(f"node '{n.name}' has {len(n.outputs)} outputs; exactly one is supported")
    env: dict[str, str] = {}
    for d in n.decls():
        if d.name in env:
            err(f"variable '{d.name}' is declared more than once in node '{n.name}'", d.span)
        env.setdefault(d.name, d.type)
    inputs = {d.name for d in n.inputs}
    defined: dict[str, int] = {}
    types = _Types(prog, env, diags)
    for q in n.equations:
        if q.target in inputs:
            err(f"input '{q.target}' cannot be defined by an equation", q.span)
        elif q.target not in env:
            err(f"equation defines undeclared variable '{q.target}'", q.span)
        elif q.target in defined:
            err(f"variable '{q.target}' is defined more than once", q.span)
        defined[q.target] = defined.get(q.target, 0) + 1
        t = types.check(q.expr)
        if t is not None and q.target in env and env[q.target] != t:
            err(f"equation for '{q.target}' has type {t}, expected {env[q.target]}", q.span)
    for d in n.outputs + n.locals:
        if d.name not in defined:
            err(f"variable '{d.name}' has no defining equation", d.span)
    graph = {q.target: instant_deps(q.expr) for q in n.equations}
    cycle = find_cycle(graph)
    if cycle:
        err(f"instantaneous dependency cycle: {' -> '.join(cycle)}")


def elaborate(prog: Program) -> Program:
    """Check ``prog``; raise DiagnosticError listing every violation."""
    diags: list[Diagnostic] = []
    names = set()
    for n in prog.nodes:
        if n.name in names:
            diags.append(Diagnostic("error", n.span, f"duplicate node name '{n.name}'", PHASE))
        names.add(n.name)
    for n in prog.nodes:
        _check_node(prog, n, diags)
    call_graph = {n.name: [c.node for q in n.equations for c in calls(q.expr)] for n in prog.nodes}
    cycle = find_cycle(call_graph)
    if cycle:
        diags.append(Diagnostic("error", None, f"recursive node calls: {' -> '.join(cycle)}", PHASE))
    if diags:
        raise DiagnosticError(diags)
    return prog
