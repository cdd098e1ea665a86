"""One-way normalization of elaborated Lustre into the compilable normal form.

Every ``fby`` and node call nested in an expression is hoisted into an
equation of its own on a fresh local. Equations are then scheduled: plain
definitions and calls in dependency order, followed by all delays. Locals
are declared in the order of their defining equations and nodes are listed
callees first. A node that is already in that form, in any valid order, is
left as it is.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..ir.lustre import (
    Binop, BoolLit, Call, Decl, Equation, Fby, IntLit, NApp, NDef, NDelay, Node, NNode, Program, Unop,
    VarRef, expr_vars, is_simple,
)
from ..ir.wellformed import schedule_problems
from .elaborate import _Types, calls, find_cycle, instant_deps


@dataclass(frozen=True)
class NameScheme:
    prefix: str = "norm1$"
    start: int = 1


class _Fresh:
    def __init__(self, scheme: NameScheme, taken: set[str]):
        self.scheme = scheme
        self.k = scheme.start
        self.taken = taken

    def __call__(self) -> str:
        while True:
            name = f"{self.scheme.prefix}{self.k}"
            self.k += 1
            if name not in self.taken:
                self.taken.add(name)
                return name


class _NodeNormalizer:
    def __init__(self, prog: Program, node: Node, scheme: NameScheme):
        self.prog = prog
        self.node = node
        self.fresh = _Fresh(scheme, {d.name for d in node.decls()})
        self.types = {d.name: d.type for d in node.decls()}
        self.outputs = {d.name for d in node.outputs}
        self.eqs: list[Equation] = []

    def hoist(self, e) -> VarRef:
        name = self.fresh()
        self.types[name] = _Types(self.prog, self.types, []).check(e)
        self.eqs.append(Equation(name, e))
        return VarRef(name)

    def simple(self, e):
        if isinstance(e, Unop):
            return Unop(e.op, self.simple(e.arg))
        if isinstance(e, Binop):
            return Binop(e.op, self.simple(e.left), self.simple(e.right))
        if isinstance(e, Fby):
            return self.hoist(Fby(e.init, self.simple(e.arg)))
        if isinstance(e, Call):
            return self.hoist(Call(e.node, tuple(self.simple(a) for a in e.args)))
        return _strip(e)

    def equation(self, q: Equation):
        e = q.expr
        if isinstance(e, Fby):
            rhs = Fby(e.init, self.simple(e.arg))
            if q.target in self.outputs:
                self.eqs.append(Equation(q.target, self.hoist(rhs)))
            else:
                self.eqs.append(Equation(q.target, rhs))
        elif isinstance(e, Call):
            self.eqs.append(Equation(q.target, Call(e.node, tuple(self.simple(a) for a in e.args))))
        else:
            self.eqs.append(Equation(q.target, self.simple(e)))

    def run(self) -> Node:
        if _in_normal_form(self.node):
            return _strip_node(self.node)
        for q in self.node.equations:
            self.equation(q)
        eqs = _schedule(self.eqs, self._fix_delay)
        declared = {d.name for d in self.node.inputs} | self.outputs
        locals_ = tuple(Decl(q.target, self.types[q.target]) for q in eqs if q.target not in declared)
        return Node(self.node.name, tuple(_strip_decl(d) for d in self.node.inputs),
                    tuple(_strip_decl(d) for d in self.node.outputs), locals_, tuple(eqs))

    def _fix_delay(self, q: Equation) -> tuple[list[Equation], Equation]:
        """Move a delay's argument into a definition so it reads current values."""
        ref = self.hoist(q.expr.arg)
        hoisted = self.eqs.pop()
        return [hoisted], Equation(q.target, Fby(q.expr.init, ref))


def _schedule(eqs: list[Equation], fix_delay) -> list[Equation]:
    instant = [q for q in eqs if not isinstance(q.expr, Fby)]
    delays = [q for q in eqs if isinstance(q.expr, Fby)]
    # A delay whose argument reads the target of an earlier delay would see
    # the updated value; read it through a definition placed before all delays.
    fixed_delays = []
    seen_targets: set[str] = set()
    for q in delays:
        reads = set(expr_vars(q.expr.arg)) - {q.target}
        if reads & seen_targets:
            extra, q = fix_delay(q)
            instant += extra
        fixed_delays.append(q)
        seen_targets.add(q.target)
    return _topo(instant) + fixed_delays


def _topo(eqs: list[Equation]) -> list[Equation]:
    """Stable topological order: the earliest ready equation goes first."""
    targets = {q.target for q in eqs}
    deps = [set(instant_deps(q.expr)) & targets for q in eqs]
    done: set[str] = set()
    out: list[Equation] = []
    pending = list(range(len(eqs)))
    while pending:
        for pos, k in enumerate(pending):
            if deps[k] <= done:
                break
        else:
            raise ValueError("instantaneous dependency cycle")
        pending.pop(pos)
        out.append(eqs[k])
        done.add(eqs[k].target)
    return out


def _strip(e):
    """Drop source spans so normalized output compares structurally."""
    if isinstance(e, Unop):
        return Unop(e.op, _strip(e.arg))
    if isinstance(e, Binop):
        return Binop(e.op, _strip(e.left), _strip(e.right))
    if isinstance(e, Fby):
        return Fby(_strip(e.init), _strip(e.arg))
    if isinstance(e, Call):
        return Call(e.node, tuple(_strip(a) for a in e.args))
    return type(e)(**{k: v for k, v in vars(e).items() if k != "span"})


def _strip_decl(d: Decl) -> Decl:
    return Decl(d.name, d.type, d.clock)


def _strip_node(n: Node) -> Node:
    return Node(n.name, tuple(map(_strip_decl, n.inputs)), tuple(map(_strip_decl, n.outputs)),
                tuple(map(_strip_decl, n.locals)),
                tuple(Equation(q.target, _strip(q.expr)) for q in n.equations))


def _as_nequation(q: Equation):
    e = q.expr
    if isinstance(e, Fby):
        if isinstance(e.init, (IntLit, BoolLit)) and is_simple(e.arg):
            return NDelay(q.target, e.init, e.arg)
    elif isinstance(e, Call):
        if all(is_simple(a) for a in e.args):
            return NApp(q.target, e.node, e.args)
    elif is_simple(e):
        return NDef(q.target, e)
    return None


def _in_normal_form(n: Node) -> bool:
    """Already compilable: flat equations, a valid schedule, locals in equation order."""
    neqs = [_as_nequation(q) for q in n.equations]
    if any(q is None for q in neqs):
        return False
    outputs = {d.name for d in n.outputs}
    if any(isinstance(q, NDelay) and q.target in outputs for q in neqs):
        return False
    if [d.name for d in n.locals] != [q.target for q in n.equations if q.target not in outputs]:
        return False
    return not schedule_problems(NNode(n.name, n.inputs, n.outputs, n.locals, tuple(neqs)))


def _order_nodes(prog: Program) -> list[Node]:
    by_name = {n.name: n for n in prog.nodes}
    graph = {n.name: [c.node for q in n.equations for c in calls(q.expr)] for n in prog.nodes}
    if find_cycle(graph):
        raise ValueError("recursive node calls")
    out: list[Node] = []
    placed: set[str] = set()

    def place(name):
        if name in placed or name not in by_name:
            return
        placed.add(name)
        for callee in graph[name]:
            place(callee)
        out.append(by_name[name])

    for n in prog.nodes:
        place(n.name)
    return out


def normalize(prog: Program, scheme: NameScheme = NameScheme()) -> Program:
    """Normal form of an elaborated program."""
    return Program(tuple(_NodeNormalizer(prog, n, scheme).run() for n in _order_nodes(prog)))
