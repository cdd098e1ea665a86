"""Structural well-formedness checks, one per IR.

Each checker returns a list of human-readable problems; an empty list means
the program is well formed.
"""

from __future__ import annotations

from . import clight as C
from . import lustre as L
from . import obc as O
from . import stc as S

_SIMPLE = (L.IntLit, L.BoolLit, L.VarRef, L.Unop, L.Binop)


def _simple(e, extra=()) -> bool:
    if isinstance(e, (L.IntLit, L.BoolLit, L.VarRef) + tuple(extra)):
        return True
    if isinstance(e, L.Unop):
        return e.op in L.UNOPS and _simple(e.arg, extra)
    if isinstance(e, L.Binop):
        return e.op in L.BINOPS and _simple(e.left, extra) and _simple(e.right, extra)
    return False


def _expr_ok(e) -> bool:
    if isinstance(e, L.Fby):
        return isinstance(e.init, (L.IntLit, L.BoolLit)) and _expr_ok(e.arg)
    if isinstance(e, L.Call):
        return all(_expr_ok(a) for a in e.args)
    if isinstance(e, L.Unop):
        return e.op in L.UNOPS and _expr_ok(e.arg)
    if isinstance(e, L.Binop):
        return e.op in L.BINOPS and _expr_ok(e.left) and _expr_ok(e.right)
    return isinstance(e, (L.IntLit, L.BoolLit, L.VarRef))


def _decls(where, decls, problems) -> set[str]:
    names: set[str] = set()
    for d in decls:
        if d.name in names:
            problems.append(f"{where}: '{d.name}' declared twice")
        if d.type not in L.TYPES:
            problems.append(f"{where}: '{d.name}' has unknown type {d.type!r}")
        if d.clock != L.BASE_CLOCK:
            problems.append(f"{where}: '{d.name}' is not on the base clock")
        names.add(d.name)
    return names


def _definitions(where, node, targets, problems):
    _decls(where, node.decls(), problems)
    defined = [d.name for d in node.outputs + node.locals]
    for t in targets:
        if t not in defined:
            problems.append(f"{where}: equation target '{t}' is not an output or local")
    for name in defined:
        k = targets.count(name)
        if k != 1:
            problems.append(f"{where}: '{name}' has {k} defining equations")
    if len(node.outputs) != 1:
        problems.append(f"{where}: expected exactly one output, found {len(node.outputs)}")


def _call_graph(where, calls: dict[str, list[str]], problems):
    for caller, callees in calls.items():
        for f in callees:
            if f not in calls:
                problems.append(f"{where}: '{caller}' calls unknown node '{f}'")
    # cycle check by repeated removal of nodes without remaining callees
    remaining = {k: set(v) & set(calls) for k, v in calls.items()}
    while True:
        leaves = [k for k, v in remaining.items() if not v]
        if not leaves:
            break
        for k in leaves:
            del remaining[k]
        for v in remaining.values():
            v.difference_update(leaves)
    if remaining:
        problems.append(f"{where}: recursive calls among {sorted(remaining)}")


def check_lustre(p: L.Program) -> list[str]:
    problems: list[str] = []
    calls = {}
    for n in p.nodes:
        where = f"node {n.name}"
        _definitions(where, n, [q.target for q in n.equations], problems)
        for q in n.equations:
            if not _expr_ok(q.expr):
                problems.append(f"{where}: malformed expression for '{q.target}'")
        calls[n.name] = [c.node for q in n.equations for c in _calls(q.expr)]
    _call_graph("program", calls, problems)
    return problems


def _calls(e):
    if isinstance(e, L.Call):
        yield e
        for a in e.args:
            yield from _calls(a)
    elif isinstance(e, L.Unop):
        yield from _calls(e.arg)
    elif isinstance(e, L.Binop):
        yield from _calls(e.left)
        yield from _calls(e.right)
    elif isinstance(e, L.Fby):
        yield from _calls(e.arg)


def schedule_problems(n: L.NNode) -> list[str]:
    """Reads that would observe the wrong instant once equations run in order.

    Inputs may be read anywhere. A Def/App target may be read only after its
    equation. A Delay target holds the previous value until its own Delay
    runs, so it may be read only up to that equation.
    """
    problems = []
    inputs = {d.name for d in n.inputs}
    pos = {q.target: k for k, q in enumerate(n.equations)}
    delay = {q.target for q in n.equations if isinstance(q, L.NDelay)}
    for k, q in enumerate(n.equations):
        if isinstance(q, L.NApp):
            reads = [v for a in q.args for v in L.expr_vars(a)]
        else:
            reads = L.expr_vars(q.expr)
        for v in reads:
            if v in inputs or v not in pos:
                continue
            if v in delay:
                if pos[v] < k:
                    problems.append(f"node {n.name}: equation {k} reads '{v}' after its delay updated it")
            elif pos[v] >= k:
                problems.append(f"node {n.name}: equation {k} reads '{v}' before it is defined")
    return problems


def check_nlustre(p: L.NProgram) -> list[str]:
    problems: list[str] = []
    calls = {}
    for n in p.nodes:
        where = f"node {n.name}"
        _definitions(where, n, [q.target for q in n.equations], problems)
        for q in n.equations:
            if isinstance(q, L.NDef):
                ok = _simple(q.expr)
            elif isinstance(q, L.NDelay):
                ok = isinstance(q.init, (L.IntLit, L.BoolLit)) and _simple(q.expr)
            elif isinstance(q, L.NApp):
                ok = all(_simple(a) for a in q.args)
            else:
                ok = False
            if not ok:
                problems.append(f"{where}: equation for '{q.target}' is not in normal form")
        problems += schedule_problems(n)
        calls[n.name] = [q.node for q in n.equations if isinstance(q, L.NApp)]
    _call_graph("program", calls, problems)
    return problems


def check_stc(p: S.StcProgram) -> list[str]:
    problems: list[str] = []
    names = {s.name for s in p.systems}
    for s in p.systems:
        where = f"system {s.name}"
        _decls(where, s.inputs + s.outputs + s.locals, problems)
        regs = [r.name for r in s.registers]
        nexts = [t.register for t in s.transitions if isinstance(t, S.Next)]
        for r in s.registers:
            if nexts.count(r.name) != 1:
                problems.append(f"{where}: register '{r.name}' has {nexts.count(r.name)} Next transitions")
        for x in nexts:
            if x not in regs:
                problems.append(f"{where}: Next of unknown register '{x}'")
        insts = {i.name: i.system for i in s.instances}
        for i in s.instances:
            if i.system not in names:
                problems.append(f"{where}: instance '{i.name}' of unknown system '{i.system}'")
        for t in s.transitions:
            exprs = t.args if isinstance(t, S.StepCall) else (t.expr,)
            if not all(_simple(e) for e in exprs):
                problems.append(f"{where}: transition {t} has a non-simple expression")
            if isinstance(t, S.StepCall) and t.instance not in insts:
                problems.append(f"{where}: step of unknown instance '{t.instance}'")
        if len(s.outputs) != 1:
            problems.append(f"{where}: expected exactly one output")
    return problems


def _obc_stmts(s):
    if isinstance(s, O.Seq):
        yield from _obc_stmts(s.first)
        yield from _obc_stmts(s.second)
    elif isinstance(s, O.IfThenElse):
        yield s
        yield from _obc_stmts(s.then)
        yield from _obc_stmts(s.orelse)
    else:
        yield s


def check_obc(p: O.ObcProgram) -> list[str]:
    problems: list[str] = []
    classes = {c.name: c for c in p.classes}
    for c in p.classes:
        where = f"class {c.name}"
        mems = {m.name for m in c.memories}
        insts = {i.name: i.cls for i in c.instances}
        for i in c.instances:
            if i.cls not in classes:
                problems.append(f"{where}: instance '{i.name}' of unknown class '{i.cls}'")
        for s in _obc_stmts(c.step.body):
            if isinstance(s, O.AssignState) and s.field not in mems:
                problems.append(f"{where}: write to unknown memory '{s.field}'")
            if isinstance(s, O.MethodCall) and s.instance not in insts:
                problems.append(f"{where}: call on unknown instance '{s.instance}'")
            for e in _obc_exprs(s):
                if not _simple(e, (O.StateRef,)):
                    problems.append(f"{where}: malformed expression {e}")
        for s in _obc_stmts(c.reset.body):
            if isinstance(s, O.AssignState):
                if s.field not in mems or not isinstance(s.expr, (L.IntLit, L.BoolLit)):
                    problems.append(f"{where}: reset may only assign memories their initial constants")
            elif isinstance(s, O.MethodCall):
                if s.method != "reset" or s.instance not in insts:
                    problems.append(f"{where}: reset may only reset sub-instances")
            elif not isinstance(s, O.Skip):
                problems.append(f"{where}: unexpected statement {s} in reset")
    return problems


def _obc_exprs(s):
    if isinstance(s, (O.Assign, O.AssignState)):
        return [s.expr]
    if isinstance(s, O.MethodCall):
        return list(s.args)
    if isinstance(s, O.IfThenElse):
        return [s.cond]
    return []


def check_clight(c: C.ClightProgram) -> list[str]:
    problems: list[str] = []
    structs = {s.name: s for s in c.structs}
    funs = {f.name: f for f in c.functions}
    for s in c.structs:
        for f in s.fields:
            if isinstance(f.type, C.StructType):
                if f.type.name not in structs:
                    problems.append(f"struct {s.name}: field '{f.name}' of unknown struct '{f.type.name}'")
            elif f.type not in (C.C_INT, C.C_BOOL):
                problems.append(f"struct {s.name}: field '{f.name}' has bad type {f.type!r}")
        for name in (C.step_name(s.name), C.reset_name(s.name)):
            if name not in funs:
                problems.append(f"struct {s.name}: missing function '{name}'")
    for f in c.functions:
        if f.self_struct not in structs:
            problems.append(f"function {f.name}: unknown state struct '{f.self_struct}'")
        if f.name.startswith(C.RESET_PREFIX) and (f.ret is not None or f.params):
            problems.append(f"function {f.name}: reset takes no values and returns void")
        if f.name.startswith(C.STEP_PREFIX) and f.ret is None:
            problems.append(f"function {f.name}: step must return its output")
    return problems
