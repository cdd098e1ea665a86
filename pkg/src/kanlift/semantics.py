"""Reference interpreters for Lustre and canonical C, and trace comparison.

Both interpreters use 32-bit two's-complement arithmetic with wrap-around,
and integer division truncating toward zero. A trace is a list of steps,
each a dict from identifier to value (``int`` or ``bool``).
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from typing import Optional, Union

from .frontend.elaborate import find_cycle, instant_deps
from .ir.clight import (
    C_BOOL, CAssignField, CAssignLocal, CBinop, CCall, CConst, CFieldRead, CIf, ClightProgram,
    CReturn, CSeq, CSkip, CUnop, CVar, StructType, reset_name, step_name,
)
from .ir.lustre import BOOL, Binop, BoolLit, Call, Fby, IntLit, Program, Unop, VarRef

Value = Union[int, bool]
Trace = list[dict[str, Value]]

INT32_MIN, INT32_MAX = -(2**31), 2**31 - 1


class EvalError(Exception):
    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


def wrap32(v: int) -> int:
    return (v + 2**31) % 2**32 - 2**31


def _div(a: int, b: int) -> int:
    if b == 0:
        raise EvalError("division by zero")
    q = abs(a) // abs(b)
    return wrap32(q if (a < 0) == (b < 0) else -q)


def _arith(op: str, a: int, b: int) -> int:
    if op == "+":
        return wrap32(a + b)
    if op == "-":
        return wrap32(a - b)
    if op == "*":
        return wrap32(a * b)
    return _div(a, b)


_COMPARE = {
    "=": lambda a, b: a == b, "<>": lambda a, b: a != b, "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b, ">": lambda a, b: a > b, ">=": lambda a, b: a >= b,
}


# -- Lustre ---------------------------------------------------------------------


class _LustreInstance:
    """Running state of one node instance: fby memories and callee instances."""

    def __init__(self, prog: Program, name: str):
        try:
            self.node = prog.node(name)
        except KeyError:
            raise EvalError(f"unknown node '{name}'") from None
        self.prog = prog
        self.mem: dict[tuple, Value] = {}
        self.children: dict[tuple, _LustreInstance] = {}
        graph = {q.target: instant_deps(q.expr) for q in self.node.equations}
        if find_cycle(graph):
            raise EvalError(f"node '{name}' has an instantaneous dependency cycle")
        self.order = _topo_order(self.node.equations, graph)

    def step(self, inputs: dict[str, Value]) -> dict[str, Value]:
        env = dict(inputs)
        fby_now: dict[tuple, Value] = {}
        fbys: list[tuple[tuple, Fby]] = []
        for k in self.order:
            q = self.node.equations[k]
            env[q.target] = self._eval(q.expr, env, (k,), fby_now, fbys)
        # Second phase: every fby samples its argument for the next instant.
        nxt = {}
        pending = list(fbys)
        while pending:
            key, e = pending.pop(0)
            nxt[key] = self._eval(e.arg, env, key + (0,), fby_now, pending)
        self.mem.update(nxt)
        return {d.name: env[d.name] for d in self.node.outputs}

    def _eval(self, e, env, path, fby_now, fbys):
        if isinstance(e, IntLit):
            return e.value
        if isinstance(e, BoolLit):
            return e.value
        if isinstance(e, VarRef):
            return env[e.name]
        if isinstance(e, Unop):
            v = self._eval(e.arg, env, path + (0,), fby_now, fbys)
            return wrap32(-v) if e.op == "-" else not v
        if isinstance(e, Binop):
            # Both sides always run: a call on either side must advance its state.
            a = self._eval(e.left, env, path + (0,), fby_now, fbys)
            b = self._eval(e.right, env, path + (1,), fby_now, fbys)
            if e.op == "and":
                return a and b
            if e.op == "or":
                return a or b
            if e.op in _COMPARE:
                return _COMPARE[e.op](a, b)
            return _arith(e.op, a, b)
        if isinstance(e, Fby):
            if path not in fby_now:
                fby_now[path] = self.mem.get(path, e.init.value)
                fbys.append((path, e))
            return fby_now[path]
        if isinstance(e, Call):
            args = [self._eval(a, env, path + (i,), fby_now, fbys) for i, a in enumerate(e.args)]
            child = self.children.get(path)
            if child is None:
                child = self.children[path] = _LustreInstance(self.prog, e.node)
            out = child.step({d.name: v for d, v in zip(child.node.inputs, args)})
            return out[child.node.outputs[0].name]
        raise TypeError(f"not an expression: {e!r}")


def _topo_order(eqs, graph) -> list[int]:
    index = {q.target: k for k, q in enumerate(eqs)}
    seen: set[int] = set()
    order: list[int] = []

    def visit(k):
        if k in seen:
            return
        seen.add(k)
        for v in graph[eqs[k].target]:
            if v in index:
                visit(index[v])
        order.append(k)

    for k in range(len(eqs)):
        visit(k)
    return order


def eval_lustre(prog: Program, node: str, inputs: Trace) -> Trace:
    inst = _LustreInstance(prog, node)
    out = []
    for t, step in enumerate(inputs):
        _check_inputs(step, [d.name for d in inst.node.inputs], t)
        try:
            out.append(inst.step(step))
        except EvalError as exc:
            raise EvalError(str(exc), t) from None
    return out


def _check_inputs(step, names, t):
    if set(step) != set(names):
        raise EvalError(f"inputs {sorted(step)} do not match the declared inputs {names}", t)


# -- canonical C ----------------------------------------------------------------


@dataclass
class MachineState:
    fields: dict[str, Optional[int]] = field(default_factory=dict)
    instances: dict[str, "MachineState"] = field(default_factory=dict)


class _Return(Exception):
    def __init__(self, value):
        self.value = value


def new_state(c: ClightProgram, struct: str) -> MachineState:
    st = MachineState()
    for f in c.struct(struct).fields:
        if isinstance(f.type, StructType):
            st.instances[f.name] = new_state(c, f.type.name)
        else:
            st.fields[f.name] = None
    return st


def _to_c(v: Value) -> int:
    return int(v)


class _CMachine:
    def __init__(self, c: ClightProgram):
        self.c = c
        self.funs = {f.name: f for f in c.functions}

    def call(self, name: str, state: MachineState, args: list[int]):
        f = self.funs.get(name)
        if f is None:
            raise EvalError(f"unknown function '{name}'")
        if len(args) != len(f.params):
            raise EvalError(f"'{name}' expects {len(f.params)} arguments, got {len(args)}")
        env: dict[str, Optional[int]] = {p.name: _coerce(a, p.type) for p, a in zip(f.params, args)}
        types = {p.name: p.type for p in f.params}
        for r in f.registers:
            env[r.name] = None
            types[r.name] = r.type
        field_types = {d.name: d.type for d in self.c.struct(f.self_struct).fields}
        try:
            self.exec(f.body, env, types, state, field_types)
        except _Return as r:
            return None if r.value is None else _coerce(r.value, f.ret)
        if f.ret is not None:
            raise EvalError(f"'{name}' finished without returning a value")
        return None

    def exec(self, s, env, types, st, ftypes):
        if isinstance(s, CSeq):
            self.exec(s.first, env, types, st, ftypes)
            self.exec(s.second, env, types, st, ftypes)
        elif isinstance(s, CSkip):
            pass
        elif isinstance(s, CAssignLocal):
            if s.target not in env:
                raise EvalError(f"assignment to undeclared '{s.target}'")
            env[s.target] = _coerce(self.eval(s.expr, env, st), types[s.target])
        elif isinstance(s, CAssignField):
            if s.field not in st.fields:
                raise EvalError(f"no scalar field '{s.field}'")
            st.fields[s.field] = _coerce(self.eval(s.expr, env, st), ftypes[s.field])
        elif isinstance(s, CCall):
            if s.instance not in st.instances:
                raise EvalError(f"no instance field '{s.instance}'")
            args = [self.eval(a, env, st) for a in s.args]
            v = self.call(s.func, st.instances[s.instance], args)
            if s.result is not None:
                if v is None:
                    raise EvalError(f"'{s.func}' returns no value")
                env[s.result] = _coerce(v, types[s.result])
        elif isinstance(s, CIf):
            branch = s.then if self.eval(s.cond, env, st) else s.orelse
            self.exec(branch, env, types, st, ftypes)
        elif isinstance(s, CReturn):
            raise _Return(None if s.value is None else self.eval(s.value, env, st))
        else:
            raise TypeError(f"not a C statement: {s!r}")

    def eval(self, e, env, st) -> int:
        if isinstance(e, CConst):
            return e.value
        if isinstance(e, CVar):
            if e.name not in env:
                raise EvalError(f"undeclared variable '{e.name}'")
            v = env[e.name]
            if v is None:
                raise EvalError(f"read of uninitialized variable '{e.name}'")
            return v
        if isinstance(e, CFieldRead):
            if e.field not in st.fields:
                raise EvalError(f"no scalar field '{e.field}'")
            v = st.fields[e.field]
            if v is None:
                raise EvalError(f"read of uninitialized field '{e.field}'")
            return v
        if isinstance(e, CUnop):
            v = self.eval(e.arg, env, st)
            return wrap32(-v) if e.op == "-" else int(v == 0)
        if isinstance(e, CBinop):
            a = self.eval(e.left, env, st)
            if e.op == "and":
                return int(bool(a) and bool(self.eval(e.right, env, st)))
            if e.op == "or":
                return int(bool(a) or bool(self.eval(e.right, env, st)))
            b = self.eval(e.right, env, st)
            if e.op in _COMPARE:
                return int(_COMPARE[e.op](a, b))
            return _arith(e.op, a, b)
        raise TypeError(f"not a C expression: {e!r}")


def _coerce(v: int, ctype) -> int:
    if ctype == C_BOOL:
        return int(v != 0)
    return wrap32(int(v))


def reset_machine(c: ClightProgram, node: str) -> MachineState:
    """Fresh state for ``node`` after running its reset function once."""
    try:
        st = new_state(c, node)
    except KeyError:
        raise EvalError(f"unknown node '{node}'") from None
    _CMachine(c).call(reset_name(node), st, [])
    return st


def eval_clight(c: ClightProgram, node: str, inputs: Trace, state: Optional[MachineState] = None) -> Trace:
    m = _CMachine(c)
    st = state if state is not None else reset_machine(c, node)
    step = m.funs.get(step_name(node))
    if step is None:
        raise EvalError(f"unknown function '{step_name(node)}'")
    out_name = step.registers[0].name if step.registers else "out"
    if isinstance(step.body, CSeq):
        ret = _final_return(step.body)
        if ret is not None and isinstance(ret.value, CVar):
            out_name = ret.value.name
    out = []
    for t, values in enumerate(inputs):
        _check_inputs(values, [p.name for p in step.params], t)
        try:
            v = m.call(step.name, st, [_to_c(values[p.name]) for p in step.params])
        except EvalError as exc:
            raise EvalError(str(exc), t) from None
        out.append({out_name: bool(v) if step.ret == C_BOOL else v})
    return out


def _final_return(s) -> Optional[CReturn]:
    while isinstance(s, CSeq):
        s = s.second
    return s if isinstance(s, CReturn) else None


# -- comparison -----------------------------------------------------------------


@dataclass(frozen=True)
class Divergence:
    trace: int
    step: int
    name: str
    lustre: Value
    clight: Value


@dataclass
class TraceReport:
    node: str
    checked: int
    divergences: list[Divergence]

    @property
    def equal(self) -> bool:
        return not self.divergences

    def __str__(self):
        if self.equal:
            return f"{self.node}: {self.checked} trace(s) agree"
        return "\n".join(
            f"{self.node}: trace {d.trace} diverges at step {d.step} on '{d.name}': "
            f"lustre={format_value(d.lustre)} c={format_value(d.clight)}" for d in self.divergences)


def trace_equiv(p: Program, c: ClightProgram, node: str, traces: list[Trace]) -> TraceReport:
    """First divergent step of each trace between the two interpreters."""
    out_name = p.node(node).outputs[0].name
    divs = []
    for k, tr in enumerate(traces):
        lo = eval_lustre(p, node, tr)
        co = eval_clight(c, node, tr)
        for t, (a, b) in enumerate(zip(lo, co)):
            av, bv = a[out_name], next(iter(b.values()))
            if av != bv or type(av) is not type(bv):
                divs.append(Divergence(k, t, out_name, av, bv))
                break
    return TraceReport(node, len(traces), divs)


# -- trace files and random traces ----------------------------------------------


def format_value(v: Value) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def parse_value(text: str) -> Value:
    t = text.strip()
    if t == "true":
        return True
    if t == "false":
        return False
    v = int(t)
    if not INT32_MIN <= v <= INT32_MAX:
        raise ValueError(f"{t} does not fit in int32")
    return v


def write_trace(trace: Trace, names: Optional[list[str]] = None) -> str:
    if names is None:
        names = list(trace[0]) if trace else []
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for step in trace:
        w.writerow([format_value(step[n]) for n in names])
    return buf.getvalue()


def read_trace(text: str) -> Trace:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if not rows:
        return []
    names = [n.strip() for n in rows[0]]
    out = []
    for k, r in enumerate(rows[1:], start=2):
        if len(r) != len(names):
            raise ValueError(f"line {k}: expected {len(names)} values, got {len(r)}")
        out.append({n: parse_value(v) for n, v in zip(names, r)})
    return out


def random_trace(inputs, length: int, rng: random.Random) -> Trace:
    """``inputs``: (name, type) pairs; ints are uniform over int32."""
    out = []
    for _ in range(length):
        step = {}
        for name, ty in inputs:
            step[name] = rng.random() < 0.5 if ty == BOOL else rng.randint(INT32_MIN, INT32_MAX)
        out.append(step)
    return out


def random_traces(prog: Program, node: str, count: int, length: int, seed: int) -> list[Trace]:
    rng = random.Random(seed)
    decls = [(d.name, d.type) for d in prog.node(node).inputs]
    return [random_trace(decls, length, rng) for _ in range(count)]
