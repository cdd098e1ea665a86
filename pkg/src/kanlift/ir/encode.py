"""Encoding of IR programs as relational terms, and the inverse.

Every IR has its own root tag (``lustre``, ``nlustre``, ``stc``, ``obc``,
``clight``) so a term names the IR it belongs to. Lists are cons-lists.
C function names following the ``fun$<method>$<node>`` scheme are encoded
structurally so relations can relate them to node names.
"""

from __future__ import annotations

from ..relcore.terms import NIL, INT64_MAX, INT64_MIN, Reified, Var, from_list
from . import clight as C
from . import lustre as L
from . import obc as O
from . import stc as S


class DecodeError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '<root>'}: {message}")
        self.path = path or "<root>"
        self.message = message


# -- encoding -----------------------------------------------------------------


def _list(items, enc):
    return from_list([enc(x) for x in items])


def _decl(d: L.Decl):
    return ("decl", d.name, d.type, d.clock)


def _const(c):
    if isinstance(c, L.BoolLit):
        return ("bool", "true" if c.value else "false")
    if isinstance(c, L.IntLit):
        return ("int", c.value)
    raise TypeError(f"not a constant: {c!r}")


def _expr(e):
    if isinstance(e, (L.IntLit, L.BoolLit)):
        return _const(e)
    if isinstance(e, L.VarRef):
        return ("var", e.name)
    if isinstance(e, O.StateRef):
        return ("state", e.name)
    if isinstance(e, L.Unop):
        return ("unop", e.op, _expr(e.arg))
    if isinstance(e, L.Binop):
        return ("binop", e.op, _expr(e.left), _expr(e.right))
    if isinstance(e, L.Fby):
        return ("fby", _const(e.init), _expr(e.arg))
    if isinstance(e, L.Call):
        return ("call", e.node, _list(e.args, _expr))
    raise TypeError(f"not an expression: {e!r}")


def _lustre_node(n: L.Node):
    return (
        "node", n.name, _list(n.inputs, _decl), _list(n.outputs, _decl), _list(n.locals, _decl),
        _list(n.equations, lambda q: ("eq", q.target, _expr(q.expr))),
    )


def _neq(q):
    if isinstance(q, L.NDef):
        return ("def", q.target, _expr(q.expr))
    if isinstance(q, L.NDelay):
        return ("delay", q.target, _const(q.init), _expr(q.expr))
    if isinstance(q, L.NApp):
        return ("app", q.target, q.node, _list(q.args, _expr))
    raise TypeError(f"not an NLustre equation: {q!r}")


def _nnode(n: L.NNode):
    return (
        "nnode", n.name, _list(n.inputs, _decl), _list(n.outputs, _decl), _list(n.locals, _decl),
        _list(n.equations, _neq),
    )


def _trans(t):
    if isinstance(t, S.Define):
        return ("define", t.target, _expr(t.expr))
    if isinstance(t, S.Next):
        return ("next", t.register, _expr(t.expr))
    if isinstance(t, S.StepCall):
        return ("stepcall", t.target, t.instance, _list(t.args, _expr))
    raise TypeError(f"not a transition: {t!r}")


def _system(s: S.StcSystem):
    return (
        "system", s.name, _list(s.inputs, _decl), _list(s.outputs, _decl), _list(s.locals, _decl),
        _list(s.registers, lambda r: ("reg", r.name, _const(r.init), r.type)),
        _list(s.instances, lambda i: ("inst", i.name, i.system)),
        _list(s.transitions, _trans),
    )


def _opt(x, enc=lambda v: v):
    return "none" if x is None else ("some", enc(x))


def _stmt(s):
    if isinstance(s, O.Assign):
        return ("assign", s.target, _expr(s.expr))
    if isinstance(s, O.AssignState):
        return ("assignst", s.field, _expr(s.expr))
    if isinstance(s, O.MethodCall):
        return ("mcall", _opt(s.result), s.instance, s.method, _list(s.args, _expr))
    if isinstance(s, O.Seq):
        return ("seq", _stmt(s.first), _stmt(s.second))
    if isinstance(s, O.Skip):
        return "skip"
    if isinstance(s, O.IfThenElse):
        return ("ite", _expr(s.cond), _stmt(s.then), _stmt(s.orelse))
    raise TypeError(f"not an Obc statement: {s!r}")


def _class(c: O.ObcClass):
    st = c.step
    return (
        "class", c.name,
        _list(c.memories, lambda m: ("mem", m.name, _const(m.init), m.type)),
        _list(c.instances, lambda i: ("inst", i.name, i.cls)),
        ("step", _list(st.params, _decl), _decl(st.result), _list(st.locals, _decl), _stmt(st.body)),
        ("reset", _stmt(c.reset.body)),
    )


def encode_fname(name: str):
    for method, prefix in (("step", C.STEP_PREFIX), ("reset", C.RESET_PREFIX)):
        if name.startswith(prefix) and len(name) > len(prefix):
            return ("fname", method, name[len(prefix):])
    return name


def _ctype(t):
    if isinstance(t, C.StructType):
        return ("structty", t.name)
    return t


def _cdecl(d: C.CDecl):
    return ("cdecl", d.name, _ctype(d.type))


def _cexpr(e):
    if isinstance(e, C.CConst):
        return ("cconst", e.value, e.type)
    if isinstance(e, C.CVar):
        return ("cvar", e.name)
    if isinstance(e, C.CFieldRead):
        return ("cfield", e.field)
    if isinstance(e, C.CUnop):
        return ("cunop", e.op, _cexpr(e.arg))
    if isinstance(e, C.CBinop):
        return ("cbinop", e.op, _cexpr(e.left), _cexpr(e.right))
    raise TypeError(f"not a C expression: {e!r}")


def _cstmt(s):
    if isinstance(s, C.CAssignLocal):
        return ("cassign", s.target, _cexpr(s.expr))
    if isinstance(s, C.CAssignField):
        return ("cassignf", s.field, _cexpr(s.expr))
    if isinstance(s, C.CCall):
        return ("ccall", _opt(s.result), encode_fname(s.func), s.instance, _list(s.args, _cexpr))
    if isinstance(s, C.CSeq):
        return ("cseq", _cstmt(s.first), _cstmt(s.second))
    if isinstance(s, C.CSkip):
        return "cskip"
    if isinstance(s, C.CIf):
        return ("cif", _cexpr(s.cond), _cstmt(s.then), _cstmt(s.orelse))
    if isinstance(s, C.CReturn):
        return ("creturn", _opt(s.value, _cexpr))
    raise TypeError(f"not a C statement: {s!r}")


def _cfun(f: C.CFun):
    return (
        "fun", encode_fname(f.name), f.self_name, f.self_struct,
        _list(f.params, _cdecl), _list(f.registers, _cdecl), _cstmt(f.body),
        "void" if f.ret is None else f.ret,
    )


def encode(p):
    """Encode any IR program as a ground term."""
    if isinstance(p, L.Program):
        return ("lustre", _list(p.nodes, _lustre_node))
    if isinstance(p, L.NProgram):
        return ("nlustre", _list(p.nodes, _nnode))
    if isinstance(p, S.StcProgram):
        return ("stc", _list(p.systems, _system))
    if isinstance(p, O.ObcProgram):
        return ("obc", _list(p.classes, _class))
    if isinstance(p, C.ClightProgram):
        return (
            "clight",
            _list(p.structs, lambda s: ("struct", s.name, _list(s.fields, _cdecl))),
            _list(p.functions, _cfun),
        )
    raise TypeError(f"not an IR program: {type(p).__name__}")


# -- decoding -----------------------------------------------------------------


def _fail(path, msg):
    raise DecodeError(path, msg)


def _shape(t, tag, arity, path):
    if type(t) is Var or type(t) is Reified:
        _fail(path, "term is not ground")
    if type(t) is not tuple or t[0] != tag or len(t) != arity + 1:
        _fail(path, f"expected {tag}/{arity}, got {_describe(t)}")
    return t[1:]


def _describe(t):
    if type(t) is tuple:
        return f"{t[0]}/{len(t) - 1}"
    return repr(t)


def _str(t, path):
    if type(t) is not str:
        _fail(path, f"expected an atom, got {_describe(t)}")
    return t


def _int(t, path):
    if type(t) is not int or not INT64_MIN <= t <= INT64_MAX:
        _fail(path, f"expected an integer, got {_describe(t)}")
    return t


def _dlist(t, path, dec):
    out = []
    i = 0
    while type(t) is tuple and t[0] == "cons" and len(t) == 3:
        out.append(dec(t[1], f"{path}[{i}]"))
        t = t[2]
        i += 1
    if t != NIL:
        _fail(f"{path}[{i}:]", f"expected a list, got {_describe(t)}")
    return tuple(out)


def _dtype(t, path):
    ty = _str(t, path)
    if ty not in L.TYPES:
        _fail(path, f"unknown type {ty!r}")
    return ty


def _ddecl(t, path):
    name, ty, ck = _shape(t, "decl", 3, path)
    return L.Decl(_str(name, path + ".name"), _dtype(ty, path + ".type"), _str(ck, path + ".clock"))


def _dconst(t, path):
    if type(t) is tuple and t and t[0] == "bool":
        (v,) = _shape(t, "bool", 1, path)
        if v not in ("true", "false"):
            _fail(path, f"bad boolean {v!r}")
        return L.BoolLit(v == "true")
    (v,) = _shape(t, "int", 1, path)
    return L.IntLit(_int(v, path))


def _make_dexpr(extra):
    def dec(t, path):
        if type(t) is not tuple or not t:
            _fail(path, f"expected an expression, got {_describe(t)}")
        tag = t[0]
        if tag in ("int", "bool"):
            return _dconst(t, path)
        if tag == "var":
            (x,) = _shape(t, "var", 1, path)
            return L.VarRef(_str(x, path))
        if tag == "unop":
            op, a = _shape(t, "unop", 2, path)
            op = _str(op, path + ".op")
            if op not in L.UNOPS:
                _fail(path, f"unknown unary operator {op!r}")
            return L.Unop(op, dec(a, path + ".arg"))
        if tag == "binop":
            op, a, b = _shape(t, "binop", 3, path)
            op = _str(op, path + ".op")
            if op not in L.BINOPS:
                _fail(path, f"unknown binary operator {op!r}")
            return L.Binop(op, dec(a, path + ".left"), dec(b, path + ".right"))
        if tag in extra:
            return extra[tag](t, path, dec)
        _fail(path, f"unexpected expression tag {tag!r}")

    return dec


def _dfby(t, path, dec):
    c, e = _shape(t, "fby", 2, path)
    return L.Fby(_dconst(c, path + ".init"), dec(e, path + ".arg"))


def _dcall(t, path, dec):
    f, args = _shape(t, "call", 2, path)
    return L.Call(_str(f, path + ".node"), _dlist(args, path + ".args", dec))


def _dstate(t, path, dec):
    (x,) = _shape(t, "state", 1, path)
    return O.StateRef(_str(x, path))


_lexpr = _make_dexpr({"fby": _dfby, "call": _dcall})
_sexpr = _make_dexpr({})
_oexpr = _make_dexpr({"state": _dstate})


def _dlustre_node(t, path):
    name, ins, outs, locs, eqs = _shape(t, "node", 5, path)

    def deq(q, p):
        x, e = _shape(q, "eq", 2, p)
        return L.Equation(_str(x, p + ".target"), _lexpr(e, p + ".expr"))

    return L.Node(
        _str(name, path + ".name"), _dlist(ins, path + ".inputs", _ddecl), _dlist(outs, path + ".outputs", _ddecl),
        _dlist(locs, path + ".locals", _ddecl), _dlist(eqs, path + ".equations", deq),
    )


def _dneq(t, path):
    tag = t[0] if type(t) is tuple and t else None
    if tag == "def":
        x, e = _shape(t, "def", 2, path)
        return L.NDef(_str(x, path + ".target"), _sexpr(e, path + ".expr"))
    if tag == "delay":
        x, c, e = _shape(t, "delay", 3, path)
        return L.NDelay(_str(x, path + ".target"), _dconst(c, path + ".init"), _sexpr(e, path + ".expr"))
    if tag == "app":
        x, f, args = _shape(t, "app", 3, path)
        return L.NApp(_str(x, path + ".target"), _str(f, path + ".node"), _dlist(args, path + ".args", _sexpr))
    _fail(path, f"expected an NLustre equation, got {_describe(t)}")


def _dnnode(t, path):
    name, ins, outs, locs, eqs = _shape(t, "nnode", 5, path)
    return L.NNode(
        _str(name, path + ".name"), _dlist(ins, path + ".inputs", _ddecl), _dlist(outs, path + ".outputs", _ddecl),
        _dlist(locs, path + ".locals", _ddecl), _dlist(eqs, path + ".equations", _dneq),
    )


def _dtrans(t, path):
    tag = t[0] if type(t) is tuple and t else None
    if tag == "define":
        x, e = _shape(t, "define", 2, path)
        return S.Define(_str(x, path + ".target"), _sexpr(e, path + ".expr"))
    if tag == "next":
        x, e = _shape(t, "next", 2, path)
        return S.Next(_str(x, path + ".register"), _sexpr(e, path + ".expr"))
    if tag == "stepcall":
        x, i, args = _shape(t, "stepcall", 3, path)
        return S.StepCall(_str(x, path + ".target"), _str(i, path + ".instance"), _dlist(args, path + ".args", _sexpr))
    _fail(path, f"expected a transition, got {_describe(t)}")


def _dreg(t, path):
    x, c, ty = _shape(t, "reg", 3, path)
    return S.Register(_str(x, path + ".name"), _dconst(c, path + ".init"), _dtype(ty, path + ".type"))


def _dsystem(t, path):
    name, ins, outs, locs, regs, insts, trans = _shape(t, "system", 7, path)

    def dinst(x, p):
        n, s = _shape(x, "inst", 2, p)
        return S.Instance(_str(n, p + ".name"), _str(s, p + ".system"))

    return S.StcSystem(
        _str(name, path + ".name"), _dlist(ins, path + ".inputs", _ddecl), _dlist(outs, path + ".outputs", _ddecl),
        _dlist(locs, path + ".locals", _ddecl), _dlist(regs, path + ".registers", _dreg),
        _dlist(insts, path + ".instances", dinst), _dlist(trans, path + ".transitions", _dtrans),
    )


def _dopt(t, path, dec):
    if t == "none":
        return None
    (x,) = _shape(t, "some", 1, path)
    return dec(x, path)


def _dstmt(t, path):
    if t == "skip":
        return O.Skip()
    tag = t[0] if type(t) is tuple and t else None
    if tag == "assign":
        x, e = _shape(t, "assign", 2, path)
        return O.Assign(_str(x, path + ".target"), _oexpr(e, path + ".expr"))
    if tag == "assignst":
        x, e = _shape(t, "assignst", 2, path)
        return O.AssignState(_str(x, path + ".field"), _oexpr(e, path + ".expr"))
    if tag == "mcall":
        r, i, m, args = _shape(t, "mcall", 4, path)
        m = _str(m, path + ".method")
        if m not in ("step", "reset"):
            _fail(path + ".method", f"unknown method {m!r}")
        return O.MethodCall(_dopt(r, path + ".result", _str), _str(i, path + ".instance"), m,
                            _dlist(args, path + ".args", _oexpr))
    if tag == "seq":
        a, b = _shape(t, "seq", 2, path)
        return O.Seq(_dstmt(a, path + ".first"), _dstmt(b, path + ".second"))
    if tag == "ite":
        c, a, b = _shape(t, "ite", 3, path)
        return O.IfThenElse(_oexpr(c, path + ".cond"), _dstmt(a, path + ".then"), _dstmt(b, path + ".orelse"))
    _fail(path, f"expected an Obc statement, got {_describe(t)}")


def _dclass(t, path):
    name, mems, insts, step, reset = _shape(t, "class", 5, path)

    def dmem(x, p):
        n, c, ty = _shape(x, "mem", 3, p)
        return O.Memory(_str(n, p + ".name"), _dconst(c, p + ".init"), _dtype(ty, p + ".type"))

    def dinst(x, p):
        n, c = _shape(x, "inst", 2, p)
        return O.ObcInstance(_str(n, p + ".name"), _str(c, p + ".cls"))

    params, result, locs, body = _shape(step, "step", 4, path + ".step")
    (rbody,) = _shape(reset, "reset", 1, path + ".reset")
    return O.ObcClass(
        _str(name, path + ".name"), _dlist(mems, path + ".memories", dmem), _dlist(insts, path + ".instances", dinst),
        O.StepMethod(
            _dlist(params, path + ".step.params", _ddecl), _ddecl(result, path + ".step.result"),
            _dlist(locs, path + ".step.locals", _ddecl), _dstmt(body, path + ".step.body"),
        ),
        O.ResetMethod(_dstmt(rbody, path + ".reset.body")),
    )


def _dfname(t, path):
    if type(t) is tuple and t and t[0] == "fname":
        m, n = _shape(t, "fname", 2, path)
        m = _str(m, path)
        if m not in ("step", "reset"):
            _fail(path, f"unknown method {m!r}")
        return f"fun${m}${_str(n, path)}"
    return _str(t, path)


def _dctype(t, path, allow_struct=True):
    if type(t) is tuple and t and t[0] == "structty" and allow_struct:
        (n,) = _shape(t, "structty", 1, path)
        return C.StructType(_str(n, path))
    ty = _str(t, path)
    if ty not in (C.C_INT, C.C_BOOL):
        _fail(path, f"unknown C type {ty!r}")
    return ty


def _dcdecl(t, path):
    n, ty = _shape(t, "cdecl", 2, path)
    return C.CDecl(_str(n, path + ".name"), _dctype(ty, path + ".type"))


def _dcexpr(t, path):
    tag = t[0] if type(t) is tuple and t else None
    if tag == "cconst":
        v, ty = _shape(t, "cconst", 2, path)
        return C.CConst(_int(v, path), _dctype(ty, path, allow_struct=False))
    if tag == "cvar":
        (x,) = _shape(t, "cvar", 1, path)
        return C.CVar(_str(x, path))
    if tag == "cfield":
        (x,) = _shape(t, "cfield", 1, path)
        return C.CFieldRead(_str(x, path))
    if tag == "cunop":
        op, a = _shape(t, "cunop", 2, path)
        return C.CUnop(_str(op, path + ".op"), _dcexpr(a, path + ".arg"))
    if tag == "cbinop":
        op, a, b = _shape(t, "cbinop", 3, path)
        return C.CBinop(_str(op, path + ".op"), _dcexpr(a, path + ".left"), _dcexpr(b, path + ".right"))
    _fail(path, f"expected a C expression, got {_describe(t)}")


def _dcstmt(t, path):
    if t == "cskip":
        return C.CSkip()
    tag = t[0] if type(t) is tuple and t else None
    if tag == "cassign":
        x, e = _shape(t, "cassign", 2, path)
        return C.CAssignLocal(_str(x, path + ".target"), _dcexpr(e, path + ".expr"))
    if tag == "cassignf":
        x, e = _shape(t, "cassignf", 2, path)
        return C.CAssignField(_str(x, path + ".field"), _dcexpr(e, path + ".expr"))
    if tag == "ccall":
        r, f, i, args = _shape(t, "ccall", 4, path)
        return C.CCall(_dopt(r, path + ".result", _str), _dfname(f, path + ".func"), _str(i, path + ".instance"),
                       _dlist(args, path + ".args", _dcexpr))
    if tag == "cseq":
        a, b = _shape(t, "cseq", 2, path)
        return C.CSeq(_dcstmt(a, path + ".first"), _dcstmt(b, path + ".second"))
    if tag == "cif":
        c, a, b = _shape(t, "cif", 3, path)
        return C.CIf(_dcexpr(c, path + ".cond"), _dcstmt(a, path + ".then"), _dcstmt(b, path + ".orelse"))
    if tag == "creturn":
        (v,) = _shape(t, "creturn", 1, path)
        return C.CReturn(_dopt(v, path + ".value", _dcexpr))
    _fail(path, f"expected a C statement, got {_describe(t)}")


def _dcfun(t, path):
    name, self_name, self_struct, params, regs, body, ret = _shape(t, "fun", 7, path)
    ret = _str(ret, path + ".ret")
    return C.CFun(
        _dfname(name, path + ".name"), _str(self_name, path + ".self_name"), _str(self_struct, path + ".self_struct"),
        _dlist(params, path + ".params", _dcdecl), _dlist(regs, path + ".registers", _dcdecl),
        _dcstmt(body, path + ".body"), None if ret == "void" else _dctype(ret, path + ".ret", allow_struct=False),
    )


def _dstruct(t, path):
    name, fields = _shape(t, "struct", 2, path)
    return C.CStruct(_str(name, path + ".name"), _dlist(fields, path + ".fields", _dcdecl))


def decode_lustre(t) -> L.Program:
    (nodes,) = _shape(t, "lustre", 1, "")
    return L.Program(_dlist(nodes, "nodes", _dlustre_node))


def decode_nlustre(t) -> L.NProgram:
    (nodes,) = _shape(t, "nlustre", 1, "")
    return L.NProgram(_dlist(nodes, "nodes", _dnnode))


def decode_stc(t) -> S.StcProgram:
    (systems,) = _shape(t, "stc", 1, "")
    return S.StcProgram(_dlist(systems, "systems", _dsystem))


def decode_obc(t) -> O.ObcProgram:
    (classes,) = _shape(t, "obc", 1, "")
    return O.ObcProgram(_dlist(classes, "classes", _dclass))


def decode_clight(t) -> C.ClightProgram:
    structs, funs = _shape(t, "clight", 2, "")
    return C.ClightProgram(_dlist(structs, "structs", _dstruct), _dlist(funs, "functions", _dcfun))


_DECODERS = {
    "lustre": decode_lustre,
    "nlustre": decode_nlustre,
    "stc": decode_stc,
    "obc": decode_obc,
    "clight": decode_clight,
}


def decode(t, kind: str | None = None):
    """Decode a ground term; ``kind`` pins the expected IR (root tag)."""
    if kind is not None:
        if kind not in _DECODERS:
            raise ValueError(f"unknown IR kind {kind!r}")
        return _DECODERS[kind](t)
    if type(t) is tuple and t and t[0] in _DECODERS:
        return _DECODERS[t[0]](t)
    _fail("", f"not an IR program term: {_describe(t)}")
