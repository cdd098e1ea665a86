"""Canonical C layout: structs, then the step/reset functions of each node."""

from __future__ import annotations

from ..ir.clight import (
    C_BOOL, CAssignField, CAssignLocal, CBinop, CCall, CConst, CDecl, CFieldRead, CFun, CIf,
    ClightProgram, CReturn, CSeq, CSkip, CStruct, CUnop, CVar, StructType,
)

C_OPS = {"=": "==", "<>": "!=", "and": "&&", "or": "||", "not": "!"}
# Binding strength of C operators; higher binds tighter.
_LEVEL = {"or": 1, "and": 2, "=": 3, "<>": 3, "<": 4, "<=": 4, ">": 4, ">=": 4,
          "+": 5, "-": 5, "*": 6, "/": 6}
_UNARY = 7

INDENT = "  "


def c_op(op: str) -> str:
    return C_OPS.get(op, op)


def print_cexpr(e, self_name: str, ctx: int = 0) -> str:
    if isinstance(e, CConst):
        return str(e.value)
    if isinstance(e, CVar):
        return e.name
    if isinstance(e, CFieldRead):
        return f"(*{self_name}).{e.field}"
    if isinstance(e, CUnop):
        if e.op == "-" and isinstance(e.arg, CConst):
            inner = f"({e.arg.value})"
        else:
            inner = print_cexpr(e.arg, self_name, _UNARY)
            if e.op == "-" and inner.startswith("-"):
                inner = f"({inner})"
        return _wrap(f"{c_op(e.op)}{inner}", _UNARY, ctx)
    if isinstance(e, CBinop):
        lvl = _LEVEL[e.op]
        left = print_cexpr(e.left, self_name, lvl)
        right = print_cexpr(e.right, self_name, lvl + 1)
        return _wrap(f"{left} {c_op(e.op)} {right}", lvl, ctx)
    raise TypeError(f"not a C expression: {e!r}")


def _wrap(text, lvl, ctx):
    return f"({text})" if lvl < ctx else text


def _ctype(t) -> str:
    return f"struct {t.name}" if isinstance(t, StructType) else t


def _flatten(s) -> list:
    if isinstance(s, CSeq):
        return _flatten(s.first) + _flatten(s.second)
    if isinstance(s, CSkip):
        return []
    return [s]


def _stmt_lines(s, self_name: str, depth: int) -> list[str]:
    pad = INDENT * depth
    ex = lambda e: print_cexpr(e, self_name)  # noqa: E731
    if isinstance(s, CAssignLocal):
        return [f"{pad}{s.target} = {ex(s.expr)};"]
    if isinstance(s, CAssignField):
        return [f"{pad}(*{self_name}).{s.field} = {ex(s.expr)};"]
    if isinstance(s, CCall):
        args = ", ".join([f"&(*{self_name}).{s.instance}"] + [ex(a) for a in s.args])
        call = f"{s.func}({args})"
        return [f"{pad}{s.result} = {call};" if s.result is not None else f"{pad}{call};"]
    if isinstance(s, CReturn):
        return [f"{pad}return {ex(s.value)};" if s.value is not None else f"{pad}return;"]
    if isinstance(s, CIf):
        out = [f"{pad}if ({ex(s.cond)}) {{"]
        out += _block(s.then, self_name, depth + 1)
        out.append(f"{pad}}} else {{")
        out += _block(s.orelse, self_name, depth + 1)
        out.append(f"{pad}}}")
        return out
    if isinstance(s, (CSeq, CSkip)):
        return _block(s, self_name, depth)
    raise TypeError(f"not a C statement: {s!r}")


def _block(s, self_name, depth) -> list[str]:
    return [line for leaf in _flatten(s) for line in _stmt_lines(leaf, self_name, depth)]


def print_struct(s: CStruct) -> str:
    lines = [f"struct {s.name} {{"]
    lines += [f"{INDENT}{_ctype(f.type)} {f.name};" for f in s.fields]
    lines.append("};")
    return "\n".join(lines) + "\n"


def _decl(d: CDecl) -> str:
    return f"{_ctype(d.type)} {d.name}"


def print_fun(f: CFun) -> str:
    params = [f"struct {f.self_struct} *{f.self_name}"] + [_decl(p) for p in f.params]
    ret = f.ret if f.ret is not None else "void"
    lines = [f"{ret} {f.name}({', '.join(params)}) {{"]
    lines += [f"{INDENT}register {_decl(r)};" for r in f.registers]
    lines += _block(f.body, f.self_name, 1)
    lines.append("}")
    return "\n".join(lines) + "\n"


def print_c(c: ClightProgram) -> str:
    return "\n".join([print_struct(s) for s in c.structs] + [print_fun(f) for f in c.functions])


__all__ = ["print_c", "print_cexpr", "print_fun", "print_struct", "c_op", "C_BOOL"]
