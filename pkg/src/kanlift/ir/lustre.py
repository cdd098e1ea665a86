"""Lustre and normalized Lustre (NLustre) syntax trees.

Operators are stored by their Lustre spelling in every IR: ``+ - * /``,
``= <> < <= > >=``, ``and or`` (binary) and ``- not`` (unary).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

INT = "int32"
BOOL = "bool"
TYPES = (INT, BOOL)
BASE_CLOCK = "base"

ARITH_OPS = ("+", "-", "*", "/")
COMPARE_OPS = ("=", "<>", "<", "<=", ">", ">=")
LOGIC_OPS = ("and", "or")
BINOPS = ARITH_OPS + COMPARE_OPS + LOGIC_OPS
UNOPS = ("-", "not")


@dataclass(frozen=True)
class SourceSpan:
    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __str__(self):
        return f"{self.file}:{self.start_line}:{self.start_col}"


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Decl:
    name: str
    type: str
    clock: str = BASE_CLOCK
    span: Optional[SourceSpan] = _span()


# -- expressions (shared by Lustre, NLustre and Stc) --------------------------


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class VarRef:
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Unop:
    op: str
    arg: "Expr"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Binop:
    op: str
    left: "Expr"
    right: "Expr"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Fby:
    init: "Const"
    arg: "Expr"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Call:
    node: str
    args: tuple["Expr", ...]
    span: Optional[SourceSpan] = _span()


Const = Union[IntLit, BoolLit]
SimpleExpr = Union[IntLit, BoolLit, VarRef, Unop, Binop]
Expr = Union[IntLit, BoolLit, VarRef, Unop, Binop, Fby, Call]


@dataclass(frozen=True)
class Equation:
    target: str
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Node:
    name: str
    inputs: tuple[Decl, ...]
    outputs: tuple[Decl, ...]
    locals: tuple[Decl, ...]
    equations: tuple[Equation, ...]
    span: Optional[SourceSpan] = _span()

    def decls(self) -> tuple[Decl, ...]:
        return self.inputs + self.outputs + self.locals


@dataclass(frozen=True)
class Program:
    nodes: tuple[Node, ...]

    def node(self, name: str) -> Node:
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(name)


# -- NLustre ------------------------------------------------------------------


@dataclass(frozen=True)
class NDef:
    target: str
    expr: SimpleExpr


@dataclass(frozen=True)
class NDelay:
    target: str
    init: Const
    expr: SimpleExpr


@dataclass(frozen=True)
class NApp:
    target: str
    node: str
    args: tuple[SimpleExpr, ...]


NEquation = Union[NDef, NDelay, NApp]


@dataclass(frozen=True)
class NNode:
    name: str
    inputs: tuple[Decl, ...]
    outputs: tuple[Decl, ...]
    locals: tuple[Decl, ...]
    equations: tuple[NEquation, ...]

    def decls(self) -> tuple[Decl, ...]:
        return self.inputs + self.outputs + self.locals


@dataclass(frozen=True)
class NProgram:
    nodes: tuple[NNode, ...]

    def node(self, name: str) -> NNode:
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(name)


def expr_vars(e) -> list[str]:
    """Variables read by ``e`` in left-to-right order (with repeats)."""
    out: list[str] = []

    def go(x):
        if isinstance(x, VarRef):
            out.append(x.name)
        elif isinstance(x, Unop):
            go(x.arg)
        elif isinstance(x, Binop):
            go(x.left)
            go(x.right)
        elif isinstance(x, Fby):
            go(x.arg)
        elif isinstance(x, Call):
            for a in x.args:
                go(a)

    go(e)
    return out


def is_simple(e) -> bool:
    if isinstance(e, (IntLit, BoolLit, VarRef)):
        return True
    if isinstance(e, Unop):
        return is_simple(e.arg)
    if isinstance(e, Binop):
        return is_simple(e.left) and is_simple(e.right)
    return False
