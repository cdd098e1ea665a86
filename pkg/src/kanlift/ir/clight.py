"""The canonical C subset: per node one state struct plus step and reset functions.

All state accesses go through the function's self pointer, so field reads
and writes only carry the field name.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

C_INT = "int"
C_BOOL = "_Bool"
SELF = "obc2c$self"
STEP_PREFIX = "fun$step$"
RESET_PREFIX = "fun$reset$"


@dataclass(frozen=True)
class StructType:
    name: str


CType = Union[str, StructType]  # "int" | "_Bool" | StructType


@dataclass(frozen=True)
class CDecl:
    name: str
    type: CType


@dataclass(frozen=True)
class CStruct:
    name: str
    fields: tuple[CDecl, ...]


# -- expressions ----------------------------------------------------------------


@dataclass(frozen=True)
class CConst:
    value: int
    type: str  # "int" | "_Bool"


@dataclass(frozen=True)
class CVar:
    name: str


@dataclass(frozen=True)
class CFieldRead:
    field: str


@dataclass(frozen=True)
class CUnop:
    op: str
    arg: "CExpr"


@dataclass(frozen=True)
class CBinop:
    op: str
    left: "CExpr"
    right: "CExpr"


CExpr = Union[CConst, CVar, CFieldRead, CUnop, CBinop]


# -- statements -----------------------------------------------------------------


@dataclass(frozen=True)
class CAssignLocal:
    target: str
    expr: CExpr


@dataclass(frozen=True)
class CAssignField:
    field: str
    expr: CExpr


@dataclass(frozen=True)
class CCall:
    result: Optional[str]
    func: str
    instance: str
    args: tuple[CExpr, ...]


@dataclass(frozen=True)
class CSeq:
    first: "CStmt"
    second: "CStmt"


@dataclass(frozen=True)
class CSkip:
    pass


@dataclass(frozen=True)
class CIf:
    cond: CExpr
    then: "CStmt"
    orelse: "CStmt"


@dataclass(frozen=True)
class CReturn:
    value: Optional[CExpr]


CStmt = Union[CAssignLocal, CAssignField, CCall, CSeq, CSkip, CIf, CReturn]


@dataclass(frozen=True)
class CFun:
    name: str
    self_name: str
    self_struct: str
    params: tuple[CDecl, ...]
    registers: tuple[CDecl, ...]
    body: CStmt
    ret: Optional[str]  # None for void


@dataclass(frozen=True)
class ClightProgram:
    structs: tuple[CStruct, ...]
    functions: tuple[CFun, ...]

    def struct(self, name: str) -> CStruct:
        for s in self.structs:
            if s.name == name:
                return s
        raise KeyError(name)

    def function(self, name: str) -> CFun:
        for f in self.functions:
            if f.name == name:
                return f
        raise KeyError(name)


def step_name(node: str) -> str:
    return STEP_PREFIX + node


def reset_name(node: str) -> str:
    return RESET_PREFIX + node


def seq_leaves(stmt: CStmt) -> list[CStmt]:
    """Statements along the right spine of a sequence."""
    out = []
    while isinstance(stmt, CSeq):
        out.append(stmt.first)
        stmt = stmt.second
    out.append(stmt)
    return out


def right_chain(stmts) -> CStmt:
    """Right-nested sequence of ``stmts`` with no trailing skip."""
    stmts = list(stmts)
    if not stmts:
        return CSkip()
    out = stmts[-1]
    for s in reversed(stmts[:-1]):
        out = CSeq(s, out)
    return out
