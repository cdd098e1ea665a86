"""Object code: one class per node with ``step`` and ``reset`` methods."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .lustre import Binop, BoolLit, Const, Decl, IntLit, Unop, VarRef


@dataclass(frozen=True)
class StateRef:
    name: str


ObcExpr = Union[IntLit, BoolLit, VarRef, StateRef, Unop, Binop]


@dataclass(frozen=True)
class Assign:
    target: str
    expr: ObcExpr


@dataclass(frozen=True)
class AssignState:
    field: str
    expr: ObcExpr


@dataclass(frozen=True)
class MethodCall:
    result: Optional[str]
    instance: str
    method: str  # "step" | "reset"
    args: tuple[ObcExpr, ...]


@dataclass(frozen=True)
class Seq:
    first: "Stmt"
    second: "Stmt"


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class IfThenElse:
    cond: ObcExpr
    then: "Stmt"
    orelse: "Stmt"


Stmt = Union[Assign, AssignState, MethodCall, Seq, Skip, IfThenElse]


@dataclass(frozen=True)
class Memory:
    name: str
    init: Const
    type: str


@dataclass(frozen=True)
class ObcInstance:
    name: str
    cls: str


@dataclass(frozen=True)
class StepMethod:
    params: tuple[Decl, ...]
    result: Decl
    locals: tuple[Decl, ...]
    body: Stmt


@dataclass(frozen=True)
class ResetMethod:
    body: Stmt


@dataclass(frozen=True)
class ObcClass:
    name: str
    memories: tuple[Memory, ...]
    instances: tuple[ObcInstance, ...]
    step: StepMethod
    reset: ResetMethod


@dataclass(frozen=True)
class ObcProgram:
    classes: tuple[ObcClass, ...]


def seq_chain(stmts) -> Stmt:
    """Right-nested, Skip-terminated sequence."""
    out: Stmt = Skip()
    for s in reversed(list(stmts)):
        out = Seq(s, out)
    return out
