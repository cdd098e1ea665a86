"""Synchronous transition code: registers, instances and ordered transitions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .lustre import Const, Decl, SimpleExpr


@dataclass(frozen=True)
class Register:
    name: str
    init: Const
    type: str


@dataclass(frozen=True)
class Instance:
    name: str
    system: str


@dataclass(frozen=True)
class Define:
    target: str
    expr: SimpleExpr


@dataclass(frozen=True)
class Next:
    register: str
    expr: SimpleExpr


@dataclass(frozen=True)
class StepCall:
    target: str
    instance: str
    args: tuple[SimpleExpr, ...]


Transition = Union[Define, Next, StepCall]


@dataclass(frozen=True)
class StcSystem:
    name: str
    inputs: tuple[Decl, ...]
    outputs: tuple[Decl, ...]
    locals: tuple[Decl, ...]
    registers: tuple[Register, ...]
    instances: tuple[Instance, ...]
    transitions: tuple[Transition, ...]


@dataclass(frozen=True)
class StcProgram:
    systems: tuple[StcSystem, ...]
