"""Equality of programs up to a consistent renaming of node-local names.

Inputs, outputs and node names are fixed; everything else declared inside a
node (locals, registers, memories, instances, struct fields) may be renamed.
Only fields that hold variable names take part, so operators and the names
of called nodes are never confused with variables.
"""

from __future__ import annotations

import dataclasses

from . import clight as C
from . import lustre as L
from . import obc as O
from . import stc as S

# (class, field) pairs whose string values are variable names.
_NAME_FIELDS = {
    (L.Decl, "name"), (L.VarRef, "name"), (L.Equation, "target"),
    (L.NDef, "target"), (L.NDelay, "target"), (L.NApp, "target"),
    (S.Register, "name"), (S.Instance, "name"), (S.Define, "target"), (S.Next, "register"),
    (S.StepCall, "target"), (S.StepCall, "instance"),
    (O.StateRef, "name"), (O.Assign, "target"), (O.AssignState, "field"), (O.MethodCall, "result"),
    (O.MethodCall, "instance"), (O.Memory, "name"), (O.ObcInstance, "name"),
    (C.CDecl, "name"), (C.CVar, "name"), (C.CFieldRead, "field"), (C.CAssignLocal, "target"),
    (C.CAssignField, "field"), (C.CCall, "result"), (C.CCall, "instance"),
}


class _Renamer:
    def __init__(self, fixed: set[str]):
        self.fixed = fixed
        self.map: dict[str, str] = {}

    def name(self, x):
        if x is None or x in self.fixed:
            return x
        if x not in self.map:
            self.map[x] = f"%{len(self.map)}"
        return self.map[x]

    def __call__(self, v):
        if isinstance(v, tuple):
            return tuple(self(x) for x in v)
        if not dataclasses.is_dataclass(v):
            return v
        changes = {}
        for f in dataclasses.fields(v):
            if not f.compare:
                continue
            x = getattr(v, f.name)
            if (type(v), f.name) in _NAME_FIELDS:
                changes[f.name] = self.name(x)
            else:
                changes[f.name] = self(x)
        return dataclasses.replace(v, **changes)


def _returned(s):
    while isinstance(s, C.CSeq):
        s = s.second
    if isinstance(s, C.CReturn) and isinstance(s.value, C.CVar):
        return {s.value.name}
    return set()


def canonical_names(p):
    """``p`` with renameable names replaced by ``%0``, ``%1``... per node."""
    if isinstance(p, (L.Program, L.NProgram)):
        return type(p)(tuple(
            _Renamer({d.name for d in n.inputs + n.outputs})(n) for n in p.nodes))
    if isinstance(p, S.StcProgram):
        return S.StcProgram(tuple(
            _Renamer({d.name for d in s.inputs + s.outputs})(s) for s in p.systems))
    if isinstance(p, O.ObcProgram):
        return O.ObcProgram(tuple(
            _Renamer({d.name for d in c.step.params} | {c.step.result.name})(c) for c in p.classes))
    if isinstance(p, C.ClightProgram):
        renamers: dict[str, _Renamer] = {}
        for f in p.functions:
            fixed = {d.name for d in f.params} | _returned(f.body) | {f.self_name}
            r = renamers.setdefault(f.self_struct, _Renamer(set()))
            r.fixed |= fixed
        structs = tuple(renamers.setdefault(s.name, _Renamer(set()))(s) for s in p.structs)
        funs = tuple(renamers[f.self_struct](f) for f in p.functions)
        return C.ClightProgram(structs, funs)
    raise TypeError(f"not an IR program: {type(p).__name__}")


def alpha_eq(p1, p2) -> bool:
    if type(p1) is not type(p2):
        raise TypeError(f"cannot compare {type(p1).__name__} with {type(p2).__name__}")
    return canonical_names(p1) == canonical_names(p2)
