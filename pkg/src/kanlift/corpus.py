"""Seeded generator of random normal-form Lustre programs.

Generated programs are well typed, free of instantaneous cycles and
scheduled: every read observes the right instant when equations run in list
order. Locals are declared in equation order, matching the compiler's
canonical domain.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .ir.lustre import (
    BOOL, INT, Binop, BoolLit, Call, Decl, Equation, Fby, IntLit, Node, Program, Unop, VarRef,
)


@dataclass(frozen=True)
class CorpusConfig:
    max_nodes: int = 3
    max_equations: int = 6
    max_inputs: int = 3
    max_depth: int = 2


_NAMES = ["x", "y", "acc", "tmp$", "s", "t", "v", "w", "norm$", "k"]


class _Gen:
    def __init__(self, rng: random.Random, cfg: CorpusConfig):
        self.rng = rng
        self.cfg = cfg

    def const(self, ty):
        if ty == BOOL:
            return BoolLit(self.rng.random() < 0.5)
        return IntLit(self.rng.choice([0, 1, 2, -1, 7, 100, self.rng.randint(-1000, 1000),
                                       2**31 - 1, -(2**31)]))

    def expr(self, ty, avail: dict[str, str], depth: int):
        """Random simple expression of type ``ty`` over ``avail`` (name -> type)."""
        rng = self.rng
        vars_ = [v for v, t in avail.items() if t == ty]
        leaf = depth <= 0 or rng.random() < 0.35
        if leaf:
            if vars_ and rng.random() < 0.75:
                return VarRef(rng.choice(vars_))
            return self.const(ty)
        if ty == INT:
            k = rng.random()
            if k < 0.15:
                return Unop("-", self.expr(INT, avail, depth - 1))
            if k < 0.25:
                divisor = rng.choice([1, 2, 3, -5, 7])
                return Binop("/", self.expr(INT, avail, depth - 1), IntLit(divisor))
            op = rng.choice(["+", "-", "*"])
            return Binop(op, self.expr(INT, avail, depth - 1), self.expr(INT, avail, depth - 1))
        k = rng.random()
        if k < 0.2:
            return Unop("not", self.expr(BOOL, avail, depth - 1))
        if k < 0.5:
            return Binop(rng.choice(["and", "or"]), self.expr(BOOL, avail, depth - 1),
                         self.expr(BOOL, avail, depth - 1))
        if k < 0.8:
            op = rng.choice(["=", "<>", "<", "<=", ">", ">="])
            return self._compare(op, INT, avail, depth)
        return self._compare(rng.choice(["=", "<>"]), BOOL, avail, depth)

    def _compare(self, op, ty, avail, depth):
        left = self.expr(ty, avail, depth - 1)
        right = self.expr(ty, avail, depth - 1)
        # Two bare boolean constants compare as ints once printed as C;
        # keep at least one side non-constant.
        if ty == BOOL and isinstance(left, BoolLit) and isinstance(right, BoolLit):
            vars_ = [v for v, t in avail.items() if t == BOOL]
            left = VarRef(self.rng.choice(vars_)) if vars_ else Unop("not", left)
        return Binop(op, left, right)

    def node(self, name: str, callees: list[Node]) -> Node:
        rng, cfg = self.rng, self.cfg
        n_in = rng.randint(0, cfg.max_inputs)
        inputs = [Decl(f"i{k}", rng.choice([INT, INT, BOOL])) for k in range(n_in)]
        out_ty = rng.choice([INT, INT, BOOL])
        out_name = rng.choice(["o", "out", "res"])
        n_eq = rng.randint(1, cfg.max_equations)
        kinds = []
        for _ in range(n_eq):
            r = rng.random()
            kinds.append("app" if callees and r < 0.2 else "delay" if r < 0.55 else "def")
        # The output is defined by a plain equation or a call.
        candidates = [k for k, kind in enumerate(kinds) if kind != "delay"]
        if not candidates:
            kinds[-1] = "def"
            candidates = [n_eq - 1]
        out_pos = rng.choice(candidates)
        used = {d.name for d in inputs} | {out_name}
        targets, types, calls = [], [], []
        for k, kind in enumerate(kinds):
            if kind == "app":
                callee = rng.choice(callees)
                calls.append(callee)
                ty = callee.outputs[0].type
                if k == out_pos:
                    out_ty = ty
            else:
                calls.append(None)
                ty = out_ty if k == out_pos else rng.choice([INT, BOOL])
            if k == out_pos:
                targets.append(out_name)
            else:
                base = rng.choice(_NAMES)
                cand = f"{base}{k}"
                while cand in used:
                    cand += "_"
                used.add(cand)
                targets.append(cand)
            types.append(ty)
        if kinds[out_pos] != "app":
            types[out_pos] = out_ty
        eqs = []
        for k, kind in enumerate(kinds):
            avail = {d.name: d.type for d in inputs}
            for j in range(n_eq):
                if kinds[j] == "delay":
                    # a delay target holds its old value up to its own equation
                    if j >= k:
                        avail[targets[j]] = types[j]
                elif j < k:
                    avail[targets[j]] = types[j]
            if kind == "def":
                e = self.expr(types[k], avail, rng.randint(0, cfg.max_depth))
            elif kind == "delay":
                e = Fby(self.const(types[k]), self.expr(types[k], avail, rng.randint(0, cfg.max_depth)))
            else:
                callee = calls[k]
                e = Call(callee.name, tuple(self.expr(d.type, avail, rng.randint(0, 1)) for d in callee.inputs))
            eqs.append(Equation(targets[k], e))
        locals_ = tuple(Decl(t, ty) for t, ty in zip(targets, types) if t != out_name)
        return Node(name, tuple(inputs), (Decl(out_name, out_ty),), locals_, tuple(eqs))


def random_program(seed: int, cfg: CorpusConfig = CorpusConfig()) -> Program:
    rng = random.Random(seed)
    g = _Gen(rng, cfg)
    nodes: list[Node] = []
    for k in range(rng.randint(1, cfg.max_nodes)):
        nodes.append(g.node(f"n{k}", list(nodes)))
    return Program(tuple(nodes))


def corpus(count: int, seed: int = 0, cfg: CorpusConfig = CorpusConfig()) -> list[Program]:
    return [random_program(seed * 1_000_003 + k, cfg) for k in range(count)]
