"""Recursive-descent parser for mini-Lustre."""

from __future__ import annotations

from ..ir.lustre import (
    BOOL, INT, Binop, BoolLit, Call, Decl, Equation, Fby, IntLit, Node, Program, Unop, VarRef,
)
from .diagnostics import error
from .lexer import Lexer, TokenStream, join

PHASE = "parse-lustre"
INT32_MIN, INT32_MAX = -(2**31), 2**31 - 1

KEYWORDS = frozenset({
    "node", "returns", "var", "let", "tel", "fby", "and", "or", "not",
    "true", "false", "int", "int32", "bool",
})
TYPE_NAMES = {"int": INT, "int32": INT, "bool": BOOL}
COMPARE = ("=", "<>", "<=", ">=", "<", ">")

_lexer = Lexer("--", False, ["(", ")", ":", ";", ",", "=", "<>", "<=", ">=", "<", ">", "+", "-", "*", "/"], PHASE)


def parse_lustre(text: str, file: str = "<input>") -> Program:
    p = _Parser(TokenStream(_lexer.tokenize(text, file), PHASE))
    return p.program()


def parse_expr(text: str) -> object:
    p = _Parser(TokenStream(_lexer.tokenize(text), PHASE))
    e = p.expr()
    if p.ts.tok.kind != "eof":
        p.ts.fail("expected end of expression")
    return e


class _Parser:
    def __init__(self, ts: TokenStream):
        self.ts = ts

    def program(self) -> Program:
        nodes = []
        seen = {}
        while self.ts.tok.kind != "eof":
            n = self.node()
            if n.name in seen:
                raise error(PHASE, f"duplicate node name '{n.name}'", n.span)
            seen[n.name] = n
            nodes.append(n)
        if not nodes:
            self.ts.fail("expected 'node'")
        return Program(tuple(nodes))

    def node(self) -> Node:
        start = self.ts.expect("node").span
        name = self.ts.ident(KEYWORDS).text
        self.ts.expect("(")
        inputs = self.params()
        self.ts.expect(")")
        self.ts.expect("returns")
        self.ts.expect("(")
        outputs = self.params()
        self.ts.expect(")")
        locals_ = []
        if self.ts.accept("var"):
            locals_.append(self.decl_group(";"))
            while self.ts.tok.kind == "id" and self.ts.tok.text not in KEYWORDS:
                locals_.append(self.decl_group(";"))
        self.ts.expect("let")
        eqs = []
        while not self.ts.at("tel"):
            eqs.append(self.equation())
        end = self.ts.expect("tel").span
        self.ts.accept(";")
        return Node(name, tuple(inputs), tuple(outputs), tuple(d for g in locals_ for d in g), tuple(eqs),
                    join(start, end))

    def params(self) -> list[Decl]:
        out: list[Decl] = []
        if self.ts.at(")"):
            return out
        out += self.decl_group(None)
        while self.ts.accept(";"):
            if self.ts.at(")"):
                break
            out += self.decl_group(None)
        return out

    def decl_group(self, terminator) -> list[Decl]:
        names = [self.ts.ident(KEYWORDS)]
        while self.ts.accept(","):
            names.append(self.ts.ident(KEYWORDS))
        self.ts.expect(":")
        ty_tok = self.ts.tok
        if ty_tok.text not in TYPE_NAMES:
            self.ts.fail("expected a type (int, int32 or bool)")
        self.ts.advance()
        if terminator:
            self.ts.expect(terminator)
        return [Decl(t.text, TYPE_NAMES[ty_tok.text], span=join(t.span, ty_tok.span)) for t in names]

    def equation(self) -> Equation:
        target = self.ts.ident(KEYWORDS)
        self.ts.expect("=")
        e = self.expr()
        end = self.ts.expect(";").span
        return Equation(target.text, e, join(target.span, end))

    # -- expressions, lowest precedence first --------------------------------

    def expr(self):
        return self._left_assoc(self.and_expr, ("or",))

    def and_expr(self):
        return self._left_assoc(self.comparison, ("and",))

    def comparison(self):
        left = self.additive()
        for op in COMPARE:
            if self.ts.at(op):
                self.ts.advance()
                right = self.additive()
                return Binop(op, left, right, join(left.span, right.span))
        return left

    def additive(self):
        return self._left_assoc(self.multiplicative, ("+", "-"))

    def multiplicative(self):
        return self._left_assoc(self.unary, ("*", "/"))

    def _left_assoc(self, sub, ops):
        left = sub()
        while self.ts.tok.text in ops and self.ts.tok.kind in ("op", "id"):
            op = self.ts.advance().text
            right = sub()
            left = Binop(op, left, right, join(left.span, right.span))
        return left

    def unary(self):
        t = self.ts.tok
        if self.ts.at("-") and self.ts.peek().kind == "int":
            self.ts.advance()
            lit_tok = self.ts.advance()
            lit = IntLit(self._int(-int(lit_tok.text), lit_tok), join(t.span, lit_tok.span))
            return self._maybe_fby(lit)
        if self.ts.at("-") or self.ts.at("not"):
            self.ts.advance()
            arg = self.unary()
            return Unop(t.text, arg, join(t.span, arg.span))
        return self.primary()

    def primary(self):
        t = self.ts.tok
        if t.kind == "int":
            self.ts.advance()
            return self._maybe_fby(IntLit(self._int(int(t.text), t), t.span))
        if self.ts.at("true") or self.ts.at("false"):
            self.ts.advance()
            return self._maybe_fby(BoolLit(t.text == "true", t.span))
        if self.ts.accept("("):
            e = self.expr()
            self.ts.expect(")")
            return self._no_fby(e)
        if t.kind == "id" and t.text not in KEYWORDS:
            self.ts.advance()
            if self.ts.accept("("):
                args = []
                if not self.ts.at(")"):
                    args.append(self.expr())
                    while self.ts.accept(","):
                        args.append(self.expr())
                end = self.ts.expect(")").span
                return self._no_fby(Call(t.text, tuple(args), join(t.span, end)))
            return self._no_fby(VarRef(t.text, t.span))
        self.ts.fail("expected expression")

    def _no_fby(self, e):
        if self.ts.at("fby"):
            raise error(PHASE, "the left operand of 'fby' must be a literal constant", e.span)
        return e

    def _maybe_fby(self, lit):
        if not self.ts.accept("fby"):
            return lit
        arg = self.comparison()
        return Fby(lit, arg, join(lit.span, arg.span))

    def _int(self, v: int, tok) -> int:
        if not INT32_MIN <= v <= INT32_MAX:
            raise error(PHASE, f"integer literal {v} does not fit in int32", tok.span)
        return v
