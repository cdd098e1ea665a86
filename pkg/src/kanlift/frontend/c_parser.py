"""Parser for the canonical C subset.

The accepted language is C-like rather than ISO C: identifiers may contain
``$``. Anything outside the subset (loops, globals, pointer arithmetic and
so on) is rejected with a diagnostic naming the construct.

Integer literals are untyped in the source; after parsing, each constant
takes the type its context demands (``_Bool`` under logical operators, when
assigned to or compared with a ``_Bool``, and so on), ``int`` otherwise.
"""

from __future__ import annotations

from ..ir.clight import (
    C_BOOL, C_INT, CAssignField, CAssignLocal, CBinop, CCall, CConst, CDecl, CFieldRead, CFun, CIf,
    ClightProgram, CReturn, CSeq, CSkip, CStruct, CUnop, CVar, StructType, right_chain,
)
from .diagnostics import error
from .lexer import Lexer, Token, TokenStream

PHASE = "parse-c"

_OPS = [
    "->", "++", "--", "+=", "-=", "*=", "/=", "%=", "&&", "||", "==", "!=", "<=", ">=", "<<", ">>",
    "{", "}", "(", ")", "[", "]", ";", ",", ".", "*", "/", "%", "+", "-", "=", "<", ">", "!", "&",
    "|", "^", "~", "?", ":", "#",
]
_lexer = Lexer("//", True, _OPS, PHASE)

_LOOPS = {"while": "while loop", "for": "for loop", "do": "do-while loop"}
_UNSUPPORTED_STMT = {
    **_LOOPS, "switch": "switch statement", "case": "switch statement", "default": "switch statement",
    "goto": "goto", "break": "break statement", "continue": "continue statement",
}
_UNSUPPORTED_TYPES = {"char", "short", "long", "float", "double", "unsigned", "signed", "const",
                      "static", "extern", "volatile", "union", "enum", "typedef", "bool"}
_UNSUPPORTED_OPS = {
    "->": None, "++": "increment operator", "--": "decrement operator", "+=": "compound assignment",
    "-=": "compound assignment", "*=": "compound assignment", "/=": "compound assignment",
    "%=": "compound assignment", "[": "array indexing", "%": "modulo operator", "<<": "shift operator",
    ">>": "shift operator", "|": "bitwise operator", "^": "bitwise operator", "~": "bitwise operator",
    "?": "conditional expression", "&": "address-of operator", "*": None,
}
SCALARS = (C_INT, C_BOOL)
KEYWORDS = frozenset({"struct", "int", "_Bool", "void", "register", "return", "if", "else"}) \
    | frozenset(_UNSUPPORTED_STMT) | _UNSUPPORTED_TYPES

_BINARY_LEVELS = [
    [("||", "or")],
    [("&&", "and")],
    [("==", "="), ("!=", "<>")],
    [("<=", "<="), (">=", ">="), ("<", "<"), (">", ">")],
    [("+", "+"), ("-", "-")],
    [("*", "*"), ("/", "/")],
]


def unsupported(what: str, tok: Token):
    raise error(PHASE, f"not in canonical subset: {what}", tok.span)


def parse_c(text: str, file: str = "<input>") -> ClightProgram:
    toks = _lexer.tokenize(text, file)
    for t in toks:
        if t.kind == "op" and t.text == "#":
            unsupported("preprocessor directive", t)
    p = _Parser(TokenStream(toks, PHASE))
    structs, funs = p.unit()
    return _Typer(structs, funs).program()


class _Parser:
    def __init__(self, ts: TokenStream):
        self.ts = ts
        self.self_name = None

    def unit(self):
        structs: list[CStruct] = []
        funs: list[CFun] = []
        while self.ts.tok.kind != "eof":
            t = self.ts.tok
            if t.kind == "id" and t.text in _UNSUPPORTED_STMT:
                unsupported(f"{_UNSUPPORTED_STMT[t.text]} outside a function", t)
            if self.ts.at("struct") and self.ts.peek(2).text == "{":
                structs.append(self.struct())
            else:
                funs.append(self.function())
        if not structs and not funs:
            self.ts.fail("expected a struct or function definition")
        for kind, items in (("struct", structs), ("function", funs)):
            names = [x.name for x in items]
            for n in names:
                if names.count(n) > 1:
                    raise error(PHASE, f"duplicate {kind} '{n}'")
        return structs, funs

    def ident(self) -> Token:
        t = self.ts.tok
        if t.kind == "id" and t.text in _UNSUPPORTED_STMT:
            unsupported(_UNSUPPORTED_STMT[t.text], t)
        return self.ts.ident(KEYWORDS)

    def type_(self, allow_void=False, allow_struct=True):
        t = self.ts.tok
        if t.text in ("int", "_Bool") and t.kind == "id":
            self.ts.advance()
            return t.text
        if allow_void and self.ts.at("void"):
            self.ts.advance()
            return None
        if allow_struct and self.ts.at("struct"):
            self.ts.advance()
            return StructType(self.ident().text)
        if t.kind == "id" and t.text in _UNSUPPORTED_TYPES:
            unsupported(f"type or qualifier '{t.text}'", t)
        self.ts.fail("expected a type")

    def struct(self) -> CStruct:
        self.ts.expect("struct")
        name = self.ident().text
        self.ts.expect("{")
        fields = []
        while not self.ts.at("}"):
            ty = self.type_()
            if self.ts.at("*"):
                unsupported("pointer field", self.ts.tok)
            fields.append(CDecl(self.ident().text, ty))
            if self.ts.at("["):
                unsupported("array", self.ts.tok)
            self.ts.expect(";")
        self.ts.expect("}")
        self.ts.expect(";")
        return CStruct(name, tuple(fields))

    def function(self) -> CFun:
        start = self.ts.tok
        ret = self.type_(allow_void=True)
        name = self.ident()
        if not self.ts.at("("):
            unsupported("global variable", start)
        self.ts.expect("(")
        if not self.ts.at("struct"):
            self.ts.fail("expected the state pointer 'struct <name> *<self>' as first parameter")
        self.ts.advance()
        self_struct = self.ident().text
        self.ts.expect("*")
        self.self_name = self.ident().text
        params = []
        while self.ts.accept(","):
            ty = self.type_(allow_struct=False)
            if self.ts.at("*"):
                unsupported("pointer parameter", self.ts.tok)
            params.append(CDecl(self.ident().text, ty))
        self.ts.expect(")")
        self.ts.expect("{")
        regs = []
        while self.ts.at("register") or (self.ts.tok.text in ("int", "_Bool") and self.ts.tok.kind == "id"):
            self.ts.accept("register")
            ty = self.type_(allow_struct=False)
            if self.ts.at("*"):
                unsupported("pointer variable", self.ts.tok)
            regs.append(CDecl(self.ident().text, ty))
            if self.ts.at("="):
                unsupported("initialized declaration", self.ts.tok)
            self.ts.expect(";")
        body = []
        while not self.ts.at("}"):
            body.append(self.stmt())
        self.ts.expect("}")
        return CFun(name.text, self.self_name, self_struct, tuple(params), tuple(regs), right_chain(body), ret)

    # -- statements ------------------------------------------------------------

    def stmt(self):
        t = self.ts.tok
        if t.kind == "id" and t.text in _UNSUPPORTED_STMT:
            unsupported(_UNSUPPORTED_STMT[t.text], t)
        if self.ts.accept(";"):
            return CSkip()
        if self.ts.accept("{"):
            inner = []
            while not self.ts.at("}"):
                inner.append(self.stmt())
            self.ts.expect("}")
            return right_chain(inner)
        if self.ts.accept("return"):
            if self.ts.accept(";"):
                return CReturn(None)
            e = self.expr()
            self.ts.expect(";")
            return CReturn(e)
        if self.ts.accept("if"):
            self.ts.expect("(")
            c = self.expr()
            self.ts.expect(")")
            then = self.stmt()
            orelse = self.stmt() if self.ts.accept("else") else CSkip()
            return CIf(c, then, orelse)
        if t.kind == "id" and (t.text in ("int", "_Bool", "register") or t.text in _UNSUPPORTED_TYPES):
            unsupported("declaration after the first statement", t)
        if t.kind == "id" and self.ts.peek().text == "(":
            call = self.call(None)
            self.ts.expect(";")
            return call
        field = self.field_access()
        if field is None:
            target = self.ident().text
        self._reject_op()
        self.ts.expect("=")
        if field is None and self.ts.tok.kind == "id" and self.ts.peek().text == "(":
            call = self.call(target)
            self.ts.expect(";")
            return call
        e = self.expr()
        self.ts.expect(";")
        return CAssignField(field, e) if field is not None else CAssignLocal(target, e)

    def _reject_op(self):
        t = self.ts.tok
        if t.kind == "op" and t.text in _UNSUPPORTED_OPS and _UNSUPPORTED_OPS[t.text]:
            unsupported(_UNSUPPORTED_OPS[t.text], t)

    def field_access(self):
        """``(*self).f`` or ``self->f``; None when not at a field access."""
        ts = self.ts
        if ts.at("(") and ts.peek().text == "*":
            ts.advance()
            ts.advance()
            ptr = self.ident()
            self._check_self(ptr)
            ts.expect(")")
            ts.expect(".")
            return self.ident().text
        if ts.tok.kind == "id" and ts.peek().text == "->":
            ptr = self.ident()
            self._check_self(ptr)
            ts.advance()
            return self.ident().text
        if ts.at("*"):
            unsupported("pointer dereference", ts.tok)
        return None

    def _check_self(self, tok: Token):
        if tok.text != self.self_name:
            unsupported(f"access through pointer '{tok.text}' other than the state parameter", tok)

    def call(self, result):
        func = self.ident().text
        self.ts.expect("(")
        if not self.ts.accept("&"):
            self.ts.fail(f"expected '&' state argument in call to '{func}'")
        inst = self.field_access()
        if inst is None:
            self.ts.fail("expected a state field as the first call argument")
        args = []
        while self.ts.accept(","):
            args.append(self.expr())
        self.ts.expect(")")
        return CCall(result, func, inst, tuple(args))

    # -- expressions -----------------------------------------------------------

    def expr(self, level: int = 0):
        if level == len(_BINARY_LEVELS):
            return self.unary()
        left = self.expr(level + 1)
        while True:
            self._reject_op()
            for text, op in _BINARY_LEVELS[level]:
                if self.ts.at(text):
                    self.ts.advance()
                    right = self.expr(level + 1)
                    left = CBinop(op, left, right)
                    break
            else:
                return left

    def unary(self):
        ts = self.ts
        t = ts.tok
        if ts.at("-") and ts.peek().kind == "int":
            ts.advance()
            return CConst(-self._int(ts.advance(), 2**31), None)
        if ts.accept("-"):
            return CUnop("-", self.unary())
        if ts.accept("!"):
            return CUnop("not", self.unary())
        self._reject_op()
        if t.kind == "int":
            ts.advance()
            return CConst(self._int(t), None)
        field = self.field_access()
        if field is not None:
            return CFieldRead(field)
        if ts.accept("("):
            e = self.expr()
            ts.expect(")")
            return e
        if t.kind == "id":
            name = self.ident()
            if ts.at("("):
                unsupported("function call inside an expression", t)
            return CVar(name.text)
        ts.fail("expected expression")

    def _int(self, tok, limit: int = 2**31 - 1) -> int:
        v = int(tok.text)
        if v > limit:
            raise error(PHASE, f"integer literal {tok.text} does not fit in int", tok.span)
        return v


class _Typer:
    """Assigns each constant the type required by its context."""

    def __init__(self, structs: list[CStruct], funs: list[CFun]):
        self.structs = {s.name: s for s in structs}
        self.funs = {f.name: f for f in funs}
        self.struct_list = structs
        self.fun_list = funs

    def program(self) -> ClightProgram:
        return ClightProgram(tuple(self.struct_list), tuple(self.fun(f) for f in self.fun_list))

    def fun(self, f: CFun) -> CFun:
        self.f = f
        self.env = {d.name: d.type for d in f.params + f.registers}
        st = self.structs.get(f.self_struct)
        self.fields = {d.name: d.type for d in st.fields} if st else {}
        return CFun(f.name, f.self_name, f.self_struct, f.params, f.registers, self.stmt(f.body), f.ret)

    def fail(self, msg):
        raise error(PHASE, f"in function '{self.f.name}': {msg}")

    def var_type(self, name):
        if name not in self.env:
            self.fail(f"undeclared identifier '{name}'")
        return self.env[name]

    def field_type(self, name):
        if name not in self.fields:
            self.fail(f"struct '{self.f.self_struct}' has no field '{name}'")
        return self.fields[name]

    def stmt(self, s):
        if isinstance(s, CSeq):
            return CSeq(self.stmt(s.first), self.stmt(s.second))
        if isinstance(s, CSkip):
            return s
        if isinstance(s, CAssignLocal):
            return CAssignLocal(s.target, self.check(s.expr, self.var_type(s.target)))
        if isinstance(s, CAssignField):
            return CAssignField(s.field, self.check(s.expr, self.field_type(s.field)))
        if isinstance(s, CCall):
            self.field_type(s.instance)
            callee = self.funs.get(s.func)
            if s.result is not None:
                self.var_type(s.result)
            if callee is not None:
                if len(callee.params) != len(s.args):
                    self.fail(f"'{s.func}' expects {len(callee.params)} arguments, got {len(s.args)}")
                args = tuple(self.check(a, p.type) for a, p in zip(s.args, callee.params))
            else:
                args = tuple(self.check(a, None) for a in s.args)
            return CCall(s.result, s.func, s.instance, args)
        if isinstance(s, CReturn):
            return CReturn(None if s.value is None else self.check(s.value, self.f.ret))
        if isinstance(s, CIf):
            return CIf(self.check(s.cond, C_BOOL), self.stmt(s.then), self.stmt(s.orelse))
        raise TypeError(s)

    def synth(self, e):
        """Type of ``e`` when it does not depend on context, else None."""
        if isinstance(e, CConst):
            return None
        if isinstance(e, CVar):
            return self.var_type(e.name)
        if isinstance(e, CFieldRead):
            return self.field_type(e.field)
        if isinstance(e, CUnop):
            return C_BOOL if e.op == "not" else C_INT
        if e.op in ("+", "-", "*", "/"):
            return C_INT
        return C_BOOL

    def check(self, e, expected):
        if isinstance(e, CConst):
            return CConst(e.value, expected if expected in SCALARS else C_INT)
        if isinstance(e, (CVar, CFieldRead)):
            self.synth(e)
            return e
        if isinstance(e, CUnop):
            return CUnop(e.op, self.check(e.arg, C_BOOL if e.op == "not" else C_INT))
        if e.op in ("and", "or"):
            want = C_BOOL
        elif e.op in ("=", "<>"):
            want = self.synth(e.left) or self.synth(e.right) or C_INT
        else:
            want = C_INT
        return CBinop(e.op, self.check(e.left, want), self.check(e.right, want))
