"""A small regex tokenizer used by both surface-language parsers."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..ir.lustre import SourceSpan
from .diagnostics import error


@dataclass(frozen=True)
class Token:
    kind: str  # "id" | "int" | "op" | "eof"
    text: str
    span: SourceSpan


_IDENT = r"[A-Za-z_][A-Za-z0-9_$]*"
_INT = r"[0-9]+"


class Lexer:
    def __init__(self, line_comment: str, block_comments: bool, operators: list[str], phase: str):
        ops = sorted(operators, key=len, reverse=True)
        parts = [rf"(?P<ws>[ \t\r\n]+)", rf"(?P<lc>{re.escape(line_comment)}[^\n]*)"]
        if block_comments:
            parts.append(r"(?P<bc>/\*(?:.|\n)*?\*/)")
        parts += [
            rf"(?P<id>{_IDENT})",
            rf"(?P<int>{_INT})",
            "(?P<op>" + "|".join(re.escape(o) for o in ops) + ")",
        ]
        self._re = re.compile("|".join(parts))
        self.phase = phase

    def tokenize(self, text: str, file: str = "<input>") -> list[Token]:
        toks = []
        pos, line, col = 0, 1, 1
        while pos < len(text):
            m = self._re.match(text, pos)
            if m is None:
                raise error(self.phase, f"unexpected character {text[pos]!r}",
                            SourceSpan(file, line, col, line, col + 1))
            chunk = m.group(0)
            nl = chunk.count("\n")
            end_line = line + nl
            end_col = (len(chunk) - chunk.rfind("\n")) if nl else col + len(chunk)
            if m.lastgroup not in ("ws", "lc", "bc"):
                toks.append(Token(m.lastgroup, chunk, SourceSpan(file, line, col, end_line, end_col)))
            pos, line, col = m.end(), end_line, end_col
        toks.append(Token("eof", "", SourceSpan(file, line, col, line, col)))
        return toks


class TokenStream:
    def __init__(self, toks: list[Token], phase: str):
        self.toks = toks
        self.i = 0
        self.phase = phase

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "id") and t.text == text

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise error(self.phase, f"{msg}, found {found}", tok.span)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def ident(self, keywords=()) -> Token:
        t = self.tok
        if t.kind != "id" or t.text in keywords:
            self.fail("expected identifier")
        return self.advance()


def join(a: SourceSpan, b: SourceSpan) -> SourceSpan:
    return SourceSpan(a.file, a.start_line, a.start_col, b.end_line, b.end_col)
