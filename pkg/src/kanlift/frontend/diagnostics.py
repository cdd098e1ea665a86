"""Diagnostics shared by the parsers and the elaborator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from ..ir.lustre import SourceSpan


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    span: Optional[SourceSpan]
    message: str
    phase: str

    def __str__(self):
        where = f"{self.span}: " if self.span else ""
        return f"{where}{self.severity}: [{self.phase}] {self.message}"


class DiagnosticError(Exception):
    """Raised when a phase reports at least one error."""

    def __init__(self, diagnostics: Iterable[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


def error(phase: str, message: str, span: Optional[SourceSpan] = None) -> DiagnosticError:
    return DiagnosticError([Diagnostic("error", span, message, phase)])
