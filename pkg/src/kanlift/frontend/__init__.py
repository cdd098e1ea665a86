"""Surface syntax: Lustre and canonical C parsers and printers, elaboration, normalization."""

from .c_parser import parse_c
from .c_printer import print_c
from .diagnostics import Diagnostic, DiagnosticError
from .elaborate import elaborate
from .lustre_parser import parse_lustre
from .lustre_printer import print_lustre
from .normalize import NameScheme, normalize

__all__ = [
    "Diagnostic", "DiagnosticError", "NameScheme", "elaborate", "normalize",
    "parse_c", "parse_lustre", "print_c", "print_lustre",
]
