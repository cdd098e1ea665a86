"""Relational compilation pipeline and its drivers."""

from .driver import NotInImage, compile, compile_pass, lift, lift_pass, run_relation
from .relations import PASSES, PassName, compileR

__all__ = ["NotInImage", "compile", "compile_pass", "lift", "lift_pass", "run_relation", "PASSES",
           "PassName", "compileR"]
