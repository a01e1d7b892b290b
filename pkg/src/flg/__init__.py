"""A Datalog engine with first-order functions and reified SMT formulas."""
from __future__ import annotations

from .diagnostics import Diagnostic, StaticError
from .program import Program

__version__ = "0.1.0"


def compile_source(text: str, path: str = "<input>") -> tuple[Program, list[Diagnostic]]:
    """Parse, desugar, type check and stratify; returns the program and its warnings."""
    from .parser import desugar, parse_program
    from .typecheck import check_program, stratify

    prog = desugar(parse_program(text, path))
    warnings = check_program(prog)
    stratify(prog)
    return prog, warnings


__all__ = ["Diagnostic", "Program", "StaticError", "compile_source"]
