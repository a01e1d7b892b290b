"""Diagnostics shared by the parser, desugarer, checker and validator."""
from __future__ import annotations

from dataclasses import dataclass

from .syntax import NOSPAN, Span


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    rule: str
    message: str
    span: Span = NOSPAN

    def render(self) -> str:
        return f"{self.span}: {self.severity}: {self.rule}: {self.message}"

    def sort_key(self):
        return (self.span.path, self.span.line, self.span.col, self.rule, self.message)


class StaticError(Exception):
    """A program was rejected before evaluation; carries every error found."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(d.render() for d in self.diagnostics))


def error(rule: str, message: str, span: Span = NOSPAN) -> StaticError:
    return StaticError([Diagnostic("error", rule, message, span)])
