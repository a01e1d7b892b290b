"""Runtime outcomes other than a value."""
from __future__ import annotations


class EvalError(Exception):
    def __init__(self, kind: str, message: str):
        self.kind = kind
        self.message = message
        super().__init__(f"{kind}: {message}")


class HardError(EvalError):
    """The program went wrong; aborts evaluation (the bottom outcome)."""


class SoftFailure(EvalError):
    """A hard error downgraded to a failed derivation (soft-exception mode)."""
