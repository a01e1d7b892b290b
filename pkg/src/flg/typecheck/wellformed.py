"""Mode-indexed type well-formedness (modes ``exp`` and ``smt``)."""
from __future__ import annotations

from typing import Optional

from ..types import AdtType, BaseType, ModelType, SmtType, SymType, Type, TypeVar

EXP = "exp"
SMT = "smt"


def check_well_formed(t: Type, mode: str, tvars=frozenset(), known=None) -> Optional[tuple[str, str]]:
    """Return None if ``tvars |-_mode t`` holds, else (rule, message).

    ``known`` optionally maps data-type names to their arity.
    """
    if isinstance(t, BaseType):
        return None
    if isinstance(t, TypeVar):
        if mode == SMT:
            return ("t-TVar", f"type variable {t} is not allowed in SMT mode")
        if t.name not in tvars:
            return ("t-TVar", f"type variable {t} is not in scope")
        return None
    if isinstance(t, ModelType):
        if mode == SMT:
            return ("τ-Model", "model is not allowed in SMT mode")
        return None
    if isinstance(t, (SmtType, SymType)):
        bad = check_well_formed(t.inner, SMT, tvars, known)
        if bad is not None:
            kind = "smt" if isinstance(t, SmtType) else "sym"
            return ("τ-SMT" if kind == "smt" else "τ-Sym", f"in {t}: {bad[1]}")
        return None
    if isinstance(t, AdtType):
        if known is not None:
            if t.name not in known:
                return ("t-ADT", f"unknown type {t.name}")
            if known[t.name] != len(t.args):
                return ("t-ADT", f"{t.name} expects {known[t.name]} argument(s)")
        for a in t.args:
            bad = check_well_formed(a, mode, tvars, known)
            if bad is not None:
                return bad
        return None
    return ("types", f"not a type: {t!r}")


def well_formed(t: Type, mode: str, tvars=frozenset()) -> bool:
    return check_well_formed(t, mode, tvars) is None
