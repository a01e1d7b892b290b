"""Signatures of the named formula constructors usable inside quotations.

Each entry maps a source-level name to (argument pre-types, result pre-type)
over the type variables ``a``/``b``/``k``/``v`` and the bit-vector width
variable ``w`` (which the checker restricts to bv[32] / bv[64]).
"""
from __future__ import annotations

from .terms import BV_ARITH, BV_CMP, BV_UNARY
from .types import BOOL, AdtType, TypeVar

A, B, K, V, W = (TypeVar(n) for n in ("a", "b", "k", "v", "$w"))


def array_of(k, v):
    return AdtType("array", (k, v))


SIGS: dict[str, tuple[tuple, object]] = {
    "smt_not": ((BOOL,), BOOL),
    "smt_and": ((BOOL, BOOL), BOOL),
    "smt_or": ((BOOL, BOOL), BOOL),
    "smt_imp": ((BOOL, BOOL), BOOL),
    "smt_iff": ((BOOL, BOOL), BOOL),
    "smt_eq": ((A, A), BOOL),
    "smt_ite": ((BOOL, A, A), A),
    "array_select": ((array_of(K, V), K), V),
    "array_store": ((array_of(K, V), K, V), array_of(K, V)),
}
for _n in BV_ARITH:
    SIGS[_n] = ((W, W), W)
for _n in BV_UNARY:
    SIGS[_n] = ((W,), W)
for _n in BV_CMP:
    SIGS[_n] = ((W, W), BOOL)

# constructors with bespoke typing / evaluation
SPECIAL = frozenset({"smt_let", "smt_forall", "smt_exists", "smt_pats", "bv_const"})

USER_NAMES = frozenset(SIGS) | {"smt_let", "bv_const"}

# infix/prefix operators that denote formula constructors inside quotes
OPERATORS = {"~": "smt_not", "/\\": "smt_and", "\\/": "smt_or", "==>": "smt_imp", "#=": "smt_eq"}

# connectives that bind variables; a pattern containing one is invalid
BINDING = frozenset({"smt_let", "smt_forall", "smt_exists"})
