"""Abstract syntax: expressions, formulas, patterns, premises, clauses, programs.

Surface-only nodes (records, local functions, wildcards in expression position)
are removed by ``flg.parser.desugar``; everything else is shared between the
parse tree and the checked program.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .terms import Const, Term
from .types import Type


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    path: str = "<input>"

    def __str__(self) -> str:
        return f"{self.path}:{self.line}:{self.col}"


NOSPAN = Span(0, 0)


def _span():
    return field(default=NOSPAN, compare=False, repr=False)


class Expr:
    __slots__ = ()


# ---------------------------------------------------------------- expressions


@dataclass(frozen=True, eq=True)
class EVar(Expr):
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class EConst(Expr):
    value: Const
    span: Span = _span()


@dataclass(frozen=True)
class EApp(Expr):
    """Unresolved application ``name(args)`` (or bare lowercase ``name``)."""
    name: str
    args: tuple
    bare: bool = False
    span: Span = _span()


@dataclass(frozen=True)
class ECtor(Expr):
    name: str
    args: tuple
    span: Span = _span()


@dataclass(frozen=True)
class ECall(Expr):
    name: str
    args: tuple
    span: Span = _span()


@dataclass(frozen=True)
class Wildcard(Expr):
    """``??`` in a predicate-as-function argument."""
    span: Span = _span()


@dataclass(frozen=True)
class Anon(Expr):
    """``_``: anonymous variable / ignored column."""
    span: Span = _span()


@dataclass(frozen=True)
class EPred(Expr):
    name: str
    args: tuple  # Expr | Wildcard | Anon
    span: Span = _span()


@dataclass(frozen=True)
class EOp(Expr):
    op: str
    args: tuple
    span: Span = _span()


@dataclass(frozen=True)
class EIf(Expr):
    cond: Expr
    then: Expr
    other: Expr
    span: Span = _span()


@dataclass(frozen=True)
class ELet(Expr):
    pat: "Pattern"
    value: Expr
    body: Expr
    span: Span = _span()


@dataclass(frozen=True)
class EMatch(Expr):
    scrut: Expr
    arms: tuple  # of (Pattern, Expr)
    span: Span = _span()


@dataclass(frozen=True)
class EQuote(Expr):
    formula: Expr
    span: Span = _span()


@dataclass(frozen=True)
class EUnquote(Expr):
    expr: Expr
    span: Span = _span()


@dataclass(frozen=True)
class ESmtVar(Expr):
    name: Expr
    type: Type
    span: Span = _span()


@dataclass(frozen=True)
class EFormula(Expr):
    """A c^SMT constructor application inside a quote."""
    ctor: str
    params: tuple
    args: tuple
    span: Span = _span()


@dataclass(frozen=True)
class ERecord(Expr):
    fields: tuple  # of (name, Expr)
    span: Span = _span()


@dataclass(frozen=True)
class ERecordUpdate(Expr):
    base: Expr
    fields: tuple
    span: Span = _span()


@dataclass(frozen=True)
class ELetFun(Expr):
    fun: "FunDecl"
    body: Expr
    span: Span = _span()


# ---------------------------------------------------------------- patterns


class Pattern:
    __slots__ = ()


@dataclass(frozen=True)
class PVar(Pattern):
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class PWild(Pattern):
    span: Span = _span()


@dataclass(frozen=True)
class PConst(Pattern):
    value: Const
    span: Span = _span()


@dataclass(frozen=True)
class PCtor(Pattern):
    name: str
    args: tuple
    span: Span = _span()


def pattern_vars(p: Pattern) -> list[str]:
    if isinstance(p, PVar):
        return [p.name]
    if isinstance(p, PCtor):
        out: list[str] = []
        for a in p.args:
            out.extend(pattern_vars(a))
        return out
    return []


# ---------------------------------------------------------------- premises


@dataclass(frozen=True)
class SAtom:
    """Surface atom ``p(e..)`` or ``!p(e..)``."""
    pred: str
    args: tuple
    negated: bool = False
    span: Span = _span()


@dataclass(frozen=True)
class SEq:
    """Surface ``e1 = e2`` / ``e1 != e2``."""
    left: Expr
    right: Expr
    negated: bool = False
    span: Span = _span()


@dataclass(frozen=True)
class SExpr:
    """Surface boolean-expression premise."""
    expr: Expr
    span: Span = _span()


@dataclass(frozen=True)
class PosAtom:
    pred: str
    vars: tuple[str, ...]
    span: Span = _span()


@dataclass(frozen=True)
class NegAtom:
    pred: str
    vars: tuple[str, ...]
    span: Span = _span()


@dataclass(frozen=True)
class EqTerm:
    """``Y = u`` where u is a unifiable term (constructors, constants, variables)."""
    var: str
    term: Term
    smt: bool = False  # u is a c^SMT pattern (rule P-EqSMT-BF)
    span: Span = _span()


@dataclass(frozen=True)
class EqExpr:
    """``Y = e``: evaluate e, then unify Y with the value."""
    var: str
    expr: Expr
    span: Span = _span()


@dataclass(frozen=True)
class NegEq:
    var: str
    expr: Expr
    span: Span = _span()


Premise = Union[PosAtom, NegAtom, EqTerm, EqExpr, NegEq]


# ---------------------------------------------------------------- declarations


@dataclass
class FunDecl:
    name: str
    params: list  # of (name, Type | None)
    ret: Optional[Type]
    body: Expr
    span: Span = _span()


@dataclass
class TypeDecl:
    name: str
    params: list[str]
    ctors: Optional[list] = None  # of (name, [Type])
    alias: Optional[Type] = None
    record: Optional[list] = None  # of (field, Type)
    span: Span = _span()


@dataclass
class RelDecl:
    name: str
    types: list
    kind: str  # "input" | "output" | "rel"
    span: Span = _span()


@dataclass
class UfDecl:
    name: str
    args: list
    ret: Type
    span: Span = _span()


@dataclass
class SortDecl:
    name: str
    params: list[str]
    span: Span = _span()


@dataclass
class SClause:
    head: str
    args: tuple
    body: tuple
    span: Span = _span()


@dataclass
class Clause:
    """Normalized clause: head over variables, body of core premises."""
    head: str
    head_vars: tuple[str, ...]
    body: tuple
    span: Span = _span()
    index: int = 0

    def __str__(self) -> str:
        from .parser.printer import show_clause
        return show_clause(self)


@dataclass
class SourceProgram:
    path: str
    text: str
    decls: list = field(default_factory=list)
