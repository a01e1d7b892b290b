"""Printer for surface and core syntax.

Binary operators are fully parenthesized so that printing and reparsing an
expression yields a structurally identical tree.
"""
from __future__ import annotations

from ..syntax import (
    Anon, EApp, EConst, ECall, ECtor, EFormula, EIf, ELet, ELetFun, EMatch, EOp, EPred,
    EQuote, ERecord, ERecordUpdate, ESmtVar, EUnquote, EVar, EqExpr, EqTerm, NegAtom, NegEq,
    PConst, PCtor, PosAtom, PVar, PWild, Wildcard,
)
from ..terms import Const, show, show_const
from ..types import AdtType, BaseType, ModelType, SmtType, SymType, Type, TypeVar


def show_type(t: Type) -> str:
    if isinstance(t, (BaseType, ModelType, TypeVar)):
        return str(t)
    if isinstance(t, SmtType):
        return f"{_tatom(t.inner)} smt"
    if isinstance(t, SymType):
        return f"{_tatom(t.inner)} sym"
    assert isinstance(t, AdtType)
    if t.name.startswith("$tuple"):
        return "(" + " * ".join(_tatom(a) for a in t.args) + ")"
    if not t.args:
        return t.name
    if len(t.args) == 1:
        return f"{_tatom(t.args[0])} {t.name}"
    return "(" + ", ".join(show_type(a) for a in t.args) + f") {t.name}"


def _tatom(t: Type) -> str:
    s = show_type(t)
    if isinstance(t, (SmtType, SymType)) or (isinstance(t, AdtType) and t.args
                                             and not t.name.startswith("$tuple")):
        return f"({s})"
    return s


def show_expr(e) -> str:
    if isinstance(e, EVar):
        return e.name
    if isinstance(e, EConst):
        return show_const(e.value) if e.value.sort != "bv32" or e.value.value >= 0 \
            else f"({e.value.value})"
    if isinstance(e, Anon):
        return "_"
    if isinstance(e, Wildcard):
        return "??"
    if isinstance(e, EApp):
        if e.bare:
            return e.name
        return e.name + "(" + ", ".join(show_expr(a) for a in e.args) + ")"
    if isinstance(e, (ECall, EPred)):
        return e.name + "(" + ", ".join(show_expr(a) for a in e.args) + ")"
    if isinstance(e, ECtor):
        if e.name.startswith("$tuple"):
            return "(" + ", ".join(show_expr(a) for a in e.args) + ")"
        if e.name == "nil" and not e.args:
            return "[]"
        if e.name == "cons" and len(e.args) == 2:
            return f"({show_expr(e.args[0])} :: {show_expr(e.args[1])})"
        if not e.args:
            return e.name
        return e.name + "(" + ", ".join(show_expr(a) for a in e.args) + ")"
    if isinstance(e, EOp):
        if e.op == "neg":
            return f"(-{show_expr(e.args[0])})"
        if len(e.args) == 1:
            return f"({e.op}{show_expr(e.args[0])})"
        return f"({show_expr(e.args[0])} {e.op} {show_expr(e.args[1])})"
    if isinstance(e, EIf):
        return f"(if {show_expr(e.cond)} then {show_expr(e.then)} else {show_expr(e.other)})"
    if isinstance(e, ELet):
        return f"(let {show_pattern(e.pat)} = {show_expr(e.value)} in {show_expr(e.body)})"
    if isinstance(e, ELetFun):
        f = e.fun
        ps = ", ".join(f"{n}: {show_type(t)}" for n, t in f.params)
        return (f"(let fun {f.name}({ps}) : {show_type(f.ret)} = {show_expr(f.body)} "
                f"in {show_expr(e.body)})")
    if isinstance(e, EMatch):
        arms = " | ".join(f"{show_pattern(p)} => {show_expr(b)}" for p, b in e.arms)
        return f"(match {show_expr(e.scrut)} with {arms} end)"
    if isinstance(e, EQuote):
        return "`" + show_expr(e.formula) + "`"
    if isinstance(e, EUnquote):
        return show_expr(e.expr)
    if isinstance(e, ESmtVar):
        return "#{" + show_expr(e.name) + "}[" + show_type(e.type) + "]"
    if isinstance(e, EFormula):
        return _show_formula(e)
    if isinstance(e, ERecord):
        return "{ " + "; ".join(f"{f} = {show_expr(v)}" for f, v in e.fields) + " }"
    if isinstance(e, ERecordUpdate):
        fs = "; ".join(f"{f} = {show_expr(v)}" for f, v in e.fields)
        return "{ " + show_expr(e.base) + " with " + fs + " }"
    raise TypeError(f"cannot print {e!r}")


def _show_formula(e: EFormula) -> str:
    n = e.ctor
    if n == "smt_ite" and not e.params:
        c, a, b = e.args
        return f"(#if {show_expr(c)} then {show_expr(a)} else {show_expr(b)})"
    if n in ("smt_forall", "smt_exists"):
        var, body, pats = e.args
        kw = "forall" if n == "smt_forall" else "exists"
        ps = ""
        if pats.args:
            ps = " : " + ", ".join(show_expr(p) for p in pats.args)
        return f"({kw} {show_expr(var)}{ps}. {show_expr(body)})"
    if n.startswith("#"):
        return n + "(" + ", ".join(show_expr(a) for a in e.args) + ")"
    head = n
    if e.params:
        head += "[" + ", ".join(str(p) if isinstance(p, int) else
                                (show_type(p) if isinstance(p, Type) else str(p))
                                for p in e.params) + "]"
    return head + "(" + ", ".join(show_expr(a) for a in e.args) + ")"


def show_pattern(p) -> str:
    if isinstance(p, PVar):
        return p.name
    if isinstance(p, PWild):
        return "_"
    if isinstance(p, PConst):
        v: Const = p.value
        return show_const(v)
    if isinstance(p, PCtor):
        if p.name.startswith("$tuple"):
            return "(" + ", ".join(show_pattern(a) for a in p.args) + ")"
        if p.name == "nil" and not p.args:
            return "[]"
        if p.name == "cons" and len(p.args) == 2:
            return f"({show_pattern(p.args[0])} :: {show_pattern(p.args[1])})"
        if not p.args:
            return p.name
        return p.name + "(" + ", ".join(show_pattern(a) for a in p.args) + ")"
    raise TypeError(f"cannot print pattern {p!r}")


def show_premise(p) -> str:
    if isinstance(p, PosAtom):
        return f"{p.pred}({', '.join(p.vars)})"
    if isinstance(p, NegAtom):
        return f"!{p.pred}({', '.join(p.vars)})"
    if isinstance(p, EqTerm):
        return f"{p.var} = {show(p.term)}"
    if isinstance(p, EqExpr):
        return f"{p.var} = {show_expr(p.expr)}"
    if isinstance(p, NegEq):
        return f"{p.var} != {show_expr(p.expr)}"
    raise TypeError(f"cannot print premise {p!r}")


def show_clause(c) -> str:
    head = c.head + (f"({', '.join(c.head_vars)})" if c.head_vars else "")
    if not c.body:
        return head + "."
    return head + " :- " + ", ".join(show_premise(p) for p in c.body) + "."
