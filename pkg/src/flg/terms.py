"""Ground values, unifiable terms, and their source-syntax printer.

Values are immutable and hash-consed only by structure: two terms are equal
iff they are structurally identical.  ``Ctor.params`` carries the bracketed
indices of the built-in formula constructors (``smt_var[x, t]``,
``smt_const[k]``, ``smt_ctor[c]`` ...); user constructors have no params.
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping

from .types import Type

# c^SMT constructor family.  Values built from these are formulas.
SMT_VAR = "smt_var"
SMT_CONST = "smt_const"
SMT_CTOR = "smt_ctor"
SMT_UF = "smt_uf"
SMT_IS = "smt_is"
SMT_GET = "smt_get"
SMT_PATS = "smt_pats"
BV_CONST = "bv_const"

BOOL_CONNECTIVES = ("smt_not", "smt_and", "smt_or", "smt_imp", "smt_iff")
BINDERS = ("smt_let", "smt_forall", "smt_exists")
BV_ARITH = (
    "bv_add", "bv_sub", "bv_mul", "bv_sdiv", "bv_srem", "bv_udiv", "bv_urem",
    "bv_and", "bv_or", "bv_xor", "bv_shl", "bv_lshr", "bv_ashr",
)
BV_UNARY = ("bv_neg", "bv_not")
BV_CMP = (
    "bv_slt", "bv_sle", "bv_sgt", "bv_sge", "bv_ult", "bv_ule", "bv_ugt", "bv_uge",
)
ARRAY_OPS = ("array_select", "array_store")

SMT_CTOR_NAMES = frozenset(
    (SMT_VAR, SMT_CONST, SMT_CTOR, SMT_UF, SMT_IS, SMT_GET, SMT_PATS, BV_CONST,
     "smt_eq", "smt_ite")
    + BOOL_CONNECTIVES + BINDERS + BV_ARITH + BV_UNARY + BV_CMP + ARRAY_OPS
)

I32_MIN, I32_MAX = -(1 << 31), (1 << 31) - 1
I64_MIN, I64_MAX = -(1 << 63), (1 << 63) - 1


class Term:
    __slots__ = ()


class Var(Term):
    """A rule variable; only ever appears in unifiable terms, never in values."""

    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("var", name))

    def __eq__(self, other):
        return isinstance(other, Var) and other.name == self.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.name


class Const(Term):
    __slots__ = ("sort", "value", "_hash")

    def __init__(self, sort: str, value):
        self.sort = sort
        self.value = value
        self._hash = hash((sort, value))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Const)
            and self._hash == other._hash
            and self.sort == other.sort
            and self.value == other.value
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return show(self)


class Ctor(Term):
    __slots__ = ("name", "args", "params", "ground", "_hash")

    def __init__(self, name: str, args: tuple = (), params: tuple = ()):
        self.name = name
        self.args = args
        self.params = params
        ground = True
        for a in args:
            if isinstance(a, Var) or (isinstance(a, Ctor) and not a.ground):
                ground = False
                break
        self.ground = ground
        self._hash = hash((name, args, params))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Ctor)
            and self._hash == other._hash
            and self.name == other.name
            and self.params == other.params
            and self.args == other.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return show(self)


class ModelValue(Term):
    """A solver model: finite map from SMT variables to concrete values."""

    __slots__ = ("bindings", "_hash")

    def __init__(self, bindings: Mapping[Term, Term]):
        items = sorted(bindings.items(), key=lambda kv: show(kv[0]))
        self.bindings = tuple(items)
        self._hash = hash(("model", self.bindings))

    def get(self, var: Term):
        for k, v in self.bindings:
            if k == var:
                return v
        return None

    def __eq__(self, other):
        return isinstance(other, ModelValue) and self.bindings == other.bindings

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return show(self)


TRUE = Const("bool", True)
FALSE = Const("bool", False)
NIL = Ctor("nil")
NONE = Ctor("none")


def boolean(b: bool) -> Const:
    return TRUE if b else FALSE


def i32(n: int) -> Const:
    return Const("bv32", wrap(n, 32))


def i64(n: int) -> Const:
    return Const("bv64", wrap(n, 64))


def string(s: str) -> Const:
    return Const("string", s)


def wrap(n: int, width: int) -> int:
    n &= (1 << width) - 1
    if n >> (width - 1):
        n -= 1 << width
    return n


def some(v: Term) -> Ctor:
    return Ctor("some", (v,))


def cons(h: Term, t: Term) -> Ctor:
    return Ctor("cons", (h, t))


def make_list(items: Iterable[Term]) -> Term:
    out: Term = NIL
    for it in reversed(list(items)):
        out = Ctor("cons", (it, out))
    return out


def list_items(v: Term) -> list[Term] | None:
    out = []
    while isinstance(v, Ctor) and v.name == "cons" and len(v.args) == 2:
        out.append(v.args[0])
        v = v.args[1]
    if isinstance(v, Ctor) and v.name == "nil" and not v.args:
        return out
    return None


def make_tuple(items) -> Term:
    items = tuple(items)
    if len(items) == 1:
        return items[0]
    return Ctor(f"$tuple{len(items)}", items)


def smt_var(name: Term, ty: Type) -> Ctor:
    return Ctor(SMT_VAR, (), (name, ty))


def smt_const(k: Const) -> Ctor:
    return Ctor(SMT_CONST, (), (k,))


def is_smt_value(v: Term) -> bool:
    return isinstance(v, Ctor) and v.name in SMT_CTOR_NAMES


def variables(u: Term) -> set[str]:
    out: set[str] = set()
    stack = [u]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            out.add(t.name)
        elif isinstance(t, Ctor) and not t.ground:
            stack.extend(t.args)
    return out


# ---------------------------------------------------------------- printing

_IDENT = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def quote_string(s: str) -> str:
    return '"' + "".join(_ESCAPES.get(ch, ch) for ch in s) + '"'


def show(v: Term, records: Mapping[str, tuple[str, ...]] | None = None) -> str:
    """Print a term in re-parsable source syntax (no spaces after commas)."""
    return _Printer(records or {}).term(v)


class _Printer:
    def __init__(self, records):
        self.records = records

    def term(self, v: Term) -> str:
        if isinstance(v, Const):
            return show_const(v)
        if isinstance(v, Var):
            return v.name
        if isinstance(v, ModelValue):
            inner = ";".join(f"{self.term(k)}={self.term(x)}" for k, x in v.bindings)
            return "<model{" + inner + "}>"
        assert isinstance(v, Ctor)
        if v.name in SMT_CTOR_NAMES:
            if v.name == SMT_VAR:
                return self.formula(v)
            return "`" + self.formula(v) + "`"
        items = list_items(v)
        if items is not None:
            return "[" + ",".join(self.term(x) for x in items) + "]"
        if v.name.startswith("$tuple"):
            return "(" + ",".join(self.term(x) for x in v.args) + ")"
        fields = self.records.get(v.name)
        if fields is not None:
            return "{" + ";".join(f"{f}={self.term(x)}" for f, x in zip(fields, v.args)) + "}"
        if not v.args:
            return v.name
        return v.name + "(" + ",".join(self.term(x) for x in v.args) + ")"

    def formula(self, v: Term) -> str:
        if not isinstance(v, Ctor) or v.name not in SMT_CTOR_NAMES:
            # only reachable for non-normalized trees; print as unquoted term
            return self.term(v)
        n, args, params = v.name, v.args, v.params
        if n == SMT_VAR:
            name, ty = params
            if isinstance(name, Const) and name.sort == "string" and _IDENT.match(name.value):
                return f"#{name.value}[{ty}]"
            return "#{" + self.term(name) + "}[" + str(ty) + "]"
        if n == SMT_CONST:
            return show_const(params[0])
        if n == SMT_CTOR or n == SMT_UF:
            head = params[0]
            if not args:
                return head
            return head + "(" + ",".join(self.formula(a) for a in args) + ")"
        if n == SMT_IS:
            return f"#is_{params[0]}(" + self.formula(args[0]) + ")"
        if n == SMT_GET:
            return f"#{params[0]}_{params[1]}(" + self.formula(args[0]) + ")"
        if n == BV_CONST:
            return f"bv_const[{params[0]}]({params[1]})"
        if n in ("smt_forall", "smt_exists"):
            var, body, pats = args
            kw = "forall" if n == "smt_forall" else "exists"
            pat_s = ""
            if isinstance(pats, Ctor) and pats.args:
                pat_s = " : " + ",".join(self.formula(p) for p in pats.args)
            return f"({kw} {self.formula(var)}{pat_s}. {self.formula(body)})"
        return n + "(" + ",".join(self.formula(a) for a in args) + ")"


def show_const(k: Const) -> str:
    if k.sort == "bool":
        return "true" if k.value else "false"
    if k.sort == "bv32":
        return str(k.value)
    if k.sort == "bv64":
        return f"{k.value}L"
    if k.sort == "string":
        return quote_string(k.value)
    raise ValueError(f"unknown constant sort {k.sort}")
