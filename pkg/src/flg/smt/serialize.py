"""Serialize formula values (c^SMT trees) into SMT-LIB v2 scripts.

The output is a pure function of the assertion values and options: equal
queries produce byte-identical scripts.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Optional

from ..formulas import SIGS
from ..program import Program
from ..terms import (
    BV_CONST, SMT_CONST, SMT_CTOR, SMT_GET, SMT_IS, SMT_PATS, SMT_UF, SMT_VAR, Const, Ctor,
    show,
)
from ..typecheck.infer import Meta, Mismatch, default_metas, instantiate, prune, unify, zonk
from ..types import BOOL, AdtType, BaseType, SymType, Type, TypeVar, bv, erase, type_tag
from .sexp import quote_string

OPS = {
    "smt_not": "not", "smt_and": "and", "smt_or": "or", "smt_imp": "=>", "smt_iff": "=",
    "smt_eq": "=", "smt_ite": "ite",
    "bv_add": "bvadd", "bv_sub": "bvsub", "bv_mul": "bvmul", "bv_sdiv": "bvsdiv",
    "bv_srem": "bvsrem", "bv_udiv": "bvudiv", "bv_urem": "bvurem", "bv_and": "bvand",
    "bv_or": "bvor", "bv_xor": "bvxor", "bv_shl": "bvshl", "bv_lshr": "bvlshr",
    "bv_ashr": "bvashr", "bv_neg": "bvneg", "bv_not": "bvnot",
    "bv_slt": "bvslt", "bv_sle": "bvsle", "bv_sgt": "bvsgt", "bv_sge": "bvsge",
    "bv_ult": "bvult", "bv_ule": "bvule", "bv_ugt": "bvugt", "bv_uge": "bvuge",
    "array_select": "select", "array_store": "store",
}

# symbols with a fixed meaning in SMT-LIB or the ALL logic
RESERVED = frozenset(
    set(OPS.values()) | {
        "true", "false", "xor", "distinct", "let", "forall", "exists", "match", "par", "as",
        "_", "!", "const", "concat", "extract", "repeat", "zero_extend", "sign_extend",
        "rotate_left", "rotate_right", "bvnand", "bvnor", "bvxnor", "bvcomp", "bvsmod",
        "abs", "div", "mod", "to_real", "to_int", "is_int", "str", "re", "seq", "int",
        "real", "bool", "array", "string", "reset", "assert", "push", "pop", "model",
        "declare", "define", "check", "set", "get", "exit", "echo", "lambda",
    }
)

_SIMPLE = re.compile(r"[A-Za-z_][A-Za-z0-9_$.]{0,23}\Z")

PRODUCE_MODELS = "(set-option :produce-models true)"


class SerializeError(ValueError):
    pass


def smt_name(name: str) -> str:
    """SMT symbol for a source constructor / function / sort name."""
    if name in RESERVED:
        return name + "!"
    return name


def var_name(name_value, ty: Type) -> str:
    """Mangled SMT name of the variable ``#{name_value}[ty]``."""
    printed = show(name_value)
    prefix = "sym"
    if isinstance(name_value, Const) and name_value.sort == "string" \
            and _SIMPLE.match(name_value.value):
        prefix = name_value.value
    digest = hashlib.sha256(f"{printed}|{ty}".encode()).hexdigest()[:16]
    return f"{prefix}!{digest}!{type_tag(ty)}"


@dataclass
class Script:
    text: str
    free_vars: list = field(default_factory=list)  # (mangled, var value, pre-type)
    want_model: bool = False
    timeout_ms: Optional[int] = None
    warnings: list = field(default_factory=list)

    @property
    def key(self) -> str:
        """Memo key: content hash of the script without its timeout line."""
        body = "\n".join(l for l in self.text.split("\n") if not l.startswith("(set-option :timeout"))
        return hashlib.sha256(body.encode()).hexdigest()

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()


def drop_invalid_patterns(v, warnings: list):
    """Remove quantifier patterns that contain binders; one warning per dropped pattern."""
    if not isinstance(v, Ctor):
        return v
    if v.name in ("smt_forall", "smt_exists") and len(v.args) == 3:
        var, body, pats = v.args
        body = drop_invalid_patterns(body, warnings)
        kept = []
        for p in pats.args if isinstance(pats, Ctor) else ():
            if _has_binder(p):
                warnings.append(f"dropping quantifier pattern with a binder: {show(p)}")
            else:
                kept.append(p)
        return Ctor(v.name, (var, body, Ctor(SMT_PATS, tuple(kept))), v.params)
    if not v.args:
        return v
    return Ctor(v.name, tuple(drop_invalid_patterns(a, warnings) for a in v.args), v.params)


def _has_binder(v) -> bool:
    if isinstance(v, Ctor):
        if v.name in ("smt_forall", "smt_exists", "smt_let"):
            return True
        return any(_has_binder(a) for a in v.args)
    return False


class _Sorts:
    """Reconstruct the sort of every subterm occurrence by unification."""

    def __init__(self, prog: Program):
        self.prog = prog
        self.occ: list[Type] = []  # pre-order, one per visited node

    def infer(self, v) -> Type:
        slot = len(self.occ)
        self.occ.append(BOOL)
        t = self._infer(v)
        self.occ[slot] = t
        return t

    def _expect(self, got: Type, want: Type, v):
        try:
            unify(got, want)
        except Mismatch:
            raise SerializeError(f"ill-sorted formula {show(v)}: {zonk(got)} vs {zonk(want)}") \
                from None

    def _infer(self, v) -> Type:
        if not isinstance(v, Ctor):
            raise SerializeError(f"not a formula value: {v!r}")
        n, args, params = v.name, v.args, v.params
        if n == SMT_VAR:
            return params[1]
        if n == SMT_CONST:
            return BaseType(params[0].sort)
        if n == BV_CONST:
            return bv(params[0])
        if n == SMT_CTOR:
            adt, tys = self.prog.ctor_sig(params[0])
            m = {a: Meta(pre=True) for a in adt.params}
            for a, ft in zip(args, tys):
                self._expect(self.infer(a), erase_field(instantiate(ft, m)), v)
            return AdtType(adt.name, tuple(m[a] for a in adt.params))
        if n == SMT_UF:
            uf = self.prog.ufs[params[0]]
            for a, t in zip(args, uf.args):
                self._expect(self.infer(a), erase(t), v)
            return erase(uf.ret)
        if n in (SMT_IS, SMT_GET):
            adt, tys = self.prog.ctor_sig(params[0])
            m = {a: Meta(pre=True) for a in adt.params}
            self._expect(self.infer(args[0]), AdtType(adt.name, tuple(m[a] for a in adt.params)),
                         v)
            if n == SMT_IS:
                return BOOL
            return erase_field(instantiate(tys[params[1] - 1], m))
        if n in ("smt_forall", "smt_exists"):
            self.infer(args[0])
            self._expect(self.infer(args[1]), BOOL, v)
            for p in args[2].args:
                self.infer(p)
            return BOOL
        if n == "smt_let":
            xt = self.infer(args[0])
            self._expect(self.infer(args[1]), xt, v)
            return self.infer(args[2])
        if n in SIGS:
            arg_tys, res = SIGS[n]
            tv = set()
            for t in list(arg_tys) + [res]:
                tv |= _tvars(t)
            m = {a: Meta(pre=True, bv=(a == "$w")) for a in sorted(tv)}
            for a, t in zip(args, arg_tys):
                self._expect(self.infer(a), instantiate(t, m), v)
            return instantiate(res, m)
        raise SerializeError(f"unknown formula constructor {n}")


def _tvars(t: Type) -> set:
    if isinstance(t, TypeVar):
        return {t.name}
    if isinstance(t, AdtType):
        out = set()
        for a in t.args:
            out |= _tvars(a)
        return out
    return set()


def erase_field(t: Type) -> Type:
    from ..typecheck.infer import erase_pre
    return erase_pre(t)


class Serializer:
    def __init__(self, prog: Program, dialect: str = "z3"):
        self.prog = prog
        self.dialect = dialect

    # ------------------------------------------------------------ sorts
    def sort(self, t: Type, params: dict | None = None) -> str:
        t = prune(t)
        if isinstance(t, TypeVar):
            if params is not None and t.name in params:
                return params[t.name]
            raise SerializeError(f"unresolved sort variable {t}")
        if isinstance(t, BaseType):
            if t.name == "bool":
                return "Bool"
            if t.name == "string":
                return "String"
            return f"(_ BitVec {t.name[2:]})"
        if isinstance(t, AdtType):
            if t.name == "array" and t.name not in self.prog.adts:
                return f"(Array {self.sort(t.args[0], params)} {self.sort(t.args[1], params)})"
            if not t.args:
                return smt_name(t.name)
            return "(" + smt_name(t.name) + " " + " ".join(self.sort(a, params) for a in t.args) + ")"
        if isinstance(t, SymType):
            return self.sort(t.inner, params)
        raise SerializeError(f"type {t} has no SMT sort")

    # ------------------------------------------------------------ script
    def script(self, assertions: list, timeout_ms: Optional[int] = None,
               want_model: bool = False) -> Script:
        warnings: list[str] = []
        assertions = [drop_invalid_patterns(a, warnings) for a in assertions]
        sorts = _Sorts(self.prog)
        for a in assertions:
            t = sorts.infer(a)
            try:
                unify(t, BOOL)
            except Mismatch:
                raise SerializeError(f"assertion is not boolean: {show(a)}") from None
        for t in sorts.occ:
            default_metas(t)
        occ = [zonk(t) for t in sorts.occ]

        free: dict[str, tuple] = {}
        adts: set[str] = set()
        usorts: set[str] = set()
        ufs: set[str] = set()
        for t in occ:
            self._collect_sorts(t, adts, usorts)
        bodies = []
        cursor = iter(occ)
        for a in assertions:
            bodies.append(self.term(a, cursor, frozenset(), free, adts, usorts, ufs))
        for name in ufs:
            uf = self.prog.ufs[name]
            for t in list(uf.args) + [uf.ret]:
                self._collect_sorts(erase(t), adts, usorts)
        for _, _, t in free.values():
            self._collect_sorts(t, adts, usorts)
        self._close_adts(adts, usorts)

        lines = [PRODUCE_MODELS]
        if timeout_ms is not None:
            lines.append(f"(set-option :timeout {int(timeout_ms)})")
        lines.append("(set-logic ALL)")
        for s in sorted(usorts):
            lines.append(f"(declare-sort {smt_name(s)} {self.prog.usorts[s]})")
        if adts:
            lines.append(self._datatypes(sorted(adts)))
        for name in sorted(ufs):
            uf = self.prog.ufs[name]
            dom = " ".join(self.sort(erase(t)) for t in uf.args)
            lines.append(f"(declare-fun {smt_name(name)} ({dom}) {self.sort(erase(uf.ret))})")
        for mangled in sorted(free):
            lines.append(f"(declare-const {mangled} {self.sort(free[mangled][2])})")
        for b in bodies:
            lines.append(f"(assert {b})")
        lines.append("(check-sat)")
        if want_model:
            lines.append("(get-model)")
        text = "\n".join(lines) + "\n"
        fv = [(m, free[m][1], free[m][2]) for m in sorted(free)]
        return Script(text, fv, want_model, timeout_ms, warnings)

    def _collect_sorts(self, t: Type, adts: set, usorts: set):
        t = prune(t)
        if isinstance(t, AdtType):
            if t.name in self.prog.adts:
                adts.add(t.name)
            elif t.name in self.prog.usorts and t.name != "array":
                usorts.add(t.name)
            for a in t.args:
                self._collect_sorts(a, adts, usorts)
        elif isinstance(t, SymType):
            self._collect_sorts(t.inner, adts, usorts)

    def _close_adts(self, adts: set, usorts: set):
        todo = list(adts)
        while todo:
            d = todo.pop()
            for tys in self.prog.adts[d].ctors.values():
                for ft in tys:
                    found: set[str] = set()
                    self._collect_sorts(erase_field(ft), found, usorts)
                    for x in found - adts:
                        adts.add(x)
                        todo.append(x)

    def _datatypes(self, names: list[str]) -> str:
        heads, decls = [], []
        for d in names:
            adt = self.prog.adts[d]
            heads.append(f"({smt_name(d)} {len(adt.params)})")
            pmap = {p: f"T_{p}" for p in adt.params}
            ctors = []
            for c, tys in adt.ctors.items():
                fields = "".join(
                    f" ({smt_name(c)}!{i} {self.sort(erase_field(ft), pmap)})"
                    for i, ft in enumerate(tys, 1))
                ctors.append(f"({smt_name(c)}{fields})")
            body = "(" + " ".join(ctors) + ")"
            if adt.params:
                body = "(par (" + " ".join(pmap[p] for p in adt.params) + ") " + body + ")"
            decls.append(body)
        return "(declare-datatypes (" + " ".join(heads) + ") (" + " ".join(decls) + "))"

    # ------------------------------------------------------------ terms
    def term(self, v, cursor, bound: frozenset, free: dict, adts, usorts, ufs) -> str:
        t = next(cursor)
        n, args, params = v.name, v.args, v.params

        def sub(x, b=bound):
            return self.term(x, cursor, b, free, adts, usorts, ufs)

        if n == SMT_VAR:
            mangled = var_name(params[0], params[1])
            if mangled not in bound:
                free[mangled] = (mangled, v, params[1])
            return mangled
        if n == SMT_CONST:
            return const_literal(params[0])
        if n == BV_CONST:
            return bv_literal(params[1], params[0])
        if n == SMT_CTOR:
            c = smt_name(params[0])
            if not args:
                adt = self.prog.adts[self.prog.ctor_owner[params[0]]]
                if adt.params:
                    return f"(as {c} {self.sort(t)})"
                return c
            return "(" + c + " " + " ".join(sub(a) for a in args) + ")"
        if n == SMT_UF:
            ufs.add(params[0])
            f = smt_name(params[0])
            if not args:
                return f
            return "(" + f + " " + " ".join(sub(a) for a in args) + ")"
        if n == SMT_IS:
            return f"(is-{smt_name(params[0])} {sub(args[0])})"
        if n == SMT_GET:
            return f"({smt_name(params[0])}!{params[1]} {sub(args[0])})"
        if n in ("smt_forall", "smt_exists"):
            var, body, pats = args
            if not (isinstance(var, Ctor) and var.name == SMT_VAR):
                raise SerializeError("quantified variable must be an SMT variable")
            next(cursor)  # the binder occurrence
            mangled = var_name(var.params[0], var.params[1])
            inner = bound | {mangled}
            self._collect_sorts(var.params[1], adts, usorts)
            b = sub(body, inner)
            ps = [sub(p, inner) for p in pats.args]
            if ps:
                b = "(! " + b + "".join(f" :pattern ({p})" for p in ps) + ")"
            q = "forall" if n == "smt_forall" else "exists"
            return f"({q} (({mangled} {self.sort(var.params[1])})) {b})"
        if n == "smt_let":
            var, val, body = args
            if not (isinstance(var, Ctor) and var.name == SMT_VAR):
                raise SerializeError("let-bound name must be an SMT variable")
            next(cursor)
            mangled = var_name(var.params[0], var.params[1])
            vs = sub(val)
            return f"(let (({mangled} {vs})) {sub(body, bound | {mangled})})"
        op = OPS.get(n)
        if op is None:
            raise SerializeError(f"unknown formula constructor {n}")
        return "(" + op + " " + " ".join(sub(a) for a in args) + ")"


def const_literal(k: Const) -> str:
    if k.sort == "bool":
        return "true" if k.value else "false"
    if k.sort == "bv32":
        return bv_literal(k.value, 32)
    if k.sort == "bv64":
        return bv_literal(k.value, 64)
    if k.sort == "string":
        return quote_string(k.value)
    raise SerializeError(f"constant {k!r} has no SMT literal")


def bv_literal(value: int, width: int) -> str:
    return "#x" + format(value & ((1 << width) - 1), f"0{width // 4}x")
