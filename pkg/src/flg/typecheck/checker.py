"""Bimodal type checker for desugared programs.

Outside quotations the types ``t``, ``t smt`` and ``t sym`` are distinct.
Inside a quotation every subformula is typed by an *erased* pre-type together
with a kind (``smt`` or ``sym``): unquoting an expression of type tau yields
toSMT(tau), and a ``sym`` formula is accepted wherever an ``smt`` one is.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..diagnostics import Diagnostic, StaticError
from ..formulas import SIGS
from ..program import FunDef, Program
from ..syntax import (
    NOSPAN, Anon, Clause, EConst, ECall, ECtor, EFormula, EIf, ELet, EMatch, EOp, EPred,
    EQuote, ESmtVar, EUnquote, EVar, EqExpr, EqTerm, NegAtom, NegEq, PConst, PCtor, PosAtom,
    PVar, PWild, Span, Wildcard,
)
from ..terms import SMT_CONST, SMT_CTOR, SMT_GET, SMT_IS, SMT_UF, SMT_VAR, Const, Ctor, Var
from ..types import (
    BOOL, BV32, MODEL, STRING, AdtType, BaseType, ModelType, SmtType, SymType, Type, TypeVar,
    bv, erase, list_of, option_of, tuple_of,
)
from .exhaustive import missing_case
from .infer import (
    Meta, Mismatch, default_metas, erase_pre, has_model, has_tvar, has_unresolved, instantiate,
    prune, unify, zonk,
)
from .wellformed import EXP, SMT, check_well_formed


class TypeErr(Exception):
    def __init__(self, rule: str, msg: str, span: Span):
        self.rule = rule
        self.msg = msg
        self.span = span
        super().__init__(f"{rule}: {msg}")


def _t(t: Type) -> str:
    from ..parser.printer import show_type
    z = zonk(t)
    try:
        return show_type(z)
    except Exception:
        return str(z)


def _bool_smt_list():
    return list_of(SmtType(BOOL))


BUILTIN_SIGS = {
    "is_sat": ((SmtType(BOOL),), BOOL),
    "is_valid": ((SmtType(BOOL),), BOOL),
    "is_sat_opt": ((_bool_smt_list(), option_of(BV32)), option_of(BOOL)),
    "get_model": ((_bool_smt_list(), option_of(BV32)), option_of(MODEL)),
    "query_model": ((SymType(TypeVar("a")), MODEL), option_of(TypeVar("a"))),
}


@dataclass
class _Deferred:
    source: Type  # expression type being unquoted
    target: Meta  # erased pre-type it must agree with
    kind: str
    span: Span


class Checker:
    def __init__(self, prog: Program):
        self.prog = prog
        self.diags: list[Diagnostic] = []
        self.deferred: list[_Deferred] = []
        self.bv_metas: list[tuple[Meta, Span]] = []
        self.sigs: dict[str, tuple[list[Type], Type]] = {}
        self.known = {n: len(a.params) for n, a in prog.adts.items()}
        self.known.update(prog.usorts)

    # ------------------------------------------------------------ entry
    def run(self) -> list[Diagnostic]:
        p = self.prog
        self.check_decls()
        for name in sorted(p.funs):
            f = p.funs[name]
            self.sigs[name] = ([t if t is not None else Meta() for t in f.param_types], f.ret)
        for name in sorted(p.funs):
            self.guard(self.check_fun, p.funs[name])
        for c in p.clauses:
            self.guard(self.check_clause, c)
        self.guard(self.finish)
        for name, f in p.funs.items():
            ps, ret = self.sigs[name]
            f.param_types = [zonk(t) for t in ps]
        return sorted(self.diags, key=Diagnostic.sort_key)

    def guard(self, fn, *args):
        try:
            fn(*args)
        except TypeErr as e:
            self.diags.append(Diagnostic("error", e.rule, e.msg, e.span))

    def warn(self, rule: str, msg: str, span: Span):
        self.diags.append(Diagnostic("warning", rule, msg, span))

    # ------------------------------------------------------------ declarations
    def check_decls(self):
        p = self.prog
        for name, adt in p.adts.items():
            if adt.builtin:
                continue
            for c, tys in adt.ctors.items():
                for t in tys:
                    bad = check_well_formed(t, EXP, frozenset(adt.params), self.known)
                    if bad:
                        self.diags.append(Diagnostic("error", bad[0],
                                                     f"constructor {c}: {bad[1]}", adt.span))
        for r in p.rels.values():
            for t in r.types:
                bad = check_well_formed(t, EXP, frozenset(), self.known)
                if bad:
                    self.diags.append(Diagnostic("error", bad[0], f"relation {r.name}: {bad[1]}",
                                                 r.span))
        for u in p.ufs.values():
            for t in list(u.args) + [u.ret]:
                bad = check_well_formed(t, SMT, frozenset(), self.known)
                if bad or isinstance(t, ModelType):
                    msg = bad[1] if bad else "model is not allowed"
                    self.diags.append(Diagnostic("error", "Φ-UFun",
                                                 f"uninterpreted function {u.name}: {msg}", u.span))

    # ------------------------------------------------------------ functions
    def check_fun(self, f: FunDef):
        ps, ret = self.sigs[f.name]
        tv = set()
        for t in ps + [ret]:
            if not isinstance(t, Meta):
                from ..types import type_vars
                tv |= set(type_vars(t))
        for n, t in zip(f.params, ps):
            if isinstance(t, Meta):
                continue
            bad = check_well_formed(t, EXP, frozenset(tv), self.known)
            if bad:
                raise TypeErr(bad[0], f"parameter {n} of {f.name}: {bad[1]}", f.span)
        bad = check_well_formed(ret, EXP, frozenset(tv), self.known)
        if bad:
            raise TypeErr(bad[0], f"return type of {f.name}: {bad[1]}", f.span)
        env = dict(zip(f.params, ps))
        t = self.infer(f.body, env)
        try:
            unify(t, ret)
        except Mismatch:
            raise TypeErr("F-Fun", f"body of {f.name} has type {_t(t)}, but its declared return "
                          f"type is {_t(ret)}", f.span) from None

    # ------------------------------------------------------------ expressions
    def infer(self, e, env: dict) -> Type:
        sp = getattr(e, "span", NOSPAN)
        if isinstance(e, EVar):
            if e.name not in env:
                raise TypeErr("e-Var", f"unbound variable {e.name}", sp)
            return env[e.name]
        if isinstance(e, EConst):
            return BaseType(e.value.sort)
        if isinstance(e, ECtor):
            return self.infer_ctor(e, env)
        if isinstance(e, ECall):
            return self.infer_call(e, env)
        if isinstance(e, EPred):
            return self.infer_pred(e, env)
        if isinstance(e, EOp):
            return self.infer_op(e, env)
        if isinstance(e, EIf):
            c = self.infer(e.cond, env)
            self.expect(c, BOOL, "e-Ite", "condition", sp)
            a = self.infer(e.then, env)
            b = self.infer(e.other, env)
            try:
                unify(a, b)
            except Mismatch:
                raise TypeErr("e-Ite", f"branches have types {_t(a)} and {_t(b)}", sp) from None
            return a
        if isinstance(e, ELet):
            v = self.infer(e.value, env)
            inner = dict(env)
            inner[e.pat.name] = v
            return self.infer(e.body, inner)
        if isinstance(e, EMatch):
            return self.infer_match(e, env)
        if isinstance(e, EQuote):
            _, pre = self.formula(e.formula, env)
            return SmtType(pre)
        if isinstance(e, ESmtVar):
            return SymType(self.smt_var_type(e, env))
        if isinstance(e, (EFormula, EUnquote)):
            raise TypeErr("φ-Ctor", "formula outside a quotation", sp)
        raise TypeErr("e-Var", f"cannot type {type(e).__name__}", sp)

    def expect(self, got: Type, want: Type, rule: str, what: str, sp: Span):
        try:
            unify(got, want)
        except Mismatch:
            raise TypeErr(rule, f"{what} has type {_t(got)}, expected {_t(want)}", sp) from None

    def infer_ctor(self, e: ECtor, env) -> Type:
        p = self.prog
        if e.name not in p.ctor_owner:
            raise TypeErr("e-Ctor", f"unknown constructor {e.name}", e.span)
        adt, tys = p.ctor_sig(e.name)
        if len(tys) != len(e.args):
            raise TypeErr("e-Ctor", f"constructor {_ctor_name(e.name)} expects {len(tys)} "
                          f"argument(s), got {len(e.args)}", e.span)
        mapping = {a: Meta() for a in adt.params}
        for i, (a, t) in enumerate(zip(e.args, tys)):
            got = self.infer(a, env)
            self.expect(got, instantiate(t, mapping), "e-Ctor",
                        f"argument {i + 1} of {_ctor_name(e.name)}", getattr(a, "span", e.span))
        return AdtType(adt.name, tuple(mapping[a] for a in adt.params))

    def signature(self, name: str, sp: Span):
        if name in BUILTIN_SIGS:
            ps, ret = BUILTIN_SIGS[name]
            ps = list(ps)
        elif name in self.sigs:
            ps, ret = self.sigs[name]
        else:
            raise TypeErr("e-Fun", f"unknown function {name}", sp)
        from ..types import type_vars
        tv = set()
        for t in list(ps) + [ret]:
            tv |= set(type_vars(prune(t))) if not isinstance(prune(t), Meta) else set()
        mapping = {a: Meta(pre=(name == "query_model")) for a in sorted(tv)}
        return [instantiate(t, mapping) for t in ps], instantiate(ret, mapping)

    def infer_call(self, e: ECall, env) -> Type:
        ps, ret = self.signature(e.name, e.span)
        shown = e.name.lstrip("$")
        if len(ps) != len(e.args):
            raise TypeErr("e-Fun", f"function {shown} expects {len(ps)} argument(s), got "
                          f"{len(e.args)}", e.span)
        for i, (a, t) in enumerate(zip(e.args, ps)):
            try:
                got = self.infer(a, env)
            except TypeErr as inner:
                raise TypeErr("e-Fun", f"argument {i + 1} of {shown}: {inner.rule}: {inner.msg}",
                              inner.span) from None
            self.expect(got, t, "e-Fun", f"argument {i + 1} of {shown}", getattr(a, "span", e.span))
        return ret

    def infer_pred(self, e: EPred, env) -> Type:
        p = self.prog
        rel = p.rels.get(e.name)
        if rel is None:
            raise TypeErr("e-Rel", f"unknown relation {e.name}", e.span)
        if len(rel.types) != len(e.args):
            raise TypeErr("e-Rel", f"relation {e.name} has arity {len(rel.types)}, got "
                          f"{len(e.args)} argument(s)", e.span)
        wild = []
        for i, (a, t) in enumerate(zip(e.args, rel.types)):
            if isinstance(a, Wildcard):
                wild.append(t)
                continue
            if isinstance(a, Anon):
                continue
            try:
                got = self.infer(a, env)
            except TypeErr as inner:
                raise TypeErr("e-Rel", f"argument {i + 1} of {e.name}: {inner.rule}: {inner.msg}",
                              inner.span) from None
            self.expect(got, t, "e-Rel", f"argument {i + 1} of {e.name}", e.span)
        if not wild:
            return BOOL
        if len(wild) == 1:
            return list_of(wild[0])
        return list_of(tuple_of(*wild))

    def infer_op(self, e: EOp, env) -> Type:
        op, sp = e.op, e.span
        args = [self.infer(a, env) for a in e.args]
        if op in ("+", "-", "*", "/", "%"):
            self.expect(args[1], args[0], "e-Op", f"right operand of {op}", sp)
            self.require_bv(args[0], op, sp)
            return args[0]
        if op == "neg":
            self.require_bv(args[0], "-", sp)
            return args[0]
        if op in ("<", "<=", ">", ">="):
            self.expect(args[1], args[0], "e-Op", f"right operand of {op}", sp)
            self.require_bv(args[0], op, sp)
            return BOOL
        if op in ("=", "!="):
            self.expect(args[1], args[0], "e-Op", f"right operand of {op}", sp)
            return BOOL
        if op in ("&&", "||"):
            self.expect(args[0], BOOL, "e-Op", f"left operand of {op}", sp)
            self.expect(args[1], BOOL, "e-Op", f"right operand of {op}", sp)
            return BOOL
        if op == "!":
            self.expect(args[0], BOOL, "e-Op", "operand of !", sp)
            return BOOL
        raise TypeErr("e-Op", f"unknown operator {op}", sp)

    def require_bv(self, t: Type, op: str, sp: Span):
        t = prune(t)
        if isinstance(t, Meta):
            m = Meta(bv=True)
            unify(t, m)
            self.bv_metas.append((m, sp))
            return
        if not (isinstance(t, BaseType) and t.name in ("bv32", "bv64")):
            raise TypeErr("e-Op", f"operator {op} needs bit-vector operands, got {_t(t)}", sp)

    def infer_match(self, e: EMatch, env) -> Type:
        st = self.infer(e.scrut, env)
        result = None
        for pat, body in e.arms:
            inner = dict(env)
            self.check_pattern(pat, st, inner)
            bt = self.infer(body, inner)
            if result is None:
                result = bt
            else:
                try:
                    unify(bt, result)
                except Mismatch:
                    raise TypeErr("e-Match", f"match arms have types {_t(result)} and {_t(bt)}",
                                  getattr(pat, "span", e.span)) from None
        self.pending_matches.append((e, st))
        return result

    pending_matches: list = []

    def check_pattern(self, pat, t: Type, env: dict):
        sp = getattr(pat, "span", NOSPAN)
        if isinstance(pat, PWild):
            return
        if isinstance(pat, PVar):
            env[pat.name] = t
            return
        if isinstance(pat, PConst):
            self.expect(BaseType(pat.value.sort), t, "e-Match", "pattern constant", sp)
            return
        assert isinstance(pat, PCtor)
        adt, tys = self.prog.ctor_sig(pat.name)
        if len(tys) != len(pat.args):
            raise TypeErr("e-Match", f"constructor {_ctor_name(pat.name)} expects {len(tys)} "
                          f"argument(s) in pattern", sp)
        mapping = {a: Meta() for a in adt.params}
        self.expect(AdtType(adt.name, tuple(mapping[a] for a in adt.params)), t, "e-Match",
                    f"pattern {_ctor_name(pat.name)}", sp)
        for a, ft in zip(pat.args, tys):
            self.check_pattern(a, instantiate(ft, mapping), env)

    # ------------------------------------------------------------ formulas
    def smt_var_type(self, e: ESmtVar, env) -> Type:
        self.infer(e.name, env)
        bad = check_well_formed(e.type, SMT, frozenset(), self.known)
        if bad or isinstance(e.type, ModelType):
            raise TypeErr("c-SMT-Var", f"SMT variable type {_t(e.type)} is not SMT-representable"
                          + (f" ({bad[1]})" if bad else ""), e.span)
        return erase(e.type)

    def formula(self, f, env) -> tuple[str, Type]:
        """Type a formula: returns (kind, erased pre-type)."""
        sp = getattr(f, "span", NOSPAN)
        if isinstance(f, EUnquote):
            t = prune(self.infer(f.expr, env))
            if isinstance(t, SymType):
                return "sym", erase_pre(t.inner)
            if has_model(t):
                raise TypeErr("φ-Unquote", f"a value of type {_t(t)} cannot appear in a formula",
                              sp)
            if has_tvar(t):
                raise TypeErr("φ-Unquote", f"toSMT is undefined on {_t(t)} (type variable)", sp)
            if has_unresolved(t):
                target = Meta(pre=True)
                self.deferred.append(_Deferred(t, target, "smt", sp))
                return "smt", target
            return "smt", erase_pre(t)
        if isinstance(f, ESmtVar):
            return "sym", self.smt_var_type(f, env)
        if isinstance(f, EFormula):
            return self.formula_ctor(f, env)
        raise TypeErr("φ-Unquote", f"unexpected {type(f).__name__} in formula", sp)

    def fexpect(self, got: Type, want: Type, what: str, sp: Span, rule: str = "φ-Ctor"):
        try:
            unify(got, want)
        except Mismatch:
            raise TypeErr(rule, f"{what} is a {_t(got)} formula, expected {_t(want)}", sp) from None

    def formula_ctor(self, f: EFormula, env) -> tuple[str, Type]:
        p, sp, n = self.prog, f.span, f.ctor
        if n in SIGS:
            arg_tys, res = SIGS[n]
            if len(arg_tys) != len(f.args):
                raise TypeErr("φ-Ctor", f"{n} expects {len(arg_tys)} argument(s)", sp)
            from ..types import type_vars
            tv = set()
            for t in list(arg_tys) + [res]:
                tv |= set(type_vars(t))
            mapping = {a: Meta(pre=True, bv=(a == "$w")) for a in sorted(tv)}
            for a in mapping.values():
                if a.bv:
                    self.bv_metas.append((a, sp))
            if n == "smt_eq" and f.params:
                unify(mapping["a"], erase(f.params[0]))
            for i, (a, t) in enumerate(zip(f.args, arg_tys)):
                _, at = self.formula(a, env)
                self.fexpect(at, instantiate(t, mapping), f"argument {i + 1} of {n}",
                             getattr(a, "span", sp))
            return "smt", instantiate(res, mapping)
        if n == SMT_CTOR:
            c = f.params[0]
            adt, tys = p.ctor_sig(c)
            if len(tys) != len(f.args):
                raise TypeErr("c-SMT-Ctor", f"constructor {_ctor_name(c)} expects {len(tys)} "
                              f"argument(s), got {len(f.args)}", sp)
            mapping = {a: Meta(pre=True) for a in adt.params}
            for i, (a, t) in enumerate(zip(f.args, tys)):
                want = erase_pre(instantiate(t, mapping))
                if has_model(want):
                    raise TypeErr("c-SMT-Ctor", f"constructor {c} has a model field", sp)
                _, at = self.formula(a, env)
                self.fexpect(at, want, f"argument {i + 1} of {_ctor_name(c)}",
                             getattr(a, "span", sp), "c-SMT-Ctor")
            return "smt", AdtType(adt.name, tuple(mapping[a] for a in adt.params))
        if n == SMT_UF:
            uf = p.ufs[f.params[0]]
            if len(uf.args) != len(f.args):
                raise TypeErr("c-SMT-UF", f"{uf.name} expects {len(uf.args)} argument(s)", sp)
            for i, (a, t) in enumerate(zip(f.args, uf.args)):
                _, at = self.formula(a, env)
                self.fexpect(at, erase(t), f"argument {i + 1} of {uf.name}", sp, "c-SMT-UF")
            return "smt", erase(uf.ret)
        if n in (SMT_IS, SMT_GET):
            c = f.params[0]
            adt, tys = p.ctor_sig(c)
            mapping = {a: Meta(pre=True) for a in adt.params}
            _, at = self.formula(f.args[0], env)
            rule = "c-SMT-Is" if n == SMT_IS else "c-SMT-Get"
            self.fexpect(at, AdtType(adt.name, tuple(mapping[a] for a in adt.params)),
                         f"argument of #{'is_' + c if n == SMT_IS else f'{c}_{f.params[1]}'}",
                         sp, rule)
            if n == SMT_IS:
                return "smt", BOOL
            return "smt", erase_pre(instantiate(tys[f.params[1] - 1], mapping))
        if n in ("smt_forall", "smt_exists"):
            var, body, pats = f.args
            kind, _ = self.formula(var, env)
            if kind != "sym":
                raise TypeErr("c-SMT-Forall", "quantified variable must be an SMT variable", sp)
            _, bt = self.formula(body, env)
            self.fexpect(bt, BOOL, "quantifier body", sp, "c-SMT-Forall")
            for pat in pats.args:
                self.formula(pat, env)
            return "smt", BOOL
        if n == "smt_let":
            if len(f.args) != 3:
                raise TypeErr("c-SMT-Let", "smt_let expects 3 arguments", sp)
            kind, xt = self.formula(f.args[0], env)
            if kind != "sym":
                raise TypeErr("c-SMT-Let", "let-bound name must be an SMT variable", sp)
            _, vt = self.formula(f.args[1], env)
            self.fexpect(vt, xt, "let-bound value", sp, "c-SMT-Let")
            _, bt = self.formula(f.args[2], env)
            return "smt", bt
        if n == "bv_const":
            t = self.infer(f.args[0], env)
            self.expect(t, BV32, "c-SMT-BvConst", "bv_const argument", sp)
            return "smt", bv(f.params[0])
        raise TypeErr("φ-Ctor", f"unknown formula constructor {n}", sp)

    # ------------------------------------------------------------ clauses
    def check_clause(self, c: Clause):
        p = self.prog
        gamma: dict[str, Type] = {}
        for prem in c.body:
            sp = prem.span if prem.span.line else c.span
            if isinstance(prem, (PosAtom, NegAtom)):
                rule = "P-PosAtom" if isinstance(prem, PosAtom) else "P-NegAtom"
                rel = p.rels.get(prem.pred)
                if rel is None:
                    raise TypeErr(rule, f"undeclared relation {prem.pred}", sp)
                if len(rel.types) != len(prem.vars):
                    raise TypeErr(rule, f"relation {prem.pred} has arity {len(rel.types)}, used "
                                  f"with {len(prem.vars)} argument(s)", sp)
                for x, t in zip(prem.vars, rel.types):
                    if x in gamma:
                        self.expect(gamma[x], t, rule, f"variable {_v(x)}", sp)
                    elif isinstance(prem, NegAtom):
                        raise TypeErr(rule, f"variable {_v(x)} in negated atom {prem.pred} must be "
                                      "bound by an earlier premise", sp)
                    else:
                        gamma[x] = t
            elif isinstance(prem, EqExpr):
                t = self.clause_expr(prem.expr, gamma, "P-Eq-FB", sp)
                if prem.var in gamma:
                    self.expect(t, gamma[prem.var], "P-Eq-FB", f"variable {_v(prem.var)}", sp)
                else:
                    gamma[prem.var] = t
            elif isinstance(prem, NegEq):
                if prem.var not in gamma:
                    raise TypeErr("P-NegEq", f"variable {_v(prem.var)} must be bound before !=", sp)
                t = self.clause_expr(prem.expr, gamma, "P-NegEq", sp)
                self.expect(t, gamma[prem.var], "P-NegEq", "right side of !=", sp)
            elif isinstance(prem, EqTerm):
                self.check_eq_term(prem, gamma, sp)
            else:
                raise TypeErr("H-Clause", f"unknown premise {prem!r}", sp)
        rel = p.rels[c.head]
        if len(rel.types) != len(c.head_vars):
            raise TypeErr("H-Clause", f"relation {c.head} has arity {len(rel.types)}, head has "
                          f"{len(c.head_vars)} argument(s)", c.span)
        for i, (x, t) in enumerate(zip(c.head_vars, rel.types)):
            if x not in gamma:
                what = f"variable {x}" if not x.startswith("$") else f"argument {i + 1}"
                raise TypeErr("H-Clause", f"range restriction: head {what} of {c.head} is not "
                              "bound by the body", c.span)
            self.expect(gamma[x], t, "H-Clause", f"head argument {i + 1} of {c.head}", c.span)
        self.prog.rule_var_types[c.index] = gamma

    def clause_expr(self, e, gamma, rule, sp) -> Type:
        try:
            return self.infer(e, gamma)
        except TypeErr as inner:
            if inner.rule == "e-Var":
                raise TypeErr(rule, f"{inner.msg} (variables must be bound by an earlier premise)",
                              inner.span) from None
            raise

    def check_eq_term(self, prem: EqTerm, gamma: dict, sp: Span):
        from ..terms import variables
        free = variables(prem.term) - set(gamma)
        rule = "P-EqSMT-BF" if prem.smt else "P-EqCtor-BF"
        if prem.var not in gamma:
            if free:
                names = ", ".join(sorted(_v(x) for x in free | {prem.var}))
                raise TypeErr(rule, f"neither side of the equation is bound ({names} all unbound)",
                              sp)
            gamma[prem.var] = self.term_type(prem.term, gamma, prem.smt, sp, bind=False)
            return
        t = self.term_type(prem.term, gamma, prem.smt, sp, bind=True)
        self.expect(t, gamma[prem.var], rule, f"pattern for {_v(prem.var)}", sp)

    def term_type(self, u, gamma: dict, smt: bool, sp: Span, bind: bool) -> Type:
        if smt:
            _, pre = self.smt_term(u, gamma, sp)
            return SmtType(pre)
        if isinstance(u, Var):
            if u.name not in gamma:
                m = Meta()
                gamma[u.name] = m
                return m
            return gamma[u.name]
        if isinstance(u, Const):
            return BaseType(u.sort)
        assert isinstance(u, Ctor)
        adt, tys = self.prog.ctor_sig(u.name)
        if len(tys) != len(u.args):
            raise TypeErr("P-EqCtor-BF", f"constructor {_ctor_name(u.name)} expects {len(tys)} "
                          "argument(s)", sp)
        mapping = {a: Meta() for a in adt.params}
        for i, (a, ft) in enumerate(zip(u.args, tys)):
            at = self.term_type(a, gamma, False, sp, bind)
            self.expect(at, instantiate(ft, mapping), "P-EqCtor-BF",
                        f"argument {i + 1} of {_ctor_name(u.name)}", sp)
        return AdtType(adt.name, tuple(mapping[a] for a in adt.params))

    def smt_term(self, u, gamma, sp) -> tuple[str, Type]:
        """Type a c^SMT pattern; free variables receive formula types."""
        if isinstance(u, Var):
            if u.name in gamma:
                t = prune(gamma[u.name])
                if isinstance(t, (SmtType, SymType)):
                    return "smt", erase_pre(t.inner)
                return "smt", erase_pre(t)
            m = Meta(pre=True)
            gamma[u.name] = SmtType(m)
            return "smt", m
        assert isinstance(u, Ctor)
        if u.name == SMT_VAR:
            return "sym", u.params[1]
        if u.name == SMT_CONST:
            return "smt", BaseType(u.params[0].sort)
        # rebuild as a formula node whose leaves are pre-typed placeholders
        leaves = {}

        def to_formula(x):
            if isinstance(x, Ctor) and x.name not in (SMT_VAR, SMT_CONST):
                return EFormula(x.name, x.params, tuple(to_formula(a) for a in x.args), sp)
            key = f"$leaf{len(leaves)}"
            kind, t = self.smt_term(x, gamma, sp)
            leaves[key] = SymType(t) if kind == "sym" else SmtType(t)
            return EUnquote(EVar(key, sp), sp)

        f = to_formula(u)
        env = dict(gamma)
        env.update(leaves)
        try:
            return self.formula(f, env)
        except TypeErr as e:
            raise TypeErr("P-EqSMT-BF", f"{e.rule}: {e.msg}", sp) from None

    # ------------------------------------------------------------ finishing
    def finish(self):
        # unquoted expressions whose type was unknown at the time
        for d in self.deferred:
            t = prune(d.source)
            if isinstance(t, SymType):
                src = erase_pre(t.inner)
            elif has_model(t):
                raise TypeErr("φ-Unquote", f"a value of type {_t(t)} cannot appear in a formula",
                              d.span)
            else:
                src = erase_pre(t)
            try:
                unify(src, d.target)
            except Mismatch:
                raise TypeErr("φ-Unquote", f"unquoted value of type {_t(t)} used as a "
                              f"{_t(d.target)} formula", d.span) from None
        for m, sp in self.bv_metas:
            t = prune(m)
            if isinstance(t, Meta):
                t.ref = BV32
        for e, st in self.pending_matches:
            miss = missing_case(self.prog, [pat for pat, _ in e.arms], zonk(st))
            if miss is not None:
                self.warn("e-Match", f"match is not exhaustive (e.g. {miss} is not covered)",
                          e.span)
        for sig in self.sigs.values():
            for t in sig[0]:
                default_metas(t)
        for g in self.prog.rule_var_types.values():
            for x in list(g):
                default_metas(g[x])
                g[x] = zonk(g[x])


def _ctor_name(c: str) -> str:
    if c.startswith("$rec_"):
        return "record " + c[5:]
    if c.startswith("$tuple"):
        return f"{c[6:]}-tuple"
    return c


def _v(x: str) -> str:
    return "(generated)" if x.startswith("$") else x


def check_program(prog: Program) -> list[Diagnostic]:
    """Type-check ``prog`` in place; returns all diagnostics (errors and warnings)."""
    c = Checker(prog)
    c.pending_matches = []
    diags = c.run()
    if any(d.severity == "error" for d in diags):
        raise StaticError(diags)
    return diags
