"""Lower the surface tree to the core program.

* resolves names (variable / constructor / function / relation / uninterpreted
  function) and type placeholders, expanding aliases;
* compiles records to single-constructor data types plus getter functions;
* lifts ``let fun`` to top-level functions over their captured variables;
* makes implicit unquotes explicit and maps formula operators to their named
  constructors inside quotations;
* normalizes clause bodies: atoms over variables only, equalities binding a
  single variable, preserving left-to-right order.
"""
from __future__ import annotations

from ..diagnostics import Diagnostic, StaticError
from ..formulas import OPERATORS, SIGS, USER_NAMES
from ..program import AdtDecl, FunDef, Program, Relation, UFun, builtin_adts
from ..syntax import (
    NOSPAN, Anon, Clause, EApp, EConst, ECall, ECtor, EFormula, EIf, ELet, ELetFun, EMatch,
    EOp, EPred, EQuote, ERecord, ERecordUpdate, ESmtVar, EUnquote, EVar, EqExpr, EqTerm,
    FunDecl, NegAtom, NegEq, PConst, PCtor, PosAtom, PVar, PWild, RelDecl, SClause,
    SortDecl, SourceProgram, Span, TypeDecl, UfDecl, Wildcard,
)
from ..terms import (
    FALSE, SMT_CONST, SMT_CTOR, SMT_GET, SMT_IS, SMT_UF, SMT_VAR, TRUE, Const, Ctor, Var,
    variables,
)
from ..types import (
    BOOL, BV32, BV64, MODEL, STRING, AdtType, BaseType, ModelType, SmtType, SymType, Type,
    TypeVar, erase,
)

BUILTIN_FUNS = frozenset({"is_sat", "is_valid", "is_sat_opt", "get_model", "query_model"})
ML_OPS = frozenset({"+", "-", "*", "/", "%", "<", "<=", ">", ">=", "=", "!=", "&&", "||", "!", "neg"})
RESERVED_TYPES = {"bool": BOOL, "string": STRING, "i32": BV32, "i64": BV64}


class _Errors:
    def __init__(self):
        self.items: list[Diagnostic] = []

    def add(self, rule: str, msg: str, span: Span):
        self.items.append(Diagnostic("error", rule, msg, span))

    def raise_if_any(self):
        if self.items:
            raise StaticError(sorted(self.items, key=Diagnostic.sort_key))


class _Abort(Exception):
    pass


def desugar(src: SourceProgram) -> Program:
    return Desugarer(src).run()


def resolve_type_in(prog: Program, t: Type) -> Type:
    """Resolve a parsed type against an already desugared program.

    Raises ValueError naming the problem when the type does not resolve.
    """
    d = Desugarer(SourceProgram(prog.path, "", []))
    d.prog = prog
    try:
        return d.resolve_type(t, None, Span(0, 0, prog.path))
    except _Abort:
        raise ValueError(d.errs.items[0].message) from None


class Desugarer:
    def __init__(self, src: SourceProgram):
        self.src = src
        self.prog = Program(path=src.path)
        self.errs = _Errors()
        self.field_owner: dict[str, list[str]] = {}  # field -> record types
        self.fresh = 0
        self.lift_count = 0
        self.anon_hook = None  # set while lowering clause premises

    # ------------------------------------------------------------ driver
    def fail(self, rule: str, msg: str, span: Span):
        self.errs.add(rule, msg, span)
        raise _Abort()

    def guard(self, fn, *args):
        try:
            return fn(*args)
        except _Abort:
            return None

    def run(self) -> Program:
        p = self.prog
        for adt in builtin_adts():
            p.adts[adt.name] = adt
            for c in adt.ctors:
                p.ctor_owner[c] = adt.name
        p.usorts["array"] = 2
        decls = self.src.decls
        types = [d for d in decls if isinstance(d, TypeDecl)]
        sorts = [d for d in decls if isinstance(d, SortDecl)]
        for d in sorts:
            self.guard(self.declare_sort, d)
        self.guard(self.declare_types, types)
        self.errs.raise_if_any()
        for d in decls:
            if isinstance(d, RelDecl):
                self.guard(self.declare_rel, d)
            elif isinstance(d, UfDecl):
                self.guard(self.declare_uf, d)
        fundecls = [d for d in decls if isinstance(d, FunDecl)]
        for d in fundecls:
            if d.name in p.funs or d.name in BUILTIN_FUNS or d.name in USER_NAMES:
                self.errs.add("names", f"duplicate or reserved function name {d.name}", d.span)
                continue
            p.funs[d.name] = FunDef(d.name, [n for n, _ in d.params], [None] * len(d.params),
                                    None, d.body, d.span)
        clauses = [d for d in decls if isinstance(d, SClause)]
        for c in clauses:
            if c.head not in p.rels and not c.args:
                p.rels[c.head] = Relation(c.head, (), "output", c.span, implicit=True)
        self.errs.raise_if_any()
        # resolve function signatures and bodies
        for d in fundecls:
            self.guard(self.lower_fun, d)
        for i, c in enumerate(clauses):
            cl = self.guard(self.lower_clause, c)
            if cl is not None:
                cl.index = i
                p.clauses.append(cl)
        self.errs.raise_if_any()
        return p

    # ------------------------------------------------------------ types
    def declare_sort(self, d: SortDecl):
        if d.name in self.prog.adts or d.name in self.prog.usorts or d.name in RESERVED_TYPES:
            self.fail("types", f"duplicate type name {d.name}", d.span)
        self.prog.usorts[d.name] = len(d.params)

    def declare_types(self, decls: list[TypeDecl]):
        p = self.prog
        known = set(p.adts) | set(p.usorts) | set(RESERVED_TYPES) | {"smt", "sym", "model"}
        # single-name bodies: alias if the name is a type, else a nullary constructor
        names = {d.name for d in decls}
        for d in decls:
            if d.name in known:
                self.errs.add("types", f"duplicate type name {d.name}", d.span)
            if d.alias is not None and isinstance(d.alias, AdtType) and not d.alias.args \
                    and d.alias.name not in known and d.alias.name not in names:
                d.ctors, d.alias = [(d.alias.name, [])], None
        for d in decls:
            if d.alias is not None:
                p.aliases[d.name] = (tuple(d.params), d.alias)
            elif d.record is not None:
                ctor = f"$rec_{d.name}"
                p.adts[d.name] = AdtDecl(d.name, tuple(d.params), {}, span=d.span)
                p.records[ctor] = tuple(f for f, _ in d.record)
                p.record_types[d.name] = ctor
                seen = set()
                for f, _ in d.record:
                    if f in seen:
                        self.errs.add("records", f"duplicate field {f} in record {d.name}", d.span)
                    seen.add(f)
                    self.field_owner.setdefault(f, []).append(d.name)
            else:
                p.adts[d.name] = AdtDecl(d.name, tuple(d.params), {}, span=d.span)
        self.errs.raise_if_any()
        self.check_alias_cycles()
        for d in decls:
            if d.alias is not None:
                continue
            adt = p.adts[d.name]
            scope = set(d.params)
            if d.record is not None:
                fields = [(f, self.guard(self.resolve_type, t, scope, d.span)) for f, t in d.record]
                ctor = p.record_types[d.name]
                adt.ctors[ctor] = tuple(t for _, t in fields)
                p.ctor_owner[ctor] = d.name
                for i, (f, t) in enumerate(fields):
                    self.add_getter(d, ctor, len(fields), i, f, t)
                continue
            for c, args in d.ctors:
                if c in p.ctor_owner:
                    self.errs.add("types", f"constructor {c} already belongs to type "
                                  f"{p.ctor_owner[c]}", d.span)
                    continue
                if c in USER_NAMES or c in BUILTIN_FUNS:
                    self.errs.add("types", f"reserved constructor name {c}", d.span)
                    continue
                tys = tuple(self.guard(self.resolve_type, t, scope, d.span) for t in args)
                adt.ctors[c] = tys
                p.ctor_owner[c] = d.name
            used = set()
            for tys in adt.ctors.values():
                for t in tys:
                    if t is not None:
                        used |= _tvars(t)
            for a in d.params:
                if a not in used:
                    self.errs.add("types", f"phantom type parameter '{a} in {d.name}", d.span)
        self.errs.raise_if_any()

    def check_alias_cycles(self):
        aliases = self.prog.aliases

        def refs(t, acc):
            if isinstance(t, AdtType):
                if t.name in aliases:
                    acc.add(t.name)
                for a in t.args:
                    refs(a, acc)
            return acc

        state: dict[str, int] = {}

        def visit(n, path):
            if state.get(n) == 2:
                return
            if state.get(n) == 1:
                self.fail("types", "cyclic type alias " + " -> ".join(path + [n]), NOSPAN)
            state[n] = 1
            for m in sorted(refs(aliases[n][1], set())):
                visit(m, path + [n])
            state[n] = 2

        for n in sorted(aliases):
            visit(n, [])

    def add_getter(self, d: TypeDecl, ctor: str, n: int, i: int, field: str, t: Type):
        p = self.prog
        if field in p.funs:
            self.errs.add("records", f"field getter {field} clashes with another function", d.span)
            return
        args = tuple(PVar(f"$f{j}") if j == i else PWild() for j in range(n))
        body = EMatch(EVar("$r"), ((PCtor(ctor, args), EVar(f"$f{i}")),), d.span)
        rt = AdtType(d.name, tuple(TypeVar(a) for a in d.params))
        p.funs[field] = FunDef(field, ["$r"], [rt], t, body, d.span)

    def resolve_type(self, t: Type, scope: set | None, span: Span) -> Type:
        """Resolve placeholders; ``scope=None`` admits any type variable."""
        p = self.prog
        if isinstance(t, TypeVar):
            if scope is not None and t.name not in scope:
                self.fail("types", f"unbound type variable '{t.name}", span)
            return t
        if isinstance(t, (BaseType, ModelType)):
            return t
        if isinstance(t, (SmtType, SymType)):
            return type(t)(self.resolve_type(t.inner, scope, span))
        assert isinstance(t, AdtType)
        name, args = t.name, tuple(self.resolve_type(a, scope, span) for a in t.args)
        if name in RESERVED_TYPES:
            self._arity(name, args, 0, span)
            return RESERVED_TYPES[name]
        if name == "model":
            self._arity(name, args, 0, span)
            return MODEL
        if name in ("smt", "sym"):
            self._arity(name, args, 1, span)
            inner = args[0]
            if not inner.is_pretype():
                self.fail("t-SMT", f"{name} must wrap a pre-type, got {inner}", span)
            return SmtType(inner) if name == "smt" else SymType(inner)
        if name in p.aliases:
            params, body = p.aliases[name]
            self._arity(name, args, len(params), span)
            inner = self.resolve_type(body, set(params), span)
            from ..types import subst_type
            return subst_type(inner, dict(zip(params, args)))
        if name in p.adts:
            self._arity(name, args, len(p.adts[name].params), span)
            return AdtType(name, args)
        if name in p.usorts:
            self._arity(name, args, p.usorts[name], span)
            return AdtType(name, args)
        self.fail("types", f"unknown type {name}", span)

    def _arity(self, name, args, n, span):
        if len(args) != n:
            self.fail("types", f"type {name} expects {n} argument(s), got {len(args)}", span)

    # ------------------------------------------------------------ decls
    def declare_rel(self, d: RelDecl):
        p = self.prog
        if d.name in p.rels and not p.rels[d.name].implicit:
            self.fail("names", f"duplicate relation {d.name}", d.span)
        tys = tuple(self.resolve_type(t, set(), d.span) for t in d.types)
        p.rels[d.name] = Relation(d.name, tys, d.kind, d.span)

    def declare_uf(self, d: UfDecl):
        p = self.prog
        if d.name in p.ufs or d.name in p.ctor_owner:
            self.fail("names", f"duplicate uninterpreted function {d.name}", d.span)
        args = tuple(self.resolve_type(t, set(), d.span) for t in d.args)
        ret = self.resolve_type(d.ret, set(), d.span)
        p.ufs[d.name] = UFun(d.name, args, ret, d.span)

    def lower_fun(self, d: FunDecl):
        f = self.prog.funs[d.name]
        for i, (_, t) in enumerate(d.params):
            if t is None:
                self.fail("types", f"parameter {d.params[i][0]} of {d.name} needs a type annotation",
                          d.span)
        if d.ret is None:
            self.fail("types", f"function {d.name} needs a return type annotation", d.span)
        f.param_types = [self.resolve_type(t, None, d.span) for _, t in d.params]
        f.ret = self.resolve_type(d.ret, None, d.span)
        scope = Scope(frozenset(n for n, _ in d.params), {}, d.name)
        f.body = self.ex(d.body, scope)

    # ------------------------------------------------------------ expressions
    def lookup_callable(self, name: str, scope: "Scope"):
        if name in scope.funs:
            return "localfun"
        p = self.prog
        if name in p.ctor_owner and not name.startswith("$rec_"):
            return "ctor"
        if name in p.funs or name in BUILTIN_FUNS:
            return "fun"
        if name in p.rels:
            return "rel"
        if name in p.ufs:
            return "uf"
        if name in SIGS or name in USER_NAMES:
            return "formula"
        return None

    def ex(self, e, scope: "Scope"):
        """Expression mode."""
        sp = getattr(e, "span", NOSPAN)
        if isinstance(e, EVar):
            return e
        if isinstance(e, EConst):
            return e
        if isinstance(e, Anon) and self.anon_hook is not None:
            return EVar(self.anon_hook(), sp)
        if isinstance(e, (Anon, Wildcard)):
            self.fail("syntax", "'_' and '??' are only allowed as predicate arguments", sp)
        if isinstance(e, EApp):
            return self.ex_app(e, scope, formula=False)
        if isinstance(e, ECtor):
            return ECtor(e.name, tuple(self.ex(a, scope) for a in e.args), sp)
        if isinstance(e, EOp):
            if e.op in OPERATORS:
                self.fail("syntax", f"formula operator {e.op} used outside a quotation", sp)
            return EOp(e.op, tuple(self.ex(a, scope) for a in e.args), sp)
        if isinstance(e, EIf):
            return EIf(self.ex(e.cond, scope), self.ex(e.then, scope), self.ex(e.other, scope), sp)
        if isinstance(e, ELet):
            value = self.ex(e.value, scope)
            pat = self.pat(e.pat)
            body = self.ex(e.body, scope.bind(_pvars(pat)))
            if isinstance(pat, PVar):
                return ELet(pat, value, body, sp)
            return EMatch(value, ((pat, body),), sp)
        if isinstance(e, EMatch):
            arms = []
            for pat, body in e.arms:
                pat = self.pat(pat)
                arms.append((pat, self.ex(body, scope.bind(_pvars(pat)))))
            return EMatch(self.ex(e.scrut, scope), tuple(arms), sp)
        if isinstance(e, EQuote):
            return EQuote(self.fm(e.formula, scope), sp)
        if isinstance(e, ESmtVar):
            return ESmtVar(self.ex(e.name, scope), self.resolve_type(e.type, set(), sp), sp)
        if isinstance(e, EFormula):
            self.fail("syntax", f"formula constructor {e.ctor.lstrip('#')} used outside a quotation",
                      sp)
        if isinstance(e, ERecord):
            return self.ex_record(e, scope)
        if isinstance(e, ERecordUpdate):
            return self.ex_record_update(e, scope)
        if isinstance(e, ELetFun):
            return self.ex_letfun(e, scope)
        self.fail("syntax", f"unexpected expression {type(e).__name__}", sp)

    def ex_app(self, e: EApp, scope: "Scope", formula: bool):
        sp = e.span
        name = e.name
        if e.bare and name in scope.vars:
            v = EVar(name, sp)
            return EUnquote(v, sp) if formula else v
        kind = self.lookup_callable(name, scope)
        if kind is None:
            self.fail("names", f"unknown name {name}", sp)
        if kind == "localfun":
            lifted, captured = scope.funs[name]
            args = tuple(EVar(c, sp) for c in captured) + tuple(self.ex(a, scope) for a in e.args)
            call = ECall(lifted, args, sp)
            return EUnquote(call, sp) if formula else call
        if kind == "ctor":
            if formula:
                return EFormula(SMT_CTOR, (name,), tuple(self.fm(a, scope) for a in e.args), sp)
            return ECtor(name, tuple(self.ex(a, scope) for a in e.args), sp)
        if kind == "fun":
            call = ECall(name, tuple(self.ex(a, scope) for a in e.args), sp)
            return EUnquote(call, sp) if formula else call
        if kind == "rel":
            args = []
            for a in e.args:
                if isinstance(a, (Anon, Wildcard)):
                    args.append(a)
                else:
                    args.append(self.ex(a, scope))
            call = EPred(name, tuple(args), sp)
            return EUnquote(call, sp) if formula else call
        if kind == "uf":
            if not formula:
                self.fail("syntax", f"uninterpreted function {name} used outside a quotation", sp)
            return EFormula(SMT_UF, (name,), tuple(self.fm(a, scope) for a in e.args), sp)
        # a named formula constructor
        if not formula:
            self.fail("syntax", f"formula constructor {name} used outside a quotation", sp)
        return self.fm(EFormula(name, (), e.args, sp), scope)

    def ex_record(self, e: ERecord, scope):
        names = [f for f, _ in e.fields]
        rtype = self.record_for(names, e.span, exact=True)
        ctor = self.prog.record_types[rtype]
        order = self.prog.records[ctor]
        given = dict(e.fields)
        args = tuple(self.ex(given[f], scope) for f in order)
        return ECtor(ctor, args, e.span)

    def record_for(self, names, span, exact: bool) -> str:
        if len(set(names)) != len(names):
            self.fail("records", "duplicate field in record expression", span)
        cands = None
        for f in names:
            owners = set(self.field_owner.get(f, ()))
            if not owners:
                self.fail("records", f"unknown record field {f}", span)
            cands = owners if cands is None else cands & owners
        if exact:
            cands = {r for r in cands
                     if set(self.prog.records[self.prog.record_types[r]]) == set(names)}
        if not cands:
            self.fail("records", "no record type has fields " + ", ".join(names), span)
        if len(cands) > 1:
            self.fail("records", "ambiguous record fields " + ", ".join(names), span)
        return next(iter(cands))

    def ex_record_update(self, e: ERecordUpdate, scope):
        names = [f for f, _ in e.fields]
        rtype = self.record_for(names, e.span, exact=False)
        ctor = self.prog.record_types[rtype]
        order = self.prog.records[ctor]
        given = {f: self.ex(v, scope) for f, v in e.fields}
        self.fresh += 1
        tmp = [f"$u{self.fresh}_{i}" for i in range(len(order))]
        pat = PCtor(ctor, tuple(PWild() if f in given else PVar(tmp[i]) for i, f in enumerate(order)))
        rebuilt = ECtor(ctor, tuple(given[f] if f in given else EVar(tmp[i])
                                    for i, f in enumerate(order)), e.span)
        return EMatch(self.ex(e.base, scope), ((pat, rebuilt),), e.span)

    def ex_letfun(self, e: ELetFun, scope):
        fd = e.fun
        params = [n for n, _ in fd.params]
        free = _free_names(fd.body) - set(params)
        captured = sorted(n for n in free if n in scope.vars or n[:1].isupper())
        self.lift_count += 1
        lifted = f"${fd.name}{self.lift_count}"
        inner = scope.with_fun(fd.name, lifted, captured)
        if fd.ret is None or any(t is None for _, t in fd.params):
            self.fail("types", f"local function {fd.name} needs type annotations", fd.span)
        ptypes = [None] * len(captured) + [self.resolve_type(t, None, fd.span) for _, t in fd.params]
        fdef = FunDef(lifted, captured + params, ptypes, self.resolve_type(fd.ret, None, fd.span),
                      None, fd.span, lifted_from=scope.owner)
        self.prog.funs[lifted] = fdef
        fbody_scope = Scope(frozenset(captured + params), inner.funs, scope.owner)
        fdef.body = self.ex(fd.body, fbody_scope)
        return self.ex(e.body, inner)

    def pat(self, p):
        if isinstance(p, PVar):
            if p.name in self.prog.ctor_owner and p.name[:1].islower():
                return PCtor(p.name, (), p.span)
            return p
        if isinstance(p, PCtor):
            if p.name not in self.prog.ctor_owner:
                self.fail("names", f"unknown constructor {p.name} in pattern", p.span)
            return PCtor(p.name, tuple(self.pat(a) for a in p.args), p.span)
        return p

    # ------------------------------------------------------------ formulas
    def fm(self, e, scope: "Scope"):
        """Formula mode (inside a quotation)."""
        sp = getattr(e, "span", NOSPAN)
        if isinstance(e, (EVar, EConst)):
            return EUnquote(e, sp)
        if isinstance(e, EApp):
            return self.ex_app(e, scope, formula=True)
        if isinstance(e, ECtor):
            return EFormula(SMT_CTOR, (e.name,), tuple(self.fm(a, scope) for a in e.args), sp)
        if isinstance(e, EOp):
            if e.op in OPERATORS:
                return EFormula(OPERATORS[e.op], (), tuple(self.fm(a, scope) for a in e.args), sp)
            return EUnquote(self.ex(e, scope), sp)
        if isinstance(e, (EIf, ELet, EMatch, ELetFun, ERecord, ERecordUpdate)):
            return EUnquote(self.ex(e, scope), sp)
        if isinstance(e, ESmtVar):
            return ESmtVar(self.ex(e.name, scope), self.resolve_type(e.type, set(), sp), sp)
        if isinstance(e, EQuote):
            self.fail("syntax", "quotations cannot nest", sp)
        if isinstance(e, EFormula):
            return self.fm_formula(e, scope)
        if isinstance(e, (Anon, Wildcard)):
            self.fail("syntax", "'_' and '??' are not formulas", sp)
        self.fail("syntax", f"unexpected formula {type(e).__name__}", sp)

    def fm_formula(self, e: EFormula, scope):
        sp = e.span
        name = e.ctor
        p = self.prog
        if name.startswith("#"):
            word = name[1:]
            if len(e.args) != 1:
                self.fail("syntax", f"#{word} takes exactly one argument", sp)
            arg = self.fm(e.args[0], scope)
            if word.startswith("is_") and word[3:] in p.ctor_owner:
                return EFormula(SMT_IS, (word[3:],), (arg,), sp)
            head, _, idx = word.rpartition("_")
            if head in p.ctor_owner and idx.isdigit():
                i = int(idx)
                n = len(p.adts[p.ctor_owner[head]].ctors[head])
                if not 1 <= i <= n:
                    self.fail("names", f"constructor {head} has no argument {i}", sp)
                return EFormula(SMT_GET, (head, i), (arg,), sp)
            self.fail("names", f"#{word} is neither a constructor tester nor an argument getter",
                      sp)
        if name in ("smt_forall", "smt_exists"):
            var, body, pats = e.args
            var = self.fm(var, scope)
            body = self.fm(body, scope)
            pats = EFormula("smt_pats", (), tuple(self.fm(a, scope) for a in pats.args), sp)
            return EFormula(name, (), (var, body, pats), sp)
        if name == "bv_const":
            if len(e.params) != 1 or e.params[0] not in (32, 64) or len(e.args) != 1:
                self.fail("syntax", "bv_const takes one width index (32 or 64) and one argument",
                          sp)
            return EFormula(name, e.params, (self.ex(e.args[0], scope),), sp)
        if name == "smt_eq" and e.params:
            ty = self.resolve_type(e.params[0], set(), sp)
            return EFormula(name, (ty,), tuple(self.fm(a, scope) for a in e.args), sp)
        if name in SIGS or name == "smt_let" or name == "smt_ite":
            if e.params:
                self.fail("syntax", f"{name} takes no index", sp)
            return EFormula(name, (), tuple(self.fm(a, scope) for a in e.args), sp)
        kind = self.lookup_callable(name, scope)
        if kind is None:
            self.fail("names", f"unknown formula constructor {name}", sp)
        return self.ex_app(EApp(name, e.args, False, sp), scope, formula=True)

    # ------------------------------------------------------------ clauses
    def lower_clause(self, c: SClause) -> Clause:
        p = self.prog
        if c.head not in p.rels:
            self.fail("names", f"undeclared relation {c.head}", c.span)
        rel = p.rels[c.head]
        if rel.is_input and c.body:
            self.fail("names", f"input relation {c.head} cannot have rules", c.span)
        n = _Normalizer(self, c)
        self.anon_hook = n.fresh_var
        try:
            for prem in c.body:
                n.premise(prem)
        finally:
            self.anon_hook = None
        head_vars = []
        for a in c.args:
            a = n.resolve(a)
            if isinstance(a, EVar):
                head_vars.append(a.name)
            else:
                v = n.fresh_var()
                head_vars.append(v)
                n.equate(EVar(v, c.span), a, c.span)
        return Clause(c.head, tuple(head_vars), tuple(n.out), c.span)


class Scope:
    __slots__ = ("vars", "funs", "owner")

    def __init__(self, vars, funs, owner):
        self.vars = vars
        self.funs = funs
        self.owner = owner

    def bind(self, names):
        return Scope(self.vars | frozenset(names), self.funs, self.owner)

    def with_fun(self, name, lifted, captured):
        funs = dict(self.funs)
        funs[name] = (lifted, tuple(captured))
        return Scope(self.vars - {name}, funs, self.owner)


class _Normalizer:
    """Left-to-right premise normalization with syntactic boundness tracking."""

    def __init__(self, d: Desugarer, c: SClause):
        self.d = d
        self.c = c
        self.out: list = []
        self.bound: set[str] = set()
        self.count = 0
        self.scope = Scope(frozenset(), {}, c.head)

    def fresh_var(self) -> str:
        v = f"$V{self.count}"
        self.count += 1
        return v

    def resolve(self, e):
        if isinstance(e, Anon):
            return EVar(self.fresh_var(), e.span)
        return self.d.ex(e, self.scope)

    def emit(self, prem):
        self.out.append(prem)
        if isinstance(prem, PosAtom):
            self.bound |= set(prem.vars)
        elif isinstance(prem, EqTerm):
            self.bound.add(prem.var)
            self.bound |= variables(prem.term)
        elif isinstance(prem, EqExpr):
            self.bound.add(prem.var)

    def premise(self, e):
        sp = getattr(e, "span", NOSPAN)
        p = self.d.prog
        if isinstance(e, EOp) and e.op in ("=", "!=") and len(e.args) == 2:
            left, right = (self.resolve_side(a) for a in e.args)
            if e.op == "=":
                self.equate(left, right, sp)
            else:
                self.disequate(left, right, sp)
            return
        neg = False
        atom = e
        if isinstance(e, EOp) and e.op == "!" and isinstance(e.args[0], EApp) \
                and e.args[0].name in p.rels:
            neg, atom = True, e.args[0]
        if isinstance(atom, EApp) and atom.name in p.rels and \
                self.d.lookup_callable(atom.name, self.scope) == "rel":
            self.atom(atom, neg, sp)
            return
        expr = self.d.ex(e, self.scope)
        v = self.fresh_var()
        self.emit(EqExpr(v, expr, sp))
        self.emit(EqTerm(v, TRUE, span=sp))

    def resolve_side(self, a):
        if isinstance(a, Anon):
            return EVar(self.fresh_var(), a.span)
        return self.d.ex(a, self.scope)

    def atom(self, a: EApp, neg: bool, sp: Span):
        if any(isinstance(x, Wildcard) for x in a.args):
            self.d.fail("syntax", "'??' is only allowed in predicate-as-function calls", sp)
        if neg and any(isinstance(x, Anon) for x in a.args):
            # !p(.., _, ..) holds iff no tuple matches the bound columns
            args = tuple(x if isinstance(x, Anon) else self.d.ex(x, self.scope) for x in a.args)
            v = self.fresh_var()
            self.emit(EqExpr(v, EPred(a.name, args, sp), sp))
            self.emit(EqTerm(v, FALSE, span=sp))
            return
        names, post, pre = [], [], []
        for x in a.args:
            if isinstance(x, Anon):
                names.append(self.fresh_var())
                continue
            r = self.d.ex(x, self.scope)
            if isinstance(r, EVar):
                names.append(r.name)
            else:
                v = self.fresh_var()
                names.append(v)
                (pre if neg else post).append((v, r))
        if neg:
            for v, r in pre:
                self.emit(EqExpr(v, r, sp))
            self.emit(NegAtom(a.name, tuple(names), sp))
        else:
            self.emit(PosAtom(a.name, tuple(names), sp))
            for v, r in post:
                self.equate(EVar(v, sp), r, sp)

    def uterm(self, e):
        """Convert a resolved expression to a unifiable term, or None."""
        if isinstance(e, EVar):
            return Var(e.name)
        if isinstance(e, EConst):
            return e.value
        if isinstance(e, ECtor):
            args = [self.uterm(a) for a in e.args]
            if any(a is None for a in args):
                return None
            return Ctor(e.name, tuple(args))
        return None

    def smt_pattern(self, e):
        """A quotation usable as a c^SMT pattern: all unquoted variables free."""
        if not isinstance(e, EQuote):
            return None

        def conv(f):
            if isinstance(f, EUnquote):
                if isinstance(f.expr, EVar) and f.expr.name not in self.bound:
                    return Var(f.expr.name)
                if isinstance(f.expr, EConst):
                    return Ctor(SMT_CONST, (), (f.expr.value,))
                return None
            if isinstance(f, ESmtVar) and isinstance(f.name, EConst):
                return Ctor(SMT_VAR, (), (f.name.value, erase(f.type)))
            if isinstance(f, EFormula) and f.ctor not in ("bv_const", "smt_eq") \
                    and not f.ctor.startswith("#"):
                args = [conv(a) for a in f.args]
                if any(a is None for a in args):
                    return None
                if f.ctor in (SMT_CTOR, SMT_UF, SMT_IS, SMT_GET):
                    return Ctor(f.ctor, tuple(args), f.params)
                if f.ctor in ("smt_forall", "smt_exists", "smt_pats", "smt_let"):
                    return None
                return Ctor(f.ctor, tuple(args), ())
            return None

        u = conv(e.formula)
        if u is None or not variables(u):
            return None
        return u

    def equate(self, left, right, sp):
        lu, ru = self.uterm(left), self.uterm(right)
        if lu is None and isinstance(left, EQuote):
            lu = self.smt_pattern(left)
            lsmt = lu is not None
        else:
            lsmt = False
        if ru is None and isinstance(right, EQuote):
            ru = self.smt_pattern(right)
            rsmt = ru is not None
        else:
            rsmt = False
        if lu is not None and ru is not None:
            if isinstance(left, EVar):
                self.emit(EqTerm(left.name, ru, rsmt, sp))
            elif isinstance(right, EVar):
                self.emit(EqTerm(right.name, lu, lsmt, sp))
            else:
                lfree = variables(lu) - self.bound
                first, second, fs, ss = (lu, ru, lsmt, rsmt) if not lfree else (ru, lu, rsmt, lsmt)
                v = self.fresh_var()
                self.emit(EqTerm(v, first, fs, sp))
                self.emit(EqTerm(v, second, ss, sp))
            return
        if lu is not None or ru is not None:
            pat, psmt, expr = (lu, lsmt, right) if lu is not None else (ru, rsmt, left)
            if isinstance(pat, Var):
                self.emit(EqExpr(pat.name, expr, sp))
            else:
                v = self.fresh_var()
                self.emit(EqExpr(v, expr, sp))
                self.emit(EqTerm(v, pat, psmt, sp))
            return
        v = self.fresh_var()
        self.emit(EqExpr(v, left, sp))
        self.emit(EqExpr(v, right, sp))

    def disequate(self, left, right, sp):
        if isinstance(left, EVar) and left.name in self.bound:
            self.emit(NegEq(left.name, right, sp))
        elif isinstance(right, EVar) and right.name in self.bound:
            self.emit(NegEq(right.name, left, sp))
        elif isinstance(left, EVar):
            self.emit(NegEq(left.name, right, sp))
        else:
            v = self.fresh_var()
            self.emit(EqExpr(v, left, sp))
            self.emit(NegEq(v, right, sp))


def _pvars(p) -> list[str]:
    if isinstance(p, PVar):
        return [p.name]
    if isinstance(p, PCtor):
        out = []
        for a in p.args:
            out.extend(_pvars(a))
        return out
    return []


def _tvars(t: Type) -> set[str]:
    from ..types import type_vars
    return set(type_vars(t))


def _free_names(e) -> set[str]:
    """Names referenced by a surface expression (over-approximates captures)."""
    out: set[str] = set()

    def walk(x, bound):
        if isinstance(x, EVar):
            if x.name not in bound:
                out.add(x.name)
        elif isinstance(x, EApp):
            if x.bare and x.name not in bound:
                out.add(x.name)
            for a in x.args:
                walk(a, bound)
        elif isinstance(x, ELet):
            walk(x.value, bound)
            walk(x.body, bound | set(_pvars(x.pat)))
        elif isinstance(x, EMatch):
            walk(x.scrut, bound)
            for pat, body in x.arms:
                walk(body, bound | set(_pvars(pat)))
        elif isinstance(x, ELetFun):
            inner = bound | {n for n, _ in x.fun.params}
            walk(x.fun.body, inner)
            walk(x.body, bound)
        elif isinstance(x, (ERecord, ERecordUpdate)):
            if isinstance(x, ERecordUpdate):
                walk(x.base, bound)
            for _, v in x.fields:
                walk(v, bound)
        elif isinstance(x, ESmtVar):
            walk(x.name, bound)
        elif hasattr(x, "__dataclass_fields__"):
            for f in ("args", "cond", "then", "other", "formula", "expr", "value", "body",
                      "scrut", "base"):
                v = getattr(x, f, None)
                if isinstance(v, tuple):
                    for a in v:
                        walk(a, bound)
                elif v is not None:
                    walk(v, bound)

    walk(e, frozenset())
    return out
