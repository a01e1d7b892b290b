"""Big-step evaluation of expressions and quoted formulas."""
from __future__ import annotations

from ..kernels import sort_key, to_smt_value
from ..program import Program
from ..syntax import (
    Anon, ECall, EConst, ECtor, EFormula, EIf, ELet, EMatch, EOp, EPred, EQuote, ESmtVar,
    EUnquote, EVar, PConst, PCtor, PVar, PWild, Wildcard,
)
from ..terms import (
    BV_CONST, FALSE, SMT_CTOR, SMT_GET, SMT_IS, SMT_PATS, SMT_UF, TRUE, Const, Ctor, ModelValue,
    boolean, make_list, make_tuple, smt_var, wrap,
)
from ..types import erase
from .errors import HardError
from .world import World

BUILTINS = frozenset({"is_sat", "is_valid", "is_sat_opt", "get_model", "query_model"})
_WIDTH = {"bv32": 32, "bv64": 64}


def _bv_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _bv_rem(a: int, b: int) -> int:
    return a - b * _bv_div(a, b)


class Evaluator:
    """Evaluates expressions against a world; ``smt`` answers the solver built-ins."""

    def __init__(self, prog: Program, world: World, smt=None):
        self.prog = prog
        self.world = world
        self.smt = smt
        self._dispatch = {
            EVar: self._var, EConst: self._const, ECtor: self._ctor, ECall: self._call,
            EPred: self._pred, EOp: self._op, EIf: self._if, ELet: self._let,
            EMatch: self._match, EQuote: self._quote, ESmtVar: self._smtvar,
        }

    # ---------------------------------------------------------------- expressions
    def eval(self, e, env: dict):
        fn = self._dispatch.get(type(e))
        if fn is None:
            raise HardError("Eval-E", f"cannot evaluate {type(e).__name__}")
        return fn(e, env)

    def _var(self, e: EVar, env):
        v = env.get(e.name)
        if v is None:
            raise HardError("Var-E", f"unbound variable {e.name}")
        return v

    def _const(self, e: EConst, env):
        return e.value

    def _ctor(self, e: ECtor, env):
        return Ctor(e.name, tuple([self.eval(a, env) for a in e.args]))

    def _call(self, e: ECall, env):
        args = [self.eval(a, env) for a in e.args]
        if e.name in BUILTINS:
            if self.smt is None:
                raise HardError("smt-unavailable", f"{e.name} needs an SMT backend")
            return self.smt.call(e.name, args)
        f = self.prog.funs.get(e.name)
        if f is None:
            raise HardError("Fun-E3", f"unknown function {e.name}")
        if len(f.params) != len(args):
            raise HardError("Fun-E2", f"{e.name} expects {len(f.params)} argument(s)")
        return self.eval(f.body, dict(zip(f.params, args)))

    def _pred(self, e: EPred, env):
        if e.name not in self.world:
            raise HardError("Rel-E3", f"unknown relation {e.name}")
        store = self.world[e.name]
        if len(e.args) != store.arity:
            raise HardError("Rel-E2", f"{e.name} has arity {store.arity}")
        pos, key, wild = [], [], []
        for i, a in enumerate(e.args):
            if isinstance(a, Wildcard):
                wild.append(i)
            elif not isinstance(a, Anon):
                pos.append(i)
                key.append(self.eval(a, env))
        rows = store.scan(0, None, tuple(pos), tuple(key))
        if not wild:
            for _ in rows:
                return TRUE
            return FALSE
        items = [make_tuple(t[i] for i in wild) for t in rows]
        items.sort(key=sort_key)
        return make_list(items)

    def _op(self, e: EOp, env):
        args = [self.eval(a, env) for a in e.args]
        return apply_op(e.op, args)

    def _if(self, e: EIf, env):
        c = self.eval(e.cond, env)
        if c is TRUE or c == TRUE:
            return self.eval(e.then, env)
        if c is FALSE or c == FALSE:
            return self.eval(e.other, env)
        raise HardError("Ite-E", f"condition is not a boolean: {c!r}")

    def _let(self, e: ELet, env):
        v = self.eval(e.value, env)
        inner = dict(env)
        inner[e.pat.name] = v
        return self.eval(e.body, inner)

    def _match(self, e: EMatch, env):
        v = self.eval(e.scrut, env)
        for pat, body in e.arms:
            binds = {}
            if match_pattern(pat, v, binds):
                if binds:
                    inner = dict(env)
                    inner.update(binds)
                    return self.eval(body, inner)
                return self.eval(body, env)
        raise HardError("Match-E", f"no match arm covers {v!r}")

    def _quote(self, e: EQuote, env):
        return self.formula(e.formula, env)

    def _smtvar(self, e: ESmtVar, env):
        return smt_var(self.eval(e.name, env), erase(e.type))

    # ---------------------------------------------------------------- formulas
    def formula(self, f, env):
        if isinstance(f, EUnquote):
            v = self.eval(f.expr, env)
            try:
                return to_smt_value(v)
            except ValueError as exc:
                raise HardError("toSMT-E", str(exc)) from None
        if isinstance(f, ESmtVar):
            return self._smtvar(f, env)
        if isinstance(f, EFormula):
            n = f.ctor
            if n == "bv_const":
                k = self.eval(f.args[0], env)
                if not (isinstance(k, Const) and k.sort == "bv32"):
                    raise HardError("Op-E2", "bv_const expects a bv[32]")
                return Ctor(BV_CONST, (), (f.params[0], wrap(k.value, f.params[0])))
            args = tuple([self.formula(a, env) for a in f.args])
            if n in (SMT_CTOR, SMT_UF, SMT_IS, SMT_GET):
                return Ctor(n, args, tuple(f.params))
            if n == "smt_pats":
                return Ctor(SMT_PATS, args)
            return Ctor(n, args)
        raise HardError("Eval-E", f"not a formula: {type(f).__name__}")


def match_pattern(pat, v, binds: dict) -> bool:
    if isinstance(pat, PVar):
        binds[pat.name] = v
        return True
    if isinstance(pat, PWild):
        return True
    if isinstance(pat, PConst):
        return v == pat.value
    if isinstance(pat, PCtor):
        if not isinstance(v, Ctor) or v.name != pat.name or len(v.args) != len(pat.args):
            return False
        for p, a in zip(pat.args, v.args):
            if not match_pattern(p, a, binds):
                return False
        return True
    return False


def apply_op(op: str, args: list):
    """The denotation of a built-in operator; HardError outside its domain."""
    if op in ("=", "!="):
        eq = args[0] == args[1]
        return boolean(eq if op == "=" else not eq)
    if op in ("&&", "||", "!"):
        for a in args:
            if not (isinstance(a, Const) and a.sort == "bool"):
                raise HardError("Op-E2", f"operator {op} expects booleans")
        if op == "!":
            return boolean(not args[0].value)
        if op == "&&":
            return boolean(args[0].value and args[1].value)
        return boolean(args[0].value or args[1].value)
    for a in args:
        if not (isinstance(a, Const) and a.sort in _WIDTH):
            raise HardError("Op-E2", f"operator {op} expects bit vectors, got {a!r}")
    sort = args[0].sort
    if any(a.sort != sort for a in args):
        raise HardError("Op-E2", f"operator {op} applied to mixed widths")
    w = _WIDTH[sort]
    if op == "neg":
        return Const(sort, wrap(-args[0].value, w))
    a, b = args[0].value, args[1].value
    if op == "+":
        return Const(sort, wrap(a + b, w))
    if op == "-":
        return Const(sort, wrap(a - b, w))
    if op == "*":
        return Const(sort, wrap(a * b, w))
    if op in ("/", "%"):
        if b == 0:
            raise HardError("op-domain", f"{'division' if op == '/' else 'remainder'} by zero")
        return Const(sort, wrap(_bv_div(a, b) if op == "/" else _bv_rem(a, b), w))
    if op == "<":
        return boolean(a < b)
    if op == "<=":
        return boolean(a <= b)
    if op == ">":
        return boolean(a > b)
    if op == ">=":
        return boolean(a >= b)
    raise HardError("Op-E2", f"unknown operator {op}")


def is_model(v) -> bool:
    return isinstance(v, ModelValue)
