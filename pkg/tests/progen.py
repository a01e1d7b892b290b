"""Random generator of well-typed, SMT-free, terminating programs (as source text).

Relations r0..r(n-1) are ordered: a rule for ri reads rj positively for j <= i
and negatively (negated atoms, predicate calls in expressions, functions that
query relations) only for j < i, so every program is stratifiable.  Recursive
rules (ri in its own body) only copy existing values into the head, which
keeps every relation finite.  Divisions use non-trivial literal divisors and
every match is exhaustive, so evaluation never raises.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

HEADER = "type shape = | circle(bv[32]) | rect(bv[32], bv[32]) | dot\n"
TYPES = ["bv[32]", "bool", "string", "bv[32] list", "shape", "bv[32] option"]
STRINGS = ['""', '"a"', '"b"', '"hello"', '"tab\\there"']
INTS = ["0", "1", "2", "3", "7", "-1", "-5", "100", "2147483647", "-2147483648"]


@dataclass
class Fun:
    name: str
    params: list[tuple[str, str]]
    ret: str
    rels: set[int] = field(default_factory=set)


@dataclass
class Ctx:
    env: dict[str, str]            # variable -> type
    rel_limit: int                 # relations with index < rel_limit may be queried
    used_rels: set[int] = field(default_factory=set)


class ProgramGen:
    def __init__(self, seed: int, max_rels: int = 4, max_rules: int = 12,
                 max_facts: int = 50, max_funs: int = 3, depth: int = 3):
        self.rng = random.Random(seed)
        self.max_rels = max_rels
        self.max_rules = max_rules
        self.max_facts = max_facts
        self.max_funs = max_funs
        self.depth = depth
        self.rels: list[list[str]] = []
        self.funs: list[Fun] = []
        self.counter = 0

    # ------------------------------------------------------------ expressions
    def lit(self, t: str) -> str:
        r = self.rng
        if t == "bv[32]":
            return r.choice(INTS)
        if t == "bool":
            return r.choice(["true", "false"])
        if t == "string":
            return r.choice(STRINGS)
        if t == "bv[32] list":
            return "[" + ", ".join(r.choice(INTS[:6]) for _ in range(r.randint(0, 3))) + "]"
        if t == "shape":
            k = r.randint(0, 2)
            if k == 0:
                return f"circle({r.choice(INTS[:6])})"
            if k == 1:
                return f"rect({r.choice(INTS[:6])}, {r.choice(INTS[:6])})"
            return "dot"
        if t == "bv[32] option":
            return "none" if r.random() < 0.4 else f"some({r.choice(INTS[:6])})"
        raise ValueError(t)

    def fresh(self, ctx: Ctx, lower: bool = True) -> str:
        self.counter += 1
        return ("v" if lower else "V") + str(self.counter)

    def var_of(self, t: str, ctx: Ctx):
        cands = sorted(v for v, vt in ctx.env.items() if vt == t)
        return self.rng.choice(cands) if cands else None

    def expr(self, t: str, ctx: Ctx, depth: int) -> str:
        r = self.rng
        if depth <= 0 or r.random() < 0.25:
            v = self.var_of(t, ctx)
            if v is not None and r.random() < 0.7:
                return v
            return self.lit(t)
        options = ["var", "lit", "if", "let", "match_shape", "match_list", "call"]
        if t == "bv[32]":
            options += ["arith", "arith", "div"]
        elif t == "bool":
            options += ["cmp", "cmp", "logic", "not", "pred", "eq"]
        elif t == "bv[32] list":
            options += ["cons", "project"]
        elif t == "shape":
            options += ["ctor"]
        elif t == "bv[32] option":
            options += ["some"]
        kind = r.choice(options)
        d = depth - 1
        if kind == "var":
            v = self.var_of(t, ctx)
            return v if v is not None else self.lit(t)
        if kind == "lit":
            return self.lit(t)
        if kind == "if":
            return (f"(if {self.expr('bool', ctx, d)} then {self.expr(t, ctx, d)} "
                    f"else {self.expr(t, ctx, d)})")
        if kind == "let":
            bt = r.choice(TYPES)
            x = self.fresh(ctx)
            bound = self.expr(bt, ctx, d)
            body = self.expr(t, self._with(ctx, {x: bt}), d)
            return f"(let {x} = {bound} in {body})"
        if kind == "match_shape":
            scrut = self.expr("shape", ctx, d)
            a, b, c = self.fresh(ctx), self.fresh(ctx), self.fresh(ctx)
            e1 = self.expr(t, self._with(ctx, {a: "bv[32]"}), d)
            e2 = self.expr(t, self._with(ctx, {b: "bv[32]", c: "bv[32]"}), d)
            e3 = self.expr(t, ctx, d)
            return (f"(match {scrut} with | circle({a}) => {e1} | rect({b}, {c}) => {e2} "
                    f"| dot => {e3} end)")
        if kind == "match_list":
            scrut = self.expr("bv[32] list", ctx, d)
            h, tl = self.fresh(ctx), self.fresh(ctx)
            e1 = self.expr(t, ctx, d)
            e2 = self.expr(t, self._with(ctx, {h: "bv[32]", tl: "bv[32] list"}), d)
            return f"(match {scrut} with | [] => {e1} | {h} :: {tl} => {e2} end)"
        if kind == "call":
            cands = [f for f in self.funs if f.ret == t and all(j < ctx.rel_limit for j in f.rels)]
            if not cands:
                return self.lit(t)
            f = r.choice(cands)
            ctx.used_rels |= f.rels
            args = ", ".join(self.expr(pt, ctx, d) for _, pt in f.params)
            return f"{f.name}({args})"
        if kind == "arith":
            op = r.choice(["+", "-", "*"])
            return f"({self.expr('bv[32]', ctx, d)} {op} {self.expr('bv[32]', ctx, d)})"
        if kind == "div":
            op = r.choice(["/", "%"])
            return f"({self.expr('bv[32]', ctx, d)} {op} {r.choice(['2', '3', '7', '-3'])})"
        if kind == "cmp":
            op = r.choice(["<", "<=", ">", ">="])
            return f"({self.expr('bv[32]', ctx, d)} {op} {self.expr('bv[32]', ctx, d)})"
        if kind == "eq":
            et = r.choice(TYPES)
            op = r.choice(["=", "!="])
            return f"({self.expr(et, ctx, d)} {op} {self.expr(et, ctx, d)})"
        if kind == "logic":
            op = r.choice(["&&", "||"])
            return f"({self.expr('bool', ctx, d)} {op} {self.expr('bool', ctx, d)})"
        if kind == "not":
            return f"!({self.expr('bool', ctx, d)})"
        if kind == "pred":
            j = self._lower_rel(ctx)
            if j is None:
                return self.lit(t)
            args = ", ".join(self.expr(ct, ctx, d) for ct in self.rels[j])
            return f"r{j}({args})"
        if kind == "project":
            j = self._lower_rel(ctx, want="bv[32]")
            if j is None:
                return self.lit(t)
            cols = self.rels[j]
            hole = r.choice([i for i, ct in enumerate(cols) if ct == "bv[32]"])
            args = ", ".join("??" if i == hole else self.expr(ct, ctx, d)
                             for i, ct in enumerate(cols))
            return f"r{j}({args})"
        if kind == "cons":
            return f"({self.expr('bv[32]', ctx, d)} :: {self.expr(t, ctx, d)})"
        if kind == "ctor":
            return r.choice([f"circle({self.expr('bv[32]', ctx, d)})",
                             f"rect({self.expr('bv[32]', ctx, d)}, {self.expr('bv[32]', ctx, d)})",
                             "dot"])
        if kind == "some":
            return f"some({self.expr('bv[32]', ctx, d)})"
        raise AssertionError(kind)

    def _with(self, ctx: Ctx, extra: dict) -> Ctx:
        return Ctx(dict(ctx.env, **extra), ctx.rel_limit, ctx.used_rels)

    def _lower_rel(self, ctx: Ctx, want: str | None = None):
        cands = [j for j in range(min(ctx.rel_limit, len(self.rels)))
                 if want is None or want in self.rels[j]]
        if not cands:
            return None
        j = self.rng.choice(cands)
        ctx.used_rels.add(j)
        return j

    # ------------------------------------------------------------ declarations
    def functions(self, n_rels: int) -> list[str]:
        out = []
        for k in range(self.rng.randint(0, self.max_funs)):
            params = [(f"p{i}", self.rng.choice(TYPES)) for i in range(self.rng.randint(1, 2))]
            ret = self.rng.choice(TYPES)
            limit = self.rng.randint(0, n_rels)
            ctx = Ctx(dict(params), limit)
            body = self.expr(ret, ctx, self.depth)
            f = Fun(f"f{k}", params, ret, set(ctx.used_rels))
            self.funs.append(f)
            ps = ", ".join(f"{n}: {t}" for n, t in params)
            out.append(f"fun {f.name}({ps}) : {ret} = {body}")
        return out

    def atom_args(self, j: int, ctx: Ctx, bound_only: bool) -> str:
        """Arguments of a body atom over rj; binds fresh variables unless bound_only."""
        r = self.rng
        args = []
        for ct in self.rels[j]:
            v = self.var_of(ct, ctx)
            roll = r.random()
            if v is not None and (bound_only or roll < 0.55):
                args.append(v)
            elif bound_only or roll < 0.65:
                args.append(self.lit(ct))
            elif roll < 0.72:
                args.append("_")
            else:
                x = self.fresh(ctx, lower=False)
                ctx.env[x] = ct
                args.append(x)
        return ", ".join(args)

    def rule(self, i: int) -> str:
        r = self.rng
        ctx = Ctx({}, i)
        body = []
        recursive = r.random() < 0.35
        atoms = [r.randint(0, i) for _ in range(r.randint(1, 3))]
        if recursive:
            atoms[0] = i
        recursive = i in atoms
        for j in atoms:
            body.append(f"r{j}({self.atom_args(j, ctx, False)})")
        copied = dict(ctx.env)
        for _ in range(r.randint(0, 2)):
            k = r.random()
            if k < 0.4:
                t = r.choice(TYPES)
                y = self.fresh(ctx, lower=False)
                body.append(f"{y} = {self.expr(t, ctx, self.depth - 1)}")
                ctx.env[y] = t
            elif k < 0.65 and i > 0:
                j = r.randint(0, i - 1)
                body.append(f"!r{j}({self.atom_args(j, ctx, True)})")
            elif k < 0.85:
                body.append(self.expr("bool", ctx, 2))
            else:
                t = r.choice(TYPES)
                body.append(f"{self.expr(t, ctx, 2)} != {self.expr(t, ctx, 2)}")
        head = []
        for ct in self.rels[i]:
            if recursive:
                v = self.var_of(ct, Ctx(copied, 0))
                head.append(v if v is not None else self.lit(ct))
            elif r.random() < 0.5:
                v = self.var_of(ct, ctx)
                head.append(v if v is not None else self.expr(ct, ctx, 2))
            else:
                head.append(self.expr(ct, ctx, 2))
        return f"r{i}({', '.join(head)}) :- {', '.join(body)}."

    def fact(self, i: int) -> str:
        return f"r{i}({', '.join(self.lit(t) for t in self.rels[i])})."

    def program(self) -> str:
        r = self.rng
        n = r.randint(1, self.max_rels)
        self.rels = [[r.choice(TYPES) for _ in range(r.randint(1, 3))] for _ in range(n)]
        self.funs = []
        lines = [HEADER]
        for i, cols in enumerate(self.rels):
            lines.append(f"output r{i}({', '.join(cols)})")
        lines.extend(self.functions(n))
        for _ in range(r.randint(1, self.max_facts)):
            lines.append(self.fact(r.randrange(n)))
        for _ in range(r.randint(1, self.max_rules)):
            lines.append(self.rule(r.randrange(n)))
        return "\n".join(lines) + "\n"


def generate(seed: int, **kw) -> str:
    return ProgramGen(seed, **kw).program()
