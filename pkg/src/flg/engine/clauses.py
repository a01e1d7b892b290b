"""Single-clause application: left-to-right premise evaluation over a world."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..kernels import bind_tuple
from ..syntax import Clause, EqExpr, EqTerm, NegAtom, NegEq, PosAtom
from ..terms import Var
from .errors import EvalError, HardError
from .evaluator import Evaluator
from .unify import unify


@dataclass
class CompiledAtom:
    pred: str
    vars: tuple[str, ...]
    bound_pos: tuple[int, ...]  # positions bound before this premise runs
    free: tuple[tuple[int, str], ...]


@dataclass
class CompiledClause:
    clause: Clause
    steps: list  # premises, PosAtom replaced by CompiledAtom

    @property
    def head(self) -> str:
        return self.clause.head

    def atom_indexes(self) -> list[int]:
        return [i for i, s in enumerate(self.steps) if isinstance(s, CompiledAtom)]


def compile_clause(c: Clause) -> CompiledClause:
    from ..terms import variables

    bound: set[str] = set()
    steps = []
    for p in c.body:
        if isinstance(p, PosAtom):
            pos, free, seen = [], [], set()
            for i, x in enumerate(p.vars):
                if x in bound:
                    pos.append(i)
                elif x not in seen:
                    seen.add(x)
                    free.append((i, x))
            steps.append(CompiledAtom(p.pred, p.vars, tuple(pos), tuple(free)))
            bound.update(p.vars)
        else:
            steps.append(p)
            if isinstance(p, EqTerm):
                bound.add(p.var)
                bound |= variables(p.term)
            elif isinstance(p, EqExpr):
                bound.add(p.var)
    return CompiledClause(c, steps)


@dataclass
class View:
    """Row range of one relation visible to one atom: [lo, hi)."""
    lo: int
    hi: Optional[int]


class ClauseRunner:
    """Enumerates every derivation of a compiled clause.

    ``views`` maps step index to a row range; atoms without an entry see the
    whole relation.  In soft mode, errors only prune the failing path.
    """

    def __init__(self, ev: Evaluator, soft: bool = False):
        self.ev = ev
        self.soft = soft
        self.soft_failures = 0

    def run(self, cc: CompiledClause, views: dict | None = None, seed: dict | None = None
            ) -> list[tuple]:
        out: list[tuple] = []
        self._views = views or {}
        self._cc = cc
        self._out = out
        self._solve(0, dict(seed) if seed else {})
        return out

    def _solve(self, i: int, theta: dict):
        steps = self._cc.steps
        while i < len(steps):
            s = steps[i]
            if isinstance(s, CompiledAtom):
                store = self.ev.world[s.pred]
                view = self._views.get(i)
                lo, hi = (view.lo, view.hi) if view else (0, len(store))
                key = tuple([theta[s.vars[j]] for j in s.bound_pos])
                for tup in list(store.scan(lo, hi, s.bound_pos, key)):
                    nxt = bind_tuple(s.vars, tup, theta)
                    if nxt is not None:
                        self._solve(i + 1, nxt)
                return
            try:
                theta = self._premise(s, theta)
            except EvalError:
                if not self.soft:
                    raise
                self.soft_failures += 1
                return
            if theta is None:
                return
            i += 1
        head = self._cc.clause
        try:
            self._out.append(tuple([theta[x] for x in head.head_vars]))
        except KeyError as exc:
            err = HardError("Clause-E2", f"head variable {exc.args[0]} of {head.head} is unbound")
            if not self.soft:
                raise err from None
            self.soft_failures += 1

    def _premise(self, p, theta: dict) -> Optional[dict]:
        if isinstance(p, EqExpr):
            v = self.ev.eval(p.expr, theta)
            cur = theta.get(p.var)
            if cur is None:
                theta = dict(theta)
                theta[p.var] = v
                return theta
            return theta if cur == v else None
        if isinstance(p, EqTerm):
            return unify(theta, Var(p.var), p.term)
        if isinstance(p, NegAtom):
            try:
                tup = tuple([theta[x] for x in p.vars])
            except KeyError as exc:
                raise HardError("NegAtom-E", f"variable {exc.args[0]} of !{p.pred} is unbound"
                                ) from None
            return None if tup in self.ev.world[p.pred] else theta
        if isinstance(p, NegEq):
            cur = theta.get(p.var)
            if cur is None:
                raise HardError("NegExpr-E2", f"variable {p.var} is unbound")
            v = self.ev.eval(p.expr, theta)
            return theta if cur != v else None
        if isinstance(p, PosAtom):
            raise HardError("PosAtom-E", "uncompiled atom")
        raise HardError("Premise-E", f"unknown premise {p!r}")


def apply_clause(ev: Evaluator, clause: Clause, soft: bool = False) -> set[tuple]:
    """All head tuples derivable from ``clause`` in ``ev.world``."""
    return set(ClauseRunner(ev, soft).run(compile_clause(clause)))
