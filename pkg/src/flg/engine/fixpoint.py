"""Stratified fixpoints: the naive oracle and parallel semi-naive evaluation."""
from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..program import Program
from .clauses import ClauseRunner, CompiledClause, View, compile_clause
from .errors import EvalError, HardError
from .evaluator import Evaluator
from .world import World

MAX_ITERATIONS = 10_000
CHUNK = 256  # delta rows per work item


@dataclass
class EvalStats:
    iterations: int = 0
    tasks: int = 0
    soft_failures: int = 0
    per_stratum: list = field(default_factory=list)


def make_world(prog: Program) -> World:
    return World({n: len(r.types) for n, r in prog.rels.items()})


def _strata(prog: Program) -> list[list[str]]:
    if prog.strata:
        return prog.strata
    from ..typecheck.validate import stratify
    return stratify(prog)


def _clauses_by_head(prog: Program) -> dict[str, list]:
    out: dict[str, list] = {}
    for c in prog.clauses:
        out.setdefault(c.head, []).append(c)
    return out


def naive_fixpoint(prog: Program, edb: Optional[World] = None, smt=None, soft: bool = False,
                   max_iterations: int = MAX_ITERATIONS, after_stratum: Callable | None = None
                   ) -> World:
    """Reference evaluation: re-apply every clause to the full world until nothing changes."""
    world = edb if edb is not None else make_world(prog)
    ev = Evaluator(prog, world, smt)
    runner = ClauseRunner(ev, soft)
    by_head = _clauses_by_head(prog)
    for stratum in _strata(prog):
        compiled = [compile_clause(c) for p in stratum for c in by_head.get(p, [])]
        for it in range(max_iterations + 1):
            if it == max_iterations:
                raise HardError("iteration-bound",
                                f"no fixpoint after {max_iterations} iterations")
            staged = [(cc.head, runner.run(cc)) for cc in compiled]
            changed = 0
            for head, tuples in staged:
                changed += world.add_all(head, tuples)
            if not changed:
                break
        if after_stratum is not None:
            after_stratum(stratum, world)
    return world


class SemiNaive:
    def __init__(self, prog: Program, world: World, smt=None, workers: int = 1,
                 soft: bool = False, max_iterations: int = MAX_ITERATIONS):
        self.prog = prog
        self.world = world
        self.smt = smt
        self.workers = max(1, workers)
        self.soft = soft
        self.max_iterations = max_iterations
        self.stats = EvalStats()
        self._local = threading.local()
        self._pool: Optional[ThreadPoolExecutor] = None

    def _runner(self) -> ClauseRunner:
        r = getattr(self._local, "runner", None)
        if r is None:
            r = ClauseRunner(Evaluator(self.prog, self.world, self.smt), self.soft)
            self._local.runner = r
            self._local_runners.append(r)
        return r

    def run(self, after_stratum: Callable | None = None) -> World:
        self._local_runners: list[ClauseRunner] = []
        by_head = _clauses_by_head(self.prog)
        if self.workers > 1:
            self._pool = ThreadPoolExecutor(max_workers=self.workers,
                                            thread_name_prefix="flg-eval")
        try:
            for stratum in _strata(self.prog):
                clauses = [compile_clause(c) for p in stratum for c in by_head.get(p, [])]
                n = self._stratum(set(stratum), clauses)
                self.stats.per_stratum.append((tuple(stratum), n))
                if after_stratum is not None:
                    after_stratum(stratum, self.world)
        finally:
            if self._pool is not None:
                self._pool.shutdown(wait=True)
                self._pool = None
            self.stats.soft_failures = sum(r.soft_failures for r in self._local_runners)
        return self.world

    def _stratum(self, preds: set[str], clauses: list[CompiledClause]) -> int:
        w = self.world
        # rows [delta_lo[p], delta_hi[p]) are the previous generation of p
        delta_lo = {p: 0 for p in preds}
        delta_hi = {p: len(w[p]) for p in preds}
        recursive = {id(cc): [i for i in cc.atom_indexes() if cc.steps[i].pred in preds]
                     for cc in clauses}
        iteration = 0
        while True:
            if iteration >= self.max_iterations:
                raise HardError("iteration-bound",
                                f"no fixpoint after {self.max_iterations} iterations")
            tasks = []
            for cc in clauses:
                rec = recursive[id(cc)]
                if iteration == 0:
                    # every rule once against everything known so far
                    tasks.append((cc, {}))
                    continue
                for k in rec:
                    p = cc.steps[k].pred
                    lo, hi = delta_lo[p], delta_hi[p]
                    for start in range(lo, hi, CHUNK):
                        views = {k: View(start, min(hi, start + CHUNK))}
                        for j in rec:
                            if j != k:
                                views[j] = View(0, delta_hi[cc.steps[j].pred])
                        tasks.append((cc, views))
            if not tasks:
                return iteration
            results = self._execute(tasks)
            self.stats.tasks += len(tasks)
            before = {p: len(w[p]) for p in preds}
            for (cc, _), tuples in zip(tasks, results):
                w.add_all(cc.head, tuples)
            iteration += 1
            self.stats.iterations += 1
            changed = False
            for p in preds:
                delta_lo[p] = before[p]
                delta_hi[p] = len(w[p])
                changed |= delta_hi[p] > delta_lo[p]
            if not changed:
                return iteration

    def _task(self, item):
        cc, views = item
        # non-recursive atoms see the whole relation; recursive ones are pinned by views
        return self._runner().run(cc, views)

    def _execute(self, tasks) -> list[list[tuple]]:
        if self._pool is None:
            return [self._task(t) for t in tasks]
        futures = [self._pool.submit(self._task, t) for t in tasks]
        results, first_err = [], None
        for f in futures:
            try:
                results.append(f.result())
            except EvalError as exc:
                if first_err is None:
                    first_err = exc  # lowest task index wins
                results.append([])
        if first_err is not None:
            raise first_err
        return results


def semi_naive_fixpoint(prog: Program, edb: Optional[World] = None, smt=None, workers: int = 1,
                        soft: bool = False, max_iterations: int = MAX_ITERATIONS,
                        after_stratum: Callable | None = None) -> World:
    world = edb if edb is not None else make_world(prog)
    return SemiNaive(prog, world, smt, workers, soft, max_iterations).run(after_stratum)
