"""Memoizing query dispatcher and the solver built-in operators."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from ..engine.errors import HardError
from ..program import Program
from ..terms import NONE, Const, Ctor, ModelValue, boolean, list_items, some
from .backends import SolverError
from .model import ModelError, parse_model
from .serialize import SerializeError, Script, Serializer

SAT, UNSAT, UNKNOWN = "sat", "unsat", "unknown"


@dataclass
class Answer:
    verdict: str
    model: Optional[ModelValue] = None


class SmtContext:
    """Serializes queries, consults the memo table, dispatches misses to the backend.

    The memo table is shared between threads; concurrent requests for the same
    query wait for a single dispatch.
    """

    def __init__(self, prog: Program, backend, timeout_ms: Optional[int] = None,
                 dump_dir: Optional[str] = None, warn: Optional[Callable[[str], None]] = None,
                 dialect: str = "z3"):
        self.prog = prog
        self.backend = backend
        self.timeout_ms = timeout_ms
        self.dump_dir = Path(dump_dir) if dump_dir else None
        self.warn = warn or (lambda msg: None)
        self.serializer = Serializer(prog, dialect)
        self.dispatched = 0
        self.hits = 0
        self._memo: dict[str, Answer] = {}
        self._inflight: dict[str, threading.Event] = {}
        self._lock = threading.Lock()
        self._warned: set[str] = set()

    # ------------------------------------------------------------ core
    def script(self, assertions: list, timeout_ms: Optional[int], want_model: bool) -> Script:
        try:
            s = self.serializer.script(assertions, timeout_ms, want_model)
        except SerializeError as exc:
            raise HardError("smt-serialize", str(exc)) from None
        for w in s.warnings:
            with self._lock:
                if w in self._warned:
                    continue
                self._warned.add(w)
            self.warn(w)
        return s

    def check(self, assertions: list, timeout_ms: Optional[int] = None,
              want_model: bool = False) -> Answer:
        s = self.script(assertions, timeout_ms, want_model)
        key = s.key
        while True:
            with self._lock:
                ans = self._memo.get(key)
                if ans is not None:
                    self.hits += 1
                    return ans
                ev = self._inflight.get(key)
                if ev is None:
                    ev = threading.Event()
                    self._inflight[key] = ev
                    self.dispatched += 1
                    break
            ev.wait()
            with self._lock:
                if key in self._memo:
                    continue
                # the dispatching thread failed; retry ourselves
        try:
            ans = self._dispatch(s)
            with self._lock:
                self._memo[key] = ans
        finally:
            with self._lock:
                self._inflight.pop(key, None)
            ev.set()
        return ans

    def _dispatch(self, s: Script) -> Answer:
        if self.dump_dir is not None:
            self.dump_dir.mkdir(parents=True, exist_ok=True)
            (self.dump_dir / f"{s.digest}.smt2").write_text(s.text)
        try:
            reply = self.backend.send(s)
        except (SolverError, OSError) as exc:
            raise HardError("smt-backend", str(exc)) from None
        head, _, rest = reply.partition("\n")
        verdict = head.strip()
        if verdict not in (SAT, UNSAT, UNKNOWN):
            raise HardError("smt-protocol", f"unexpected solver reply {head!r}")
        model = None
        if s.want_model and verdict == SAT:
            try:
                model = parse_model(rest, s.free_vars, self.prog)
            except ModelError as exc:
                raise HardError("smt-protocol", str(exc)) from None
        return Answer(verdict, model)

    def stats(self) -> dict:
        return {"dispatched": self.dispatched, "memo_hits": self.hits}

    def close(self):
        self.backend.close()

    # ------------------------------------------------------------ built-ins
    def call(self, name: str, args: list):
        return getattr(self, "op_" + name)(*args)

    def op_is_sat(self, phi):
        v = self.check([phi], self.timeout_ms).verdict
        if v == UNKNOWN:
            raise HardError("smt-unknown", "is_sat: solver answered unknown")
        return boolean(v == SAT)

    def op_is_valid(self, phi):
        v = self.check([Ctor("smt_not", (phi,))], self.timeout_ms).verdict
        if v == UNKNOWN:
            raise HardError("smt-unknown", "is_valid: solver answered unknown")
        return boolean(v == UNSAT)

    def _conjuncts(self, phis) -> list:
        items = list_items(phis)
        if items is None:
            raise HardError("Op-E2", "expected a list of formulas")
        return items

    def _timeout(self, opt) -> Optional[int]:
        if isinstance(opt, Ctor) and opt.name == "none":
            return None
        if isinstance(opt, Ctor) and opt.name == "some" and isinstance(opt.args[0], Const):
            t = opt.args[0].value
            if t <= 0:
                raise HardError("op-domain", f"solver timeout must be positive, got {t}")
            return t
        raise HardError("Op-E2", "expected a bv[32] option timeout")

    def op_is_sat_opt(self, phis, timeout):
        v = self.check(self._conjuncts(phis), self._timeout(timeout)).verdict
        if v == UNKNOWN:
            return NONE
        return some(boolean(v == SAT))

    def op_get_model(self, phis, timeout):
        ans = self.check(self._conjuncts(phis), self._timeout(timeout), want_model=True)
        if ans.verdict != SAT:
            return NONE
        return some(ans.model)

    def op_query_model(self, var, model):
        if not isinstance(model, ModelValue):
            raise HardError("Op-E2", "query_model expects a model")
        v = model.get(var)
        return NONE if v is None else some(v)
