"""Brute-force backend for purely propositional scripts.

It reads the serialized script back, so it checks the serializer output
rather than the formula values.  Only Bool constants and the core
connectives are understood; anything else is an error.
"""
from __future__ import annotations

import itertools

from .backends import SolverError
from .serialize import Script
from .sexp import Sym, parse_all


class TruthTableBackend:
    name = "truth-table"

    def __init__(self, max_vars: int = 12):
        self.max_vars = max_vars
        self.calls = 0

    def send(self, script: Script) -> str:
        self.calls += 1
        names, asserts, model = [], [], False
        for cmd in parse_all(script.text):
            head = cmd[0].name
            if head == "declare-const":
                if cmd[2] != Sym("Bool"):
                    raise SolverError(f"truth-table backend: non-Bool constant {cmd[1]}")
                names.append(cmd[1].name)
            elif head == "assert":
                asserts.append(cmd[1])
            elif head == "get-model":
                model = True
            elif head in ("set-option", "set-logic", "check-sat"):
                continue
            else:
                raise SolverError(f"truth-table backend: unsupported command {head}")
        if len(names) > self.max_vars:
            raise SolverError("truth-table backend: too many variables")
        for bits in itertools.product((False, True), repeat=len(names)):
            env = dict(zip(names, bits))
            if all(_eval(a, env) for a in asserts):
                if not model:
                    return "sat\n"
                defs = " ".join(f"(define-fun {n} () Bool {'true' if b else 'false'})"
                                for n, b in env.items())
                return f"sat\n({defs})\n"
        return "unsat\n"

    def close(self):
        pass


def _eval(sx, env) -> bool:
    if isinstance(sx, Sym):
        if sx.name == "true":
            return True
        if sx.name == "false":
            return False
        if sx.name in env:
            return env[sx.name]
        raise SolverError(f"truth-table backend: unknown symbol {sx.name}")
    op = sx[0].name
    args = sx[1:]
    if op == "not":
        return not _eval(args[0], env)
    if op == "and":
        return all(_eval(a, env) for a in args)
    if op == "or":
        return any(_eval(a, env) for a in args)
    if op == "=>":
        vals = [_eval(a, env) for a in args]
        out = vals[-1]
        for v in reversed(vals[:-1]):
            out = (not v) or out
        return out
    if op == "=":
        vals = [_eval(a, env) for a in args]
        return all(v == vals[0] for v in vals)
    if op == "xor":
        return _eval(args[0], env) != _eval(args[1], env)
    if op == "ite":
        return _eval(args[1], env) if _eval(args[0], env) else _eval(args[2], env)
    raise SolverError(f"truth-table backend: unsupported operator {op}")
