"""Match exhaustiveness: find a value not covered by a list of patterns."""
from __future__ import annotations

from typing import Optional

from ..syntax import PConst, PCtor, PVar, PWild
from ..types import AdtType, BaseType, Type
from .infer import prune

_WILD = PWild()


def _is_wild(p) -> bool:
    return isinstance(p, (PWild, PVar))


def _ctors_of(prog, t: Type):
    t = prune(t)
    if isinstance(t, AdtType) and t.name in prog.adts:
        adt = prog.adts[t.name]
        return [(c, len(tys)) for c, tys in adt.ctors.items()]
    if isinstance(t, BaseType) and t.name == "bool":
        return [("true", 0), ("false", 0)]
    return None  # infinite domain


def _field_types(prog, t: Type, c: str):
    t = prune(t)
    if isinstance(t, AdtType) and c in prog.ctor_owner:
        from .infer import instantiate
        adt, tys = prog.ctor_sig(c)
        mapping = dict(zip(adt.params, t.args))
        return [instantiate(x, mapping) for x in tys]
    return []


def _head(p):
    """Constructor name of a pattern head (bool constants count as constructors)."""
    if isinstance(p, PCtor):
        return p.name
    if isinstance(p, PConst):
        if p.value.sort == "bool":
            return "true" if p.value.value else "false"
        return ("const", p.value)
    return None


def _specialize(rows, c, arity):
    out = []
    for r in rows:
        h = r[0]
        if _is_wild(h):
            out.append([_WILD] * arity + r[1:])
        elif _head(h) == c:
            args = list(h.args) if isinstance(h, PCtor) else []
            out.append(args + r[1:])
    return out


def _default(rows):
    return [r[1:] for r in rows if _is_wild(r[0])]


def _witness(prog, rows, types, depth=0) -> Optional[list[str]]:
    """Return a list of printed values (one per column) not matched by any row."""
    if not types:
        return None if rows else []
    if depth > 40:
        return None
    t = types[0]
    ctors = _ctors_of(prog, t)
    heads = {_head(r[0]) for r in rows if not _is_wild(r[0])}
    if ctors is not None and heads >= {c for c, _ in ctors}:
        for c, n in ctors:
            ftys = _field_types(prog, t, c)
            if len(ftys) != n:
                ftys = [BaseType("string")] * n
            w = _witness(prog, _specialize(rows, c, n), ftys + types[1:], depth + 1)
            if w is not None:
                return [_show(c, w[:n])] + w[n:]
        return None
    w = _witness(prog, _default(rows), types[1:], depth + 1)
    if w is None:
        return None
    if ctors is None:
        return ["_"] + w
    missing = [(c, n) for c, n in ctors if c not in heads]
    c, n = missing[0]
    return [_show(c, ["_"] * n)] + w


def _show(c: str, args: list[str]) -> str:
    if c.startswith("$tuple"):
        return "(" + ", ".join(args) + ")"
    if c.startswith("$rec_"):
        return "{...}"
    if not args:
        return c
    return c + "(" + ", ".join(args) + ")"


def missing_case(prog, patterns, scrut_type: Type) -> Optional[str]:
    w = _witness(prog, [[p] for p in patterns], [scrut_type])
    return None if w is None else w[0]
