"""Dynamic check that a world agrees with the relation signatures."""
from __future__ import annotations

from ..program import Program
from ..terms import SMT_CTOR_NAMES, SMT_VAR, Const, Ctor, ModelValue
from ..types import AdtType, BaseType, ModelType, SmtType, SymType, Type, TypeVar, erase
from .world import World


def value_has_type(prog: Program, v, t: Type) -> bool:
    if isinstance(t, BaseType):
        return isinstance(v, Const) and v.sort == t.name
    if isinstance(t, ModelType):
        return isinstance(v, ModelValue)
    if isinstance(t, SymType):
        return (isinstance(v, Ctor) and v.name == SMT_VAR
                and v.params[1] == erase(t.inner))
    if isinstance(t, SmtType):
        return isinstance(v, Ctor) and v.name in SMT_CTOR_NAMES
    if isinstance(t, TypeVar):
        return True
    if isinstance(t, AdtType):
        if not isinstance(v, Ctor) or prog.ctor_owner.get(v.name) != t.name:
            return False
        adt, tys = prog.ctor_sig(v.name)
        if len(tys) != len(v.args):
            return False
        from ..types import subst_type
        mapping = dict(zip(adt.params, t.args))
        return all(value_has_type(prog, a, subst_type(ft, mapping)) for a, ft in zip(v.args, tys))
    return False


def world_problems(prog: Program, world: World, preds=None) -> list[str]:
    """Empty iff every stored tuple has its relation's arity and element types."""
    out = []
    for name in sorted(preds if preds is not None else world.rels):
        rel = prog.rels[name]
        for tup in world[name].rows:
            if len(tup) != len(rel.types):
                out.append(f"{name}: arity {len(tup)} tuple")
                continue
            for i, (v, t) in enumerate(zip(tup, rel.types)):
                if not value_has_type(prog, v, t):
                    out.append(f"{name}: column {i + 1} value {v!r} is not a {t}")
    return out
