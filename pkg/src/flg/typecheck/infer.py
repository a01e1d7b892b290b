"""Unification-based inference over types extended with metavariables."""
from __future__ import annotations

import itertools

from ..types import (
    BOOL, BV32, AdtType, BaseType, ModelType, SmtType, SymType, Type, TypeVar,
)


class Meta(Type):
    """A flexible type variable.  ``pre`` metas may only become pre-types."""

    __slots__ = ("id", "ref", "pre", "bv")
    _ids = itertools.count()

    def __init__(self, pre: bool = False, bv: bool = False):
        self.id = next(Meta._ids)
        self.ref: Type | None = None
        self.pre = pre
        self.bv = bv

    def is_pretype(self) -> bool:
        return True

    def __str__(self) -> str:
        r = self.ref
        return str(r) if r is not None else f"?{self.id}"

    __repr__ = __str__


class Mismatch(Exception):
    pass


def prune(t: Type) -> Type:
    while isinstance(t, Meta) and t.ref is not None:
        t = t.ref
    return t


def zonk(t: Type) -> Type:
    """Resolve every bound meta inside ``t``."""
    t = prune(t)
    if isinstance(t, AdtType) and t.args:
        return AdtType(t.name, tuple(zonk(a) for a in t.args))
    if isinstance(t, SmtType):
        inner = zonk(t.inner)
        return SmtType(inner) if inner.is_pretype() else inner
    if isinstance(t, SymType):
        inner = zonk(t.inner)
        return SymType(inner) if inner.is_pretype() else inner
    return t


def occurs(m: Meta, t: Type) -> bool:
    t = prune(t)
    if t is m:
        return True
    if isinstance(t, AdtType):
        return any(occurs(m, a) for a in t.args)
    if isinstance(t, (SmtType, SymType)):
        return occurs(m, t.inner)
    return False


def unify(a: Type, b: Type) -> None:
    a, b = prune(a), prune(b)
    if a is b:
        return
    if isinstance(a, Meta):
        _bind(a, b)
        return
    if isinstance(b, Meta):
        _bind(b, a)
        return
    if isinstance(a, BaseType) and isinstance(b, BaseType):
        if a.name != b.name:
            raise Mismatch()
        return
    if isinstance(a, TypeVar) and isinstance(b, TypeVar):
        if a.name != b.name:
            raise Mismatch()
        return
    if isinstance(a, ModelType) and isinstance(b, ModelType):
        return
    if isinstance(a, AdtType) and isinstance(b, AdtType):
        if a.name != b.name or len(a.args) != len(b.args):
            raise Mismatch()
        for x, y in zip(a.args, b.args):
            unify(x, y)
        return
    if type(a) is type(b) and isinstance(a, (SmtType, SymType)):
        unify(a.inner, b.inner)
        return
    raise Mismatch()


def _bind(m: Meta, t: Type) -> None:
    if isinstance(t, Meta):
        # merge constraints onto the surviving meta
        t.pre = t.pre or m.pre
        t.bv = t.bv or m.bv
        m.ref = t
        return
    if occurs(m, t):
        raise Mismatch()
    if m.pre and not t.is_pretype():
        raise Mismatch()
    if m.bv and not (isinstance(t, BaseType) and t.name in ("bv32", "bv64")):
        raise Mismatch()
    m.ref = t


def erase_pre(t: Type) -> Type:
    """Erase smt/sym wrappers, treating unresolved metas as already erased."""
    t = prune(t)
    if isinstance(t, (SmtType, SymType)):
        return erase_pre(t.inner)
    if isinstance(t, AdtType) and t.args:
        return AdtType(t.name, tuple(erase_pre(a) for a in t.args))
    return t


def has_unresolved(t: Type) -> bool:
    t = prune(t)
    if isinstance(t, Meta):
        return True
    if isinstance(t, AdtType):
        return any(has_unresolved(a) for a in t.args)
    if isinstance(t, (SmtType, SymType)):
        return has_unresolved(t.inner)
    return False


def has_tvar(t: Type) -> bool:
    t = prune(t)
    if isinstance(t, TypeVar):
        return True
    if isinstance(t, AdtType):
        return any(has_tvar(a) for a in t.args)
    if isinstance(t, (SmtType, SymType)):
        return has_tvar(t.inner)
    return False


def has_model(t: Type) -> bool:
    t = prune(t)
    if isinstance(t, ModelType):
        return True
    if isinstance(t, AdtType):
        return any(has_model(a) for a in t.args)
    return False


def default_metas(t: Type) -> None:
    """Ground every unresolved meta in ``t`` (bit-vector metas to bv[32], others to bool)."""
    t = prune(t)
    if isinstance(t, Meta):
        t.ref = BV32 if t.bv else BOOL
    elif isinstance(t, AdtType):
        for a in t.args:
            default_metas(a)
    elif isinstance(t, (SmtType, SymType)):
        default_metas(t.inner)


def instantiate(t: Type, mapping: dict) -> Type:
    if isinstance(t, TypeVar):
        return mapping.get(t.name, t)
    if isinstance(t, AdtType) and t.args:
        return AdtType(t.name, tuple(instantiate(a, mapping) for a in t.args))
    if isinstance(t, SmtType):
        return SmtType(instantiate(t.inner, mapping))
    if isinstance(t, SymType):
        return SymType(instantiate(t.inner, mapping))
    return t
