"""Type domain: pre-types, formula types, and the erase/to_smt conversions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

BV_WIDTHS = (32, 64)


class Type:
    __slots__ = ()

    def is_pretype(self) -> bool:
        return isinstance(self, (BaseType, AdtType, TypeVar))


@dataclass(frozen=True)
class BaseType(Type):
    name: str  # "bool" | "string" | "bv32" | "bv64"

    def __str__(self) -> str:
        if self.name.startswith("bv"):
            return f"bv[{self.name[2:]}]"
        return self.name


@dataclass(frozen=True)
class AdtType(Type):
    name: str
    args: tuple[Type, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.name
        if self.name.startswith("$tuple"):
            return "(" + " * ".join(_paren(a) for a in self.args) + ")"
        if len(self.args) == 1:
            return f"{_paren(self.args[0])} {self.name}"
        return "(" + ", ".join(str(a) for a in self.args) + f") {self.name}"


@dataclass(frozen=True)
class TypeVar(Type):
    name: str

    def __str__(self) -> str:
        return "'" + self.name


@dataclass(frozen=True)
class SmtType(Type):
    inner: Type

    def __post_init__(self):
        if not self.inner.is_pretype():
            raise TypeError(f"smt wraps only pre-types, got {self.inner}")

    def __str__(self) -> str:
        return f"{_paren(self.inner)} smt"


@dataclass(frozen=True)
class SymType(Type):
    inner: Type

    def __post_init__(self):
        if not self.inner.is_pretype():
            raise TypeError(f"sym wraps only pre-types, got {self.inner}")

    def __str__(self) -> str:
        return f"{_paren(self.inner)} sym"


@dataclass(frozen=True)
class ModelType(Type):
    def __str__(self) -> str:
        return "model"


def _paren(t: Type) -> str:
    s = str(t)
    if isinstance(t, AdtType) and t.name.startswith("$tuple"):
        return s
    return f"({s})" if " " in s else s


BOOL = BaseType("bool")
STRING = BaseType("string")
BV32 = BaseType("bv32")
BV64 = BaseType("bv64")
MODEL = ModelType()


def bv(width: int) -> BaseType:
    if width not in BV_WIDTHS:
        raise ValueError(f"unsupported bit-vector width {width}")
    return BaseType(f"bv{width}")


def list_of(t: Type) -> AdtType:
    return AdtType("list", (t,))


def option_of(t: Type) -> AdtType:
    return AdtType("option", (t,))


def tuple_of(*ts: Type) -> AdtType:
    return AdtType(f"$tuple{len(ts)}", tuple(ts))


class UndefinedForType(Exception):
    """Raised when erase/to_smt is applied outside its domain."""


def erase(t: Type) -> Type:
    """Strip every smt/sym wrapper, recursively through ADT arguments."""
    if isinstance(t, BaseType):
        return t
    if isinstance(t, AdtType):
        return AdtType(t.name, tuple(erase(a) for a in t.args))
    if isinstance(t, (SmtType, SymType)):
        return erase(t.inner)
    if isinstance(t, TypeVar):
        raise UndefinedForType(f"erase undefined on type variable {t}")
    raise UndefinedForType(f"erase undefined on {t}")


def to_smt(t: Type) -> Type:
    if isinstance(t, SymType):
        return SymType(erase(t.inner))
    if isinstance(t, SmtType):
        return SmtType(erase(t.inner))
    if isinstance(t, ModelType):
        raise UndefinedForType("model has no SMT representation")
    return SmtType(erase(t))


def subst_type(t: Type, mapping: dict[str, Type]) -> Type:
    if isinstance(t, TypeVar):
        return mapping.get(t.name, t)
    if isinstance(t, AdtType):
        if not t.args:
            return t
        return AdtType(t.name, tuple(subst_type(a, mapping) for a in t.args))
    if isinstance(t, SmtType):
        inner = subst_type(t.inner, mapping)
        return SmtType(inner) if inner.is_pretype() else _collapse(inner, SmtType)
    if isinstance(t, SymType):
        inner = subst_type(t.inner, mapping)
        return SymType(inner) if inner.is_pretype() else _collapse(inner, SymType)
    return t


def _collapse(inner: Type, wrapper) -> Type:
    # 'a smt with 'a := b smt is not a legal type; keep the inner formula type
    if isinstance(inner, (SmtType, SymType)):
        return wrapper(inner.inner)
    raise TypeError(f"cannot wrap {inner}")


def type_vars(t: Type) -> Iterator[str]:
    if isinstance(t, TypeVar):
        yield t.name
    elif isinstance(t, AdtType):
        for a in t.args:
            yield from type_vars(a)
    elif isinstance(t, (SmtType, SymType)):
        yield from type_vars(t.inner)


def contains_model(t: Type) -> bool:
    if isinstance(t, ModelType):
        return True
    if isinstance(t, AdtType):
        return any(contains_model(a) for a in t.args)
    if isinstance(t, (SmtType, SymType)):
        return contains_model(t.inner)
    return False


def type_tag(t: Type) -> str:
    """Compact SMT-symbol-safe rendering, used in mangled variable names."""
    if isinstance(t, BaseType):
        return t.name
    if isinstance(t, AdtType):
        name = t.name.lstrip("$")
        if not t.args:
            return name
        return name + "." + ".".join(type_tag(a) for a in t.args)
    if isinstance(t, (SmtType, SymType)):
        return type_tag(t.inner)
    if isinstance(t, TypeVar):
        return "?" + t.name
    return "model"
