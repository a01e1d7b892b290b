"""Declaration tables of a compiled program (data types, functions, relations)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .syntax import NOSPAN, Clause, Expr, Span
from .types import AdtType, Type, TypeVar

MAX_TUPLE = 8


@dataclass
class AdtDecl:
    name: str
    params: tuple[str, ...]
    ctors: dict[str, tuple[Type, ...]]  # insertion order = declaration order
    builtin: bool = False
    span: Span = NOSPAN

    def self_type(self) -> AdtType:
        return AdtType(self.name, tuple(TypeVar(p) for p in self.params))


@dataclass
class FunDef:
    name: str
    params: list[str]
    param_types: list[Optional[Type]]
    ret: Optional[Type]
    body: Expr
    span: Span = NOSPAN
    lifted_from: Optional[str] = None


@dataclass
class Relation:
    name: str
    types: tuple[Type, ...]
    kind: str  # "input" | "output" | "rel"
    span: Span = NOSPAN
    implicit: bool = False

    @property
    def is_input(self) -> bool:
        return self.kind == "input"


@dataclass
class UFun:
    name: str
    args: tuple[Type, ...]
    ret: Type
    span: Span = NOSPAN


@dataclass
class Program:
    path: str = "<input>"
    adts: dict[str, AdtDecl] = field(default_factory=dict)
    ctor_owner: dict[str, str] = field(default_factory=dict)
    usorts: dict[str, int] = field(default_factory=dict)
    aliases: dict[str, tuple] = field(default_factory=dict)
    funs: dict[str, FunDef] = field(default_factory=dict)
    rels: dict[str, Relation] = field(default_factory=dict)
    ufs: dict[str, UFun] = field(default_factory=dict)
    clauses: list[Clause] = field(default_factory=list)
    records: dict[str, tuple[str, ...]] = field(default_factory=dict)  # ctor -> fields
    record_types: dict[str, str] = field(default_factory=dict)  # type -> ctor
    # filled by the checker
    rule_var_types: dict[int, dict[str, Type]] = field(default_factory=dict)
    strata: list = field(default_factory=list)

    def ctor_sig(self, c: str) -> tuple[AdtDecl, tuple[Type, ...]]:
        adt = self.adts[self.ctor_owner[c]]
        return adt, adt.ctors[c]

    def outputs(self) -> list[str]:
        return sorted(n for n, r in self.rels.items() if r.kind == "output")

    def inputs(self) -> list[str]:
        return sorted(n for n, r in self.rels.items() if r.kind == "input")


def builtin_adts() -> list[AdtDecl]:
    a = TypeVar("a")
    out = [
        AdtDecl("list", ("a",), {"nil": (), "cons": (a, AdtType("list", (a,)))}, True),
        AdtDecl("option", ("a",), {"none": (), "some": (a,)}, True),
    ]
    for n in range(2, MAX_TUPLE + 1):
        ps = tuple(f"t{i}" for i in range(1, n + 1))
        out.append(AdtDecl(f"$tuple{n}", ps, {f"$tuple{n}": tuple(TypeVar(p) for p in ps)}, True))
    return out
