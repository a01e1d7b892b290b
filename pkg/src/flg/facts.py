"""Reading and writing relation files (tab-separated values in source syntax)."""
from __future__ import annotations

from pathlib import Path

from .diagnostics import Diagnostic, StaticError
from .kernels import to_smt_value
from .parser.desugar import resolve_type_in
from .parser.lexer import SyntaxErr
from .parser.parser import parse_expression
from .program import Program
from .syntax import EApp, EConst, ECtor, EQuote, ERecord, ESmtVar, EOp, Span
from .terms import Const, Ctor, show, smt_var, wrap
from .types import AdtType, BaseType, ModelType, SmtType, SymType, Type, erase


class FactError(ValueError):
    pass


def value_of(e, t: Type, prog: Program):
    """Convert a parsed literal to a value of type ``t`` or raise FactError."""
    if isinstance(t, BaseType):
        if isinstance(e, EOp) and e.op == "neg" and isinstance(e.args[0], EConst):
            e = EConst(Const(e.args[0].value.sort, -e.args[0].value.value))
        if not isinstance(e, EConst):
            raise FactError(f"expected a {t} literal")
        k = e.value
        if t.name in ("bv32", "bv64") and k.sort in ("bv32", "bv64"):
            width = int(t.name[2:])
            if k.sort == "bv64" and width == 32:
                raise FactError(f"64-bit literal in a {t} column")
            return Const(t.name, wrap(k.value, width))
        if k.sort != t.name:
            raise FactError(f"expected a {t} literal, got {show(k)}")
        return k
    if isinstance(t, AdtType) and t.name in prog.adts:
        if isinstance(e, EApp):
            e = ECtor(e.name, e.args, e.span)
        if isinstance(e, ERecord):
            ctor = prog.record_types.get(t.name)
            if ctor is None:
                raise FactError(f"a record is not a {t}")
            given = dict(e.fields)
            fields = prog.records[ctor]
            if set(given) != set(fields):
                raise FactError(f"record fields {sorted(given)} do not match {list(fields)}")
            e = ECtor(ctor, tuple(given[f] for f in fields), e.span)
        if not isinstance(e, ECtor):
            raise FactError(f"expected a value of type {t}")
        if prog.ctor_owner.get(e.name) != t.name:
            raise FactError(f"constructor {e.name} does not build a {t}")
        adt, tys = prog.ctor_sig(e.name)
        if len(tys) != len(e.args):
            raise FactError(f"constructor {e.name} expects {len(tys)} argument(s)")
        from .types import subst_type
        mapping = dict(zip(adt.params, t.args))
        return Ctor(e.name, tuple(value_of(a, subst_type(ft, mapping), prog)
                                  for a, ft in zip(e.args, tys)))
    if isinstance(t, SymType):
        return _sym(e, t, prog)
    if isinstance(t, SmtType):
        if isinstance(e, ESmtVar):
            v = _sym(e, SymType(t.inner), prog)
            return v
        if isinstance(e, EQuote):
            inner = e.formula
            if isinstance(inner, ESmtVar):
                return _sym(inner, SymType(t.inner), prog)
            return to_smt_value(value_of(inner, erase(t.inner), prog))
        raise FactError(f"expected a quoted formula of type {t}")
    if isinstance(t, ModelType):
        raise FactError("models cannot be read from fact files")
    raise FactError(f"cannot read values of type {t}")


def _sym(e, t: SymType, prog: Program):
    if not isinstance(e, ESmtVar):
        raise FactError(f"expected an SMT variable of type {t}")
    try:
        declared = resolve_type_in(prog, e.type)
    except ValueError as exc:
        raise FactError(str(exc)) from None
    if erase(declared) != erase(t.inner):
        raise FactError(f"SMT variable has type {e.type}, expected {t.inner}")
    name = e.name
    if not isinstance(name, EConst):
        raise FactError("SMT variable names in fact files must be literals")
    return smt_var(name.value, erase(t.inner))


def read_facts(path: Path, prog: Program, rel: str) -> list[tuple]:
    types = prog.rels[rel].types
    out, diags = [], []
    lines = path.read_text().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for lineno, line in enumerate(lines, 1):
        if line.endswith("\r"):
            line = line[:-1]
        if not line.strip() and types:
            continue
        fields = line.split("\t") if types else []
        if len(fields) != len(types):
            diags.append(Diagnostic("error", "facts", f"{rel}: expected {len(types)} column(s), "
                                    f"got {len(fields)}", Span(lineno, 1, str(path))))
            continue
        row = []
        col = 1
        for text, t in zip(fields, types):
            try:
                e = parse_expression(text, str(path))
                row.append(value_of(e, t, prog))
            except SyntaxErr as exc:
                diags.append(Diagnostic("error", "facts", f"{rel}: unparseable value "
                                        f"{text!r}: {exc.msg}", Span(lineno, col, str(path))))
            except FactError as exc:
                diags.append(Diagnostic("error", "facts", f"{rel}: {exc}",
                                        Span(lineno, col, str(path))))
            col += len(text) + 1
        if len(row) == len(types):
            out.append(tuple(row))
    if diags:
        raise StaticError(diags)
    return out


def format_row(tup: tuple, prog: Program) -> str:
    # show() escapes tabs and newlines inside string literals
    return "\t".join(show(v, prog.records) for v in tup)


def dump_relation(path: Path, rows: list[tuple], prog: Program):
    text = "".join(format_row(t, prog) + "\n" for t in rows)
    path.write_text(text)
