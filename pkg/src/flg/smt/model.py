"""Decode solver models into ModelValue bindings."""
from __future__ import annotations

from typing import Optional

from ..program import Program
from ..terms import Const, Ctor, ModelValue, wrap
from ..typecheck.infer import instantiate
from ..types import AdtType, BaseType, Type
from .serialize import erase_field, smt_name
from .sexp import Kw, SexpError, Str, Sym, parse_one


class ModelError(ValueError):
    pass


class _Unrepresentable(Exception):
    pass


def parse_model(text: str, free_vars: list, prog: Program) -> ModelValue:
    """``free_vars`` lists (mangled name, variable value, pre-type) of the query."""
    try:
        sx = parse_one(text)
    except SexpError as exc:
        raise ModelError(f"unparseable model: {exc}") from None
    if not isinstance(sx, list):
        raise ModelError(f"unexpected model reply: {text.strip()[:200]}")
    if sx and sx[0] == Sym("model"):
        sx = sx[1:]
    if sx and sx[0] == Sym("error"):
        raise ModelError(f"solver error: {text.strip()[:200]}")
    wanted = {m: (v, t) for m, v, t in free_vars}
    decoder = _Decoder(prog)
    out = {}
    for d in sx:
        if not (isinstance(d, list) and len(d) == 5 and d[0] == Sym("define-fun")):
            continue
        name, params, _sort, body = d[1], d[2], d[3], d[4]
        if params or not isinstance(name, Sym) or name.name not in wanted:
            continue
        var, ty = wanted[name.name]
        try:
            out[var] = decoder.value(body, ty, {})
        except _Unrepresentable:
            pass  # left unassigned: not expressible as a concrete value
    return ModelValue(out)


class _Decoder:
    def __init__(self, prog: Program):
        self.prog = prog
        self.ctor_by_smt = {smt_name(c): c for c in prog.ctor_owner}

    def value(self, sx, ty: Type, lets: dict):
        if isinstance(sx, Sym) and not sx.quoted and sx.name in lets:
            return self.value(lets[sx.name], ty, lets)
        if isinstance(sx, list) and sx and sx[0] == Sym("let"):
            inner = dict(lets)
            for b in sx[1]:
                inner[b[0].name] = b[1]
            return self.value(sx[2], ty, inner)
        if isinstance(ty, BaseType):
            return self.base(sx, ty)
        if isinstance(ty, AdtType) and ty.name in self.prog.adts:
            return self.adt(sx, ty, lets)
        raise _Unrepresentable()

    def base(self, sx, ty: BaseType):
        if ty.name == "bool":
            if sx == Sym("true"):
                return Const("bool", True)
            if sx == Sym("false"):
                return Const("bool", False)
            raise _Unrepresentable()
        if ty.name == "string":
            if isinstance(sx, Str):
                return Const("string", sx.value)
            raise _Unrepresentable()
        width = int(ty.name[2:])
        n = decode_bv(sx)
        if n is None:
            raise _Unrepresentable()
        return Const(ty.name, wrap(n, width))

    def adt(self, sx, ty: AdtType, lets):
        if isinstance(sx, list) and len(sx) == 3 and sx[0] == Sym("as"):
            sx = sx[1]
        if isinstance(sx, Sym):
            head, args = sx, []
        elif isinstance(sx, list) and sx and isinstance(sx[0], Sym):
            head, args = sx[0], sx[1:]
            if isinstance(head, list):
                raise _Unrepresentable()
        elif isinstance(sx, list) and sx and isinstance(sx[0], list) and sx[0][:1] == [Sym("as")]:
            head, args = sx[0][1], sx[1:]
        else:
            raise _Unrepresentable()
        c = self.ctor_by_smt.get(head.name)
        if c is None or self.prog.ctor_owner[c] != ty.name:
            raise _Unrepresentable()
        adt, tys = self.prog.ctor_sig(c)
        if len(tys) != len(args):
            raise _Unrepresentable()
        mapping = dict(zip(adt.params, ty.args))
        vals = [self.value(a, erase_field(instantiate(ft, mapping)), lets)
                for a, ft in zip(args, tys)]
        return Ctor(c, tuple(vals))


def decode_bv(sx) -> Optional[int]:
    """Unsigned value of a bit-vector literal (#x.., #b.., (_ bvN w))."""
    if isinstance(sx, Sym):
        s = sx.name
        if s.startswith("#x"):
            return int(s[2:], 16)
        if s.startswith("#b"):
            return int(s[2:], 2)
        return None
    if isinstance(sx, list) and len(sx) == 3 and sx[0] == Sym("_") and isinstance(sx[1], Sym) \
            and sx[1].name.startswith("bv") and isinstance(sx[2], int):
        return int(sx[1].name[2:])
    return None


__all__ = ["Kw", "ModelError", "decode_bv", "parse_model"]
