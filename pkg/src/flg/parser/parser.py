"""Recursive-descent parser producing the surface tree of ``flg.syntax``.

Names are left unresolved here (``EApp``); whether ``foo(x)`` is a constructor,
function call, or predicate query is decided by the desugarer, which has the
declaration tables.  Types are likewise parsed into placeholder ``AdtType``
nodes and resolved later.
"""
from __future__ import annotations

from ..syntax import (
    Anon, EApp, EConst, ECtor, EFormula, EIf, ELet, ELetFun, EMatch, EOp, EQuote,
    ERecord, ERecordUpdate, ESmtVar, EVar, FunDecl, PConst, PCtor, PVar, PWild,
    RelDecl, SClause, SortDecl, SourceProgram, Span, TypeDecl, UfDecl, Wildcard,
)
from ..terms import FALSE, TRUE, Const, string, wrap
from ..types import AdtType, Type, TypeVar, bv
from .lexer import SyntaxErr, Token, tokenize

COMPARISONS = ("#=", "=", "!=", "<", "<=", ">", ">=")
_DECL_START = {"type", "fun", "input", "output", "rel", "uninterpreted"}


def parse_program(text: str, path: str = "<input>") -> SourceProgram:
    return Parser(tokenize(text, path)).program(path, text)


def parse_expression(text: str, path: str = "<input>"):
    p = Parser(tokenize(text, path))
    e = p.expr()
    p.expect("EOF")
    return e


def parse_type_text(text: str, path: str = "<input>") -> Type:
    p = Parser(tokenize(text, path))
    t = p.type_()
    p.expect("EOF")
    return t


def int_const(value: int, width: int) -> Const:
    return Const(f"bv{width}", wrap(value, width))


class Parser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.i = 0

    # ------------------------------------------------------------ helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        return self.tok.is_(kind, text)

    def at_sym(self, text: str) -> bool:
        return self.tok.is_("SYM", text)

    def at_kw(self, text: str) -> bool:
        return self.tok.is_("KW", text)

    def accept_sym(self, text: str) -> bool:
        if self.at_sym(text):
            self.advance()
            return True
        return False

    def accept_kw(self, text: str) -> bool:
        if self.at_kw(text):
            self.advance()
            return True
        return False

    def fail(self, msg: str, expected=()):
        raise SyntaxErr(self.tok.span, msg, expected)

    def expect(self, kind: str, text: str | None = None) -> Token:
        if self.tok.is_(kind, text):
            return self.advance()
        want = text if text is not None else kind
        got = self.tok.text or self.tok.kind
        self.fail(f"unexpected {got!r}", [want])

    def expect_sym(self, text: str) -> Token:
        return self.expect("SYM", text)

    def expect_kw(self, text: str) -> Token:
        return self.expect("KW", text)

    def lident(self) -> Token:
        return self.expect("LIDENT")

    # ------------------------------------------------------------ program
    def program(self, path: str, text: str) -> SourceProgram:
        prog = SourceProgram(path, text)
        while not self.at("EOF"):
            prog.decls.extend(self.decl())
        return prog

    def decl(self) -> list:
        t = self.tok
        if t.is_("KW", "type"):
            self.advance()
            out = [self.typedef()]
            while self.accept_kw("and"):
                out.append(self.typedef())
            return out
        if t.is_("KW", "fun"):
            self.advance()
            out = [self.fundef()]
            while self.accept_kw("and"):
                out.append(self.fundef())
            return out
        if t.kind == "KW" and t.text in ("input", "output", "rel"):
            self.advance()
            name = self.lident()
            types = []
            if self.accept_sym("("):
                if not self.at_sym(")"):
                    types = self.type_list()
                self.expect_sym(")")
            self.accept_sym(".")
            return [RelDecl(name.text, types, t.text, name.span)]
        if t.is_("KW", "uninterpreted"):
            self.advance()
            if self.accept_kw("fun"):
                name = self.lident()
                self.expect_sym("(")
                args = [] if self.at_sym(")") else self.type_list()
                self.expect_sym(")")
                self.expect_sym(":")
                ret = self.type_()
                self.accept_sym(".")
                return [UfDecl(name.text, args, ret, name.span)]
            if self.accept_kw("sort"):
                params = self.type_params()
                name = self.lident()
                self.accept_sym(".")
                return [SortDecl(name.text, params, name.span)]
            self.fail("expected 'fun' or 'sort' after 'uninterpreted'", ["fun", "sort"])
        if t.kind == "LIDENT":
            return [self.clause()]
        self.fail(f"unexpected {t.text or t.kind!r} at top level",
                  ["type", "fun", "input", "output", "uninterpreted", "clause"])

    def type_params(self) -> list[str]:
        if self.at("TVAR"):
            return [self.advance().text]
        if self.at_sym("(") and self.peek().kind == "TVAR":
            self.advance()
            out = [self.expect("TVAR").text]
            while self.accept_sym(","):
                out.append(self.expect("TVAR").text)
            self.expect_sym(")")
            return out
        return []

    def typedef(self) -> TypeDecl:
        params = self.type_params()
        name = self.lident()
        self.expect_sym("=")
        decl = TypeDecl(name.text, params, span=name.span)
        if self.accept_sym("{"):
            fields = []
            while not self.at_sym("}"):
                f = self.lident()
                self.expect_sym(":")
                fields.append((f.text, self.type_()))
                if not self.accept_sym(";"):
                    break
            self.expect_sym("}")
            decl.record = fields
            return decl
        if self.at_sym("|") or (self.at("LIDENT") and self.peek().is_("SYM", "(")) or (
            self.at("LIDENT") and self.peek().is_("SYM", "|")
        ):
            self.accept_sym("|")
            ctors = [self.ctor_decl()]
            while self.accept_sym("|"):
                ctors.append(self.ctor_decl())
            decl.ctors = ctors
            return decl
        decl.alias = self.type_()
        return decl

    def ctor_decl(self):
        name = self.lident()
        args = []
        if self.accept_sym("("):
            if not self.at_sym(")"):
                args = self.type_list()
            self.expect_sym(")")
        return (name.text, args)

    def fundef(self) -> FunDecl:
        name = self.lident()
        params = []
        if self.accept_sym("("):
            while not self.at_sym(")"):
                p = self.advance()
                if p.kind not in ("LIDENT", "UIDENT"):
                    raise SyntaxErr(p.span, "expected parameter name", ["identifier"])
                ty = None
                if self.accept_sym(":"):
                    ty = self.type_()
                params.append((p.text, ty))
                if not self.accept_sym(","):
                    break
            self.expect_sym(")")
        ret = None
        if self.accept_sym(":"):
            ret = self.type_()
        self.expect_sym("=")
        body = self.expr()
        return FunDecl(name.text, params, ret, body, name.span)

    def clause(self) -> SClause:
        head = self.lident()
        args: tuple = ()
        if self.accept_sym("("):
            args = tuple(self.expr_list(")"))
            self.expect_sym(")")
        body = []
        if self.accept_sym(":-"):
            body.append(self.expr())
            while self.accept_sym(","):
                body.append(self.expr())
        self.expect_sym(".")
        return SClause(head.text, args, tuple(body), head.span)

    # ------------------------------------------------------------ types
    def type_list(self) -> list[Type]:
        out = [self.type_()]
        while self.accept_sym(","):
            out.append(self.type_())
        return out

    def type_(self) -> Type:
        first = self.type_app()
        if not self.at_sym("*"):
            return first
        items = [first]
        while self.accept_sym("*"):
            items.append(self.type_app())
        return AdtType(f"$tuple{len(items)}", tuple(items))

    def _type_ctor_follows(self) -> bool:
        if not self.at("LIDENT"):
            return False
        nxt = self.peek()
        return not (nxt.is_("SYM", "(") or nxt.is_("SYM", ":-") or nxt.is_("SYM", "."))

    def type_app(self) -> Type:
        t = self.type_atom()
        while self._type_ctor_follows():
            name = self.advance().text
            args = t.args if isinstance(t, AdtType) and t.name == "$args" else (t,)
            t = AdtType(name, tuple(args))
        if isinstance(t, AdtType) and t.name == "$args":
            self.fail("type argument list must be applied to a type constructor")
        return t

    def type_atom(self) -> Type:
        tok = self.tok
        if tok.kind == "TVAR":
            self.advance()
            return TypeVar(tok.text)
        if tok.kind == "LIDENT":
            self.advance()
            if tok.text == "bv" and self.accept_sym("["):
                width = self.expect("INT")
                self.expect_sym("]")
                try:
                    return bv(width.value[0])
                except ValueError as exc:
                    raise SyntaxErr(width.span, str(exc)) from None
            return AdtType(tok.text, ())
        if tok.is_("SYM", "("):
            self.advance()
            items = self.type_list()
            self.expect_sym(")")
            if len(items) == 1:
                return items[0]
            return AdtType("$args", tuple(items))
        self.fail(f"unexpected {tok.text or tok.kind!r} in type", ["type"])

    # ------------------------------------------------------------ expressions
    def expr_list(self, closer: str) -> list:
        out = []
        if self.at_sym(closer):
            return out
        out.append(self.expr())
        while self.accept_sym(","):
            out.append(self.expr())
        return out

    def expr(self):
        t = self.tok
        if t.is_("KW", "let"):
            return self.let_expr()
        if t.is_("KW", "if"):
            self.advance()
            c = self.expr()
            self.expect_kw("then")
            a = self.expr()
            self.expect_kw("else")
            b = self.expr()
            return EIf(c, a, b, t.span)
        if t.kind == "HASHIF":
            self.advance()
            c = self.expr()
            self.expect_kw("then")
            a = self.expr()
            self.expect_kw("else")
            b = self.expr()
            return EFormula("smt_ite", (), (c, a, b), t.span)
        if t.is_("KW", "match"):
            return self.match_expr()
        if t.kind == "KW" and t.text in ("forall", "exists"):
            return self.binder_expr()
        return self.implication()

    def let_expr(self):
        start = self.expect_kw("let")
        if self.accept_kw("fun"):
            fd = self.fundef()
            self.expect_kw("in")
            body = self.expr()
            return ELetFun(fd, body, start.span)
        pat = self.pattern()
        self.expect_sym("=")
        value = self.expr()
        self.expect_kw("in")
        body = self.expr()
        return ELet(pat, value, body, start.span)

    def match_expr(self):
        start = self.expect_kw("match")
        scrut = self.expr()
        self.expect_kw("with")
        self.accept_sym("|")
        arms = []
        while True:
            pat = self.pattern()
            self.expect_sym("=>")
            arms.append((pat, self.expr()))
            if not self.accept_sym("|"):
                break
        self.expect_kw("end")
        return EMatch(scrut, tuple(arms), start.span)

    def binder_expr(self):
        kw = self.advance()
        ctor = "smt_forall" if kw.text == "forall" else "smt_exists"
        binders = [self.unary()]
        while self.accept_sym(","):
            binders.append(self.unary())
        pats = []
        if self.accept_sym(":"):
            pats.append(self.implication())
            while self.accept_sym(","):
                pats.append(self.implication())
        self.expect_sym(".")
        body = self.expr()
        # nested single-binder quantifiers; patterns go on the innermost one,
        # where every binder they may mention is in scope
        out = body
        for i, b in enumerate(reversed(binders)):
            p = tuple(pats) if i == 0 else ()
            out = EFormula(ctor, (), (b, out, EFormula("smt_pats", (), p, kw.span)), kw.span)
        return out

    def _rhs(self, sub):
        # let/if/match may appear as the right operand of a binary operator
        t = self.tok
        if t.kind == "HASHIF" or (t.kind == "KW" and t.text in ("let", "if", "match", "forall", "exists")):
            return self.expr()
        return sub()

    def implication(self):
        left = self.disjunction()
        if self.at_sym("==>"):
            op = self.advance()
            right = self._rhs(self.implication)
            return EOp("==>", (left, right), op.span)
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.at_sym("\\/") or self.at_sym("||"):
            op = self.advance()
            left = EOp(op.text, (left, self._rhs(self.conjunction)), op.span)
        return left

    def conjunction(self):
        left = self.comparison()
        while self.at_sym("/\\") or self.at_sym("&&"):
            op = self.advance()
            left = EOp(op.text, (left, self._rhs(self.comparison)), op.span)
        return left

    def comparison(self):
        left = self.cons()
        if self.tok.kind == "SYM" and self.tok.text in COMPARISONS:
            op = self.advance()
            right = self._rhs(self.cons)
            if self.tok.kind == "SYM" and self.tok.text in COMPARISONS:
                self.fail(f"comparison operators do not chain ({op.text} ... {self.tok.text})")
            return EOp(op.text, (left, right), op.span)
        return left

    def cons(self):
        left = self.additive()
        if self.at_sym("::"):
            op = self.advance()
            right = self._rhs(self.cons)
            return ECtor("cons", (left, right), op.span)
        return left

    def additive(self):
        left = self.multiplicative()
        while self.at_sym("+") or self.at_sym("-"):
            op = self.advance()
            left = EOp(op.text, (left, self._rhs(self.multiplicative)), op.span)
        return left

    def multiplicative(self):
        left = self.unary()
        while self.at_sym("*") or self.at_sym("/") or self.at_sym("%"):
            op = self.advance()
            left = EOp(op.text, (left, self._rhs(self.unary)), op.span)
        return left

    def unary(self):
        t = self.tok
        if t.is_("SYM", "-"):
            self.advance()
            if self.at("INT"):
                lit = self.advance()
                val, width = lit.value
                return EConst(int_const(-val, width), t.span)
            return EOp("neg", (self._rhs(self.unary),), t.span)
        if t.is_("SYM", "!") or t.is_("SYM", "~"):
            self.advance()
            return EOp(t.text, (self._rhs(self.unary),), t.span)
        return self.primary()

    def primary(self):
        t = self.tok
        k = t.kind
        if k == "INT":
            self.advance()
            val, width = t.value
            return EConst(int_const(val, width), t.span)
        if k == "STRING":
            self.advance()
            return EConst(string(t.value), t.span)
        if k == "KW" and t.text in ("true", "false"):
            self.advance()
            return EConst(TRUE if t.text == "true" else FALSE, t.span)
        if k == "UIDENT":
            self.advance()
            return EVar(t.text, t.span)
        if k == "ANON":
            self.advance()
            return Anon(t.span)
        if t.is_("SYM", "??"):
            self.advance()
            return Wildcard(t.span)
        if k == "LIDENT":
            self.advance()
            if self.at_sym("[") and self.tok.span.col == t.span.col + len(t.text) \
                    and self.tok.span.line == t.span.line:
                params = self.index_params()
                self.expect_sym("(")
                args = tuple(self.expr_list(")"))
                self.expect_sym(")")
                return EFormula(t.text, params, args, t.span)
            if self.accept_sym("("):
                args = tuple(self.expr_list(")"))
                self.expect_sym(")")
                return EApp(t.text, args, False, t.span)
            return EApp(t.text, (), True, t.span)
        if k == "HASHBRACE":
            self.advance()
            name = self.expr()
            self.expect_sym("}")
            self.expect_sym("[")
            ty = self.type_()
            self.expect_sym("]")
            return ESmtVar(name, ty, t.span)
        if k == "HASHID":
            self.advance()
            if self.accept_sym("["):
                ty = self.type_()
                self.expect_sym("]")
                return ESmtVar(EConst(string(t.text), t.span), ty, t.span)
            self.expect_sym("(")
            args = tuple(self.expr_list(")"))
            self.expect_sym(")")
            return EFormula("#" + t.text, (), args, t.span)
        if t.is_("SYM", "`"):
            self.advance()
            inner = self.expr()
            self.expect_sym("`")
            return EQuote(inner, t.span)
        if t.is_("SYM", "("):
            self.advance()
            if self.accept_sym(")"):
                self.fail("unit '()' is not a value")
            items = [self.expr()]
            while self.accept_sym(","):
                items.append(self.expr())
            self.expect_sym(")")
            if len(items) == 1:
                return items[0]
            return ECtor(f"$tuple{len(items)}", tuple(items), t.span)
        if t.is_("SYM", "["):
            self.advance()
            items = self.expr_list("]")
            self.expect_sym("]")
            out = ECtor("nil", (), t.span)
            for it in reversed(items):
                out = ECtor("cons", (it, out), t.span)
            return out
        if t.is_("SYM", "{"):
            return self.record_expr()
        if k == "KW" and t.text in ("let", "if", "match", "forall", "exists") or k == "HASHIF":
            return self.expr()
        self.fail(f"unexpected {t.text or t.kind!r} in expression", ["expression"])

    def index_params(self) -> tuple:
        self.expect_sym("[")
        out = []
        while True:
            if self.at("INT"):
                out.append(self.advance().value[0])
            else:
                out.append(self.type_())
            if not self.accept_sym(","):
                break
        self.expect_sym("]")
        return tuple(out)

    def record_expr(self):
        start = self.expect_sym("{")
        if self.at("LIDENT") and self.peek().is_("SYM", "="):
            fields = self.field_assigns()
            self.expect_sym("}")
            return ERecord(tuple(fields), start.span)
        base = self.expr()
        self.expect_kw("with")
        fields = self.field_assigns()
        self.expect_sym("}")
        return ERecordUpdate(base, tuple(fields), start.span)

    def field_assigns(self):
        fields = []
        while self.at("LIDENT"):
            f = self.advance()
            self.expect_sym("=")
            fields.append((f.text, self.expr()))
            if not self.accept_sym(";"):
                break
        return fields

    # ------------------------------------------------------------ patterns
    def pattern(self):
        left = self.pattern_atom()
        if self.at_sym("::"):
            op = self.advance()
            return PCtor("cons", (left, self.pattern()), op.span)
        return left

    def pattern_atom(self):
        t = self.tok
        k = t.kind
        if k == "ANON":
            self.advance()
            return PWild(t.span)
        if k in ("LIDENT", "UIDENT"):
            self.advance()
            if k == "LIDENT" and self.accept_sym("("):
                args = [self.pattern()]
                while self.accept_sym(","):
                    args.append(self.pattern())
                self.expect_sym(")")
                return PCtor(t.text, tuple(args), t.span)
            return PVar(t.text, t.span)
        if k == "INT":
            self.advance()
            return PConst(int_const(*t.value), t.span)
        if t.is_("SYM", "-") and self.peek().kind == "INT":
            self.advance()
            lit = self.advance()
            val, width = lit.value
            return PConst(int_const(-val, width), t.span)
        if k == "STRING":
            self.advance()
            return PConst(string(t.value), t.span)
        if k == "KW" and t.text in ("true", "false"):
            self.advance()
            return PConst(TRUE if t.text == "true" else FALSE, t.span)
        if t.is_("SYM", "("):
            self.advance()
            items = [self.pattern()]
            while self.accept_sym(","):
                items.append(self.pattern())
            self.expect_sym(")")
            if len(items) == 1:
                return items[0]
            return PCtor(f"$tuple{len(items)}", tuple(items), t.span)
        if t.is_("SYM", "["):
            self.advance()
            items = []
            if not self.at_sym("]"):
                items.append(self.pattern())
                while self.accept_sym(","):
                    items.append(self.pattern())
            self.expect_sym("]")
            out = PCtor("nil", (), t.span)
            for it in reversed(items):
                out = PCtor("cons", (it, out), t.span)
            return out
        self.fail(f"unexpected {t.text or t.kind!r} in pattern", ["pattern"])
