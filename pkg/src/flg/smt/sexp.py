"""Minimal SMT-LIB s-expression reader."""
from __future__ import annotations

from dataclasses import dataclass


class SexpError(ValueError):
    pass


@dataclass(frozen=True)
class Sym:
    """A symbol; ``quoted`` records whether it was written ``|...|``."""
    name: str
    quoted: bool = False

    def __str__(self):
        return f"|{self.name}|" if self.quoted else self.name


@dataclass(frozen=True)
class Str:
    value: str


@dataclass(frozen=True)
class Kw:
    name: str


def parse_all(text: str) -> list:
    items, i = [], 0
    while True:
        i = _skip(text, i)
        if i >= len(text):
            return items
        v, i = _read(text, i)
        items.append(v)


def parse_one(text: str):
    items = parse_all(text)
    if len(items) != 1:
        raise SexpError(f"expected one s-expression, got {len(items)}")
    return items[0]


def read_prefix(text: str, start: int = 0):
    """Read one s-expression starting at ``start``; returns (value, end) or None if incomplete."""
    i = _skip(text, start)
    if i >= len(text):
        return None
    try:
        return _read(text, i)
    except _Incomplete:
        return None


class _Incomplete(SexpError):
    pass


def _skip(text: str, i: int) -> int:
    n = len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        else:
            break
    return i


_DELIM = set(" \t\r\n()\";|")


def _read(text: str, i: int):
    n = len(text)
    c = text[i]
    if c == "(":
        out = []
        i += 1
        while True:
            i = _skip(text, i)
            if i >= n:
                raise _Incomplete("unterminated list")
            if text[i] == ")":
                return out, i + 1
            v, i = _read(text, i)
            out.append(v)
    if c == ")":
        raise SexpError(f"unexpected ')' at offset {i}")
    if c == '"':
        buf = []
        i += 1
        while True:
            if i >= n:
                raise _Incomplete("unterminated string")
            if text[i] == '"':
                if i + 1 < n and text[i + 1] == '"':
                    buf.append('"')
                    i += 2
                    continue
                return Str(_unescape("".join(buf))), i + 1
            buf.append(text[i])
            i += 1
    if c == "|":
        j = text.find("|", i + 1)
        if j < 0:
            raise _Incomplete("unterminated quoted symbol")
        return Sym(text[i + 1:j], True), j + 1
    j = i
    while j < n and text[j] not in _DELIM:
        j += 1
    tok = text[i:j]
    if j >= n and not tok:
        raise _Incomplete("eof")
    if tok.startswith(":"):
        return Kw(tok[1:]), j
    if tok.isdigit():
        return int(tok), j
    return Sym(tok), j


def _unescape(s: str) -> str:
    # SMT-LIB 2.6 \u{...} and \ud... escapes
    if "\\u" not in s:
        return s
    out, i = [], 0
    while i < len(s):
        if s.startswith("\\u{", i):
            j = s.find("}", i)
            if j > 0:
                out.append(chr(int(s[i + 3:j], 16)))
                i = j + 1
                continue
        if s.startswith("\\u", i) and len(s) >= i + 6:
            try:
                out.append(chr(int(s[i + 2:i + 6], 16)))
                i += 6
                continue
            except ValueError:
                pass
        out.append(s[i])
        i += 1
    return "".join(out)


def render(v) -> str:
    if isinstance(v, list):
        return "(" + " ".join(render(x) for x in v) + ")"
    if isinstance(v, Str):
        return quote_string(v.value)
    if isinstance(v, Kw):
        return ":" + v.name
    return str(v)


def quote_string(s: str) -> str:
    out = []
    for ch in s:
        code = ord(ch)
        if ch == '"':
            out.append('""')
        elif ch == "\\" or code < 32 or code > 126:
            out.append("\\u{%x}" % code)
        else:
            out.append(ch)
    return '"' + "".join(out) + '"'
