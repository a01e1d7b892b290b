"""Tokenizer for .flg source text."""
from __future__ import annotations

from dataclasses import dataclass

from ..syntax import Span

KEYWORDS = frozenset({
    "type", "fun", "input", "output", "rel", "uninterpreted", "sort", "and",
    "let", "in", "if", "then", "else", "match", "with", "end", "true", "false",
    "forall", "exists",
})

# longest first
SYMBOLS = (
    "==>", ":-", "::", "=>", "!=", "<=", ">=", "#=", "/\\", "\\/", "&&", "||", "??",
    "(", ")", "[", "]", "{", "}", ",", ";", ".", ":", "|", "=", "!", "<", ">",
    "+", "-", "*", "/", "%", "~", "`",
)

_ESC = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", '"': '"', "'": "'", "0": "\0"}


class SyntaxErr(Exception):
    def __init__(self, span: Span, msg: str, expected=()):
        self.span = span
        self.msg = msg
        self.expected = tuple(sorted(set(expected)))
        text = msg
        if self.expected:
            text += " (expected one of: " + ", ".join(self.expected) + ")"
        super().__init__(f"{span}: error: syntax: {text}")


@dataclass(frozen=True)
class Token:
    kind: str  # LIDENT UIDENT TVAR INT STRING HASHID HASHBRACE HASHIF KW SYM ANON EOF
    text: str
    span: Span
    value: object = None

    def is_(self, kind: str, text: str | None = None) -> bool:
        return self.kind == kind and (text is None or self.text == text)


def tokenize(text: str, path: str = "<input>") -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(text)
    line, col0 = 1, 0

    def span_at(pos: int) -> Span:
        return Span(line, pos - col0 + 1, path)

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col0 = i + 1
            i += 1
            continue
        if ch in " \t\r\f":
            i += 1
            continue
        if text.startswith("(*", i):
            depth, start_span = 0, span_at(i)
            while True:
                if i >= n:
                    raise SyntaxErr(start_span, "unterminated comment")
                if text.startswith("(*", i):
                    depth += 1
                    i += 2
                elif text.startswith("*)", i):
                    depth -= 1
                    i += 2
                    if depth == 0:
                        break
                else:
                    if text[i] == "\n":
                        line += 1
                        col0 = i + 1
                    i += 1
            continue
        sp = span_at(i)
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            word = text[i:j]
            if word == "_":
                toks.append(Token("ANON", word, sp))
            elif word in KEYWORDS:
                toks.append(Token("KW", word, sp))
            elif word[0].isupper():
                toks.append(Token("UIDENT", word, sp))
            else:
                toks.append(Token("LIDENT", word, sp))
            i = j
            continue
        if ch.isdigit():
            j = i
            if text.startswith(("0x", "0X"), i):
                j = i + 2
                while j < n and (text[j] in "0123456789abcdefABCDEF_"):
                    j += 1
                digits = text[i + 2:j].replace("_", "")
                if not digits:
                    raise SyntaxErr(sp, "malformed hex literal")
                val = int(digits, 16)
            else:
                while j < n and (text[j].isdigit() or text[j] == "_"):
                    j += 1
                val = int(text[i:j].replace("_", ""))
            wide = j < n and text[j] in "lL"
            if wide:
                j += 1
            if j < n and (text[j].isalpha() or text[j] == "_"):
                raise SyntaxErr(sp, f"malformed number {text[i:j + 1]!r}")
            toks.append(Token("INT", text[i:j], sp, (val, 64 if wide else 32)))
            i = j
            continue
        if ch == '"':
            j = i + 1
            buf = []
            while True:
                if j >= n or text[j] == "\n":
                    raise SyntaxErr(sp, "unterminated string literal")
                c = text[j]
                if c == '"':
                    break
                if c == "\\":
                    if j + 1 >= n or text[j + 1] not in _ESC:
                        raise SyntaxErr(span_at(j), "bad escape in string literal")
                    buf.append(_ESC[text[j + 1]])
                    j += 2
                    continue
                buf.append(c)
                j += 1
            toks.append(Token("STRING", text[i:j + 1], sp, "".join(buf)))
            i = j + 1
            continue
        if ch == "'":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if j == i + 1:
                raise SyntaxErr(sp, "expected type variable name after '")
            toks.append(Token("TVAR", text[i + 1:j], sp))
            i = j
            continue
        if ch == "#":
            if text.startswith("#{", i):
                toks.append(Token("HASHBRACE", "#{", sp))
                i += 2
                continue
            if text.startswith("#=", i):
                toks.append(Token("SYM", "#=", sp))
                i += 2
                continue
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i + 1:j]
            if not word:
                raise SyntaxErr(sp, "stray '#'")
            if word == "if":
                toks.append(Token("HASHIF", "#if", sp))
            else:
                toks.append(Token("HASHID", word, sp))
            i = j
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token("SYM", sym, sp))
                i += len(sym)
                break
        else:
            raise SyntaxErr(sp, f"unexpected character {ch!r}")
    toks.append(Token("EOF", "", Span(line, i - col0 + 1, path)))
    return toks
