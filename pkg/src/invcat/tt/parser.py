"""Parser for the plain-text signature grammar (see :mod:`invcat.tt.syntax`)."""
from __future__ import annotations

import re

from ..errors import TTSyntaxError
from .syntax import (
    App, Arrow, Bind, Compose, Id, Judgment, Name, Opaque, Pi, Prod, Sg, Signature, UnitT,
)

TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z][\w']*(?:\{[\w/,]+\})?)
  | (?P<sym>\|-|->|∘|[(),:*@])
""", re.VERBOSE)


class _Tokens:
    def __init__(self, text: str):
        self.toks = []
        line, col, pos = 1, 1, 0
        while pos < len(text):
            m = TOKEN.match(text, pos)
            if not m:
                raise TTSyntaxError(f"unexpected character {text[pos]!r}", line=line, column=col)
            kind = m.lastgroup
            val = m.group()
            if kind == "nl":
                line, col = line + 1, 1
            else:
                if kind in ("ident", "sym"):
                    self.toks.append((val, line, col))
                col += len(val)
            pos = m.end()
        self.eof = (None, line, col)
        self.i = 0

    def peek(self, k: int = 0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else self.eof

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, val):
        t = self.next()
        if t[0] != val:
            got = "end of input" if t[0] is None else repr(t[0])
            raise TTSyntaxError(f"expected {val!r}, got {got}", line=t[1], column=t[2])
        return t

    def ident(self):
        t = self.next()
        if t[0] is None or not (t[0][0].isalpha()) or t[0] in ("Pi", "Sg", "Unit", "Id", "type"):
            got = "end of input" if t[0] is None else repr(t[0])
            raise TTSyntaxError(f"expected an identifier, got {got}", line=t[1], column=t[2])
        return t[0]


def _expr(ts: _Tokens):
    t = ts.peek()
    if t[0] in ("Pi", "Sg"):
        ts.next()
        ts.expect("(")
        v = ts.ident()
        ts.expect(":")
        dom = _expr(ts)
        ts.expect(")")
        ts.expect(",")
        body = _expr(ts)
        return (Pi if t[0] == "Pi" else Sg)(v, dom, body)
    return _arrow(ts)


def _arrow(ts):
    left = _prod(ts)
    if ts.peek()[0] == "->":
        ts.next()
        return Arrow(left, _arrow_or_binder(ts))
    return left


def _arrow_or_binder(ts):
    if ts.peek()[0] in ("Pi", "Sg"):
        return _expr(ts)
    return _arrow(ts)


def _prod(ts):
    left = _comp(ts)
    if ts.peek()[0] == "*":
        ts.next()
        return Prod(left, _prod(ts))
    return left


def _comp(ts):
    left = _app(ts)
    if ts.peek()[0] == "∘":
        ts.next()
        return Compose(left, _comp(ts))
    return left


def _app(ts):
    e = _atom(ts)
    while ts.peek()[0] == "(":
        ts.next()
        args = [_expr(ts)]
        while ts.peek()[0] == ",":
            ts.next()
            args.append(_expr(ts))
        ts.expect(")")
        e = App(e, tuple(args))
    return e


def _atom(ts):
    t = ts.peek()
    if t[0] == "(":
        ts.next()
        e = _expr(ts)
        ts.expect(")")
        return e
    if t[0] == "Unit":
        ts.next()
        return UnitT()
    if t[0] == "Id":
        ts.next()
        ts.expect("(")
        a = _expr(ts)
        ts.expect(",")
        b = _expr(ts)
        ts.expect(")")
        return Id(a, b)
    return Name(ts.ident())


def _judgment(ts):
    items = []
    if ts.peek()[0] != "|-":
        while True:
            t = ts.peek()
            if t[0] == "@":
                ts.next()
                items.append(Opaque(ts.ident()))
            elif t[0] == "(":
                ts.next()
                v = ts.ident()
                ts.expect(":")
                ty = _expr(ts)
                ts.expect(")")
                items.append(Bind(v, ty))
            else:
                got = "end of input" if t[0] is None else repr(t[0])
                raise TTSyntaxError(f"expected a context entry or '|-', got {got}", line=t[1], column=t[2])
            if ts.peek()[0] == ",":
                ts.next()
                continue
            break
    ts.expect("|-")
    subject = _expr(ts)
    ts.expect("type")
    return Judgment(tuple(items), subject)


def parse_signature(text: str) -> Signature:
    ts = _Tokens(text)
    out = []
    while ts.peek()[0] is not None:
        out.append(_judgment(ts))
    return Signature(tuple(out))


def parse_expr(text: str):
    ts = _Tokens(text)
    e = _expr(ts)
    t = ts.peek()
    if t[0] is not None:
        raise TTSyntaxError(f"trailing input {t[0]!r}", line=t[1], column=t[2])
    return e
