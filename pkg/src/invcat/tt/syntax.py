"""Abstract syntax and printer for the emitted type theory.

Plain-text grammar (whitespace-insensitive, ``#`` starts a comment)::

    signature := judgment*
    judgment  := [item ("," item)*] "|-" expr "type"
    item      := "@" ident | "(" ident ":" expr ")"
    expr      := ("Pi" | "Sg") "(" ident ":" expr ")" "," expr | arrow
    arrow     := prod ["->" arrow]
    prod      := comp ["*" prod]
    comp      := app ["∘" comp]
    app       := atom ("(" expr ("," expr)* ")")*
    atom      := ident | "Unit" | "Id" "(" expr "," expr ")" | "(" expr ")"
    ident     := [A-Za-z][A-Za-z0-9_']* ["{" [A-Za-z0-9_/,]+ "}"]
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Tuple, Union

IDENT = re.compile(r"[A-Za-z][\w']*(\{[\w/,]+\})?")
KEYWORDS = {"Pi", "Sg", "Unit", "Id", "type"}


@dataclass(frozen=True)
class Name:
    id: str


@dataclass(frozen=True)
class App:
    fn: "Expr"
    args: tuple


@dataclass(frozen=True)
class Pi:
    var: str
    dom: "Expr"
    body: "Expr"


@dataclass(frozen=True)
class Sg:
    var: str
    dom: "Expr"
    body: "Expr"


@dataclass(frozen=True)
class Arrow:
    dom: "Expr"
    cod: "Expr"


@dataclass(frozen=True)
class Prod:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Compose:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Id:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class UnitT:
    pass


Expr = Union[Name, App, Pi, Sg, Arrow, Prod, Compose, Id, UnitT]


@dataclass(frozen=True)
class Bind:
    var: str
    type: Expr


@dataclass(frozen=True)
class Opaque:
    """A context symbol standing for a whole telescope (printed ``@Gm``)."""

    name: str


@dataclass(frozen=True)
class Judgment:
    context: tuple
    subject: Expr


@dataclass(frozen=True)
class Signature:
    judgments: Tuple[Judgment, ...]

    def __len__(self):
        return len(self.judgments)

    def __add__(self, other: "Signature") -> "Signature":
        return Signature(self.judgments + other.judgments)


def app(fn, *args) -> Expr:
    """``fn(args)``, or just ``fn`` when there are no arguments."""
    fn = Name(fn) if isinstance(fn, str) else fn
    return App(fn, tuple(args)) if args else fn


def var_name(prefix: str, *labels) -> str:
    return f"{prefix}{{{','.join(str(x) for x in labels)}}}"


def check_ident(s: str) -> str:
    if not IDENT.fullmatch(s) or s in KEYWORDS:
        from ..errors import TTSyntaxError
        raise TTSyntaxError(f"not a valid identifier: {s!r}", line=0, column=0)
    return s


# -- printing --------------------------------------------------------------

def show(e: Expr, prec: int = 0) -> str:
    if isinstance(e, Name):
        return e.id
    if isinstance(e, UnitT):
        return "Unit"
    if isinstance(e, Id):
        return f"Id({show(e.left)}, {show(e.right)})"
    if isinstance(e, App):
        return f"{show(e.fn, 4)}({', '.join(show(a) for a in e.args)})"
    if isinstance(e, (Pi, Sg)):
        kw = "Pi" if isinstance(e, Pi) else "Sg"
        s = f"{kw} ({e.var} : {show(e.dom)}), {show(e.body)}"
        return f"({s})" if prec > 0 else s
    if isinstance(e, Arrow):
        s = f"{show(e.dom, 2)} -> {show(e.cod, 1)}"
        return f"({s})" if prec > 1 else s
    if isinstance(e, Prod):
        s = f"{show(e.left, 3)} * {show(e.right, 2)}"
        return f"({s})" if prec > 2 else s
    if isinstance(e, Compose):
        s = f"{show(e.left, 4)} ∘ {show(e.right, 3)}"
        return f"({s})" if prec > 3 else s
    raise TypeError(f"not an expression: {e!r}")


def show_item(item) -> str:
    if isinstance(item, Opaque):
        return f"@{item.name}"
    return f"({item.var} : {show(item.type)})"


def show_judgment(j: Judgment) -> str:
    ctx = ", ".join(show_item(i) for i in j.context)
    return f"{ctx + ' ' if ctx else ''}|- {show(j.subject)} type"


def show_signature(sig: Signature) -> str:
    return "".join(show_judgment(j) + "\n" for j in sig.judgments)


# -- JSON ------------------------------------------------------------------

def expr_to_json(e: Expr):
    if isinstance(e, Name):
        return {"name": e.id}
    if isinstance(e, UnitT):
        return {"unit": True}
    if isinstance(e, App):
        return {"app": expr_to_json(e.fn), "args": [expr_to_json(a) for a in e.args]}
    if isinstance(e, (Pi, Sg)):
        return {"pi" if isinstance(e, Pi) else "sg": e.var, "dom": expr_to_json(e.dom), "body": expr_to_json(e.body)}
    tag = {Arrow: "arrow", Prod: "prod", Compose: "compose", Id: "id"}[type(e)]
    a, b = (e.dom, e.cod) if isinstance(e, Arrow) else (e.left, e.right)
    return {tag: [expr_to_json(a), expr_to_json(b)]}


def expr_from_json(d) -> Expr:
    if "name" in d:
        return Name(d["name"])
    if "unit" in d:
        return UnitT()
    if "app" in d:
        return App(expr_from_json(d["app"]), tuple(expr_from_json(a) for a in d["args"]))
    if "pi" in d:
        return Pi(d["pi"], expr_from_json(d["dom"]), expr_from_json(d["body"]))
    if "sg" in d:
        return Sg(d["sg"], expr_from_json(d["dom"]), expr_from_json(d["body"]))
    for tag, cls in (("arrow", Arrow), ("prod", Prod), ("compose", Compose), ("id", Id)):
        if tag in d:
            a, b = d[tag]
            return cls(expr_from_json(a), expr_from_json(b))
    raise ValueError(f"not an expression: {d!r}")


def signature_to_json(sig: Signature) -> list:
    out = []
    for j in sig.judgments:
        ctx = [{"opaque": i.name} if isinstance(i, Opaque) else {"var": i.var, "type": expr_to_json(i.type)}
               for i in j.context]
        out.append({"context": ctx, "type": expr_to_json(j.subject), "text": show_judgment(j)})
    return out


def signature_from_json(data) -> Signature:
    js = []
    for j in data:
        ctx = tuple(Opaque(i["opaque"]) if "opaque" in i else Bind(i["var"], expr_from_json(i["type"]))
                    for i in j["context"])
        js.append(Judgment(ctx, expr_from_json(j["type"])))
    return Signature(tuple(js))
