"""Compile inverse-category presentations to dependent type theory signatures.

Variables follow one convention throughout: ``u{x}`` is a point of I(x),
``v{x}`` a matching-family component at the current stage, ``w{x}`` (then
``w2{x}``, ``w3{x}`` ...) the components of nested families, and ``f{x}`` the
components of a diagram map.
"""
from __future__ import annotations

from typing import Optional, Sequence

from ..errors import UnorderedObjects
from ..inverse import InvCat
from .syntax import (
    App, Arrow, Bind, Compose, Id, Judgment, Name, Opaque, Pi, Prod, Sg, Signature, UnitT,
    app, check_ident, var_name,
)

GAMMA = Opaque("Gm")
DELTA = Opaque("De")


def _label(x) -> str:
    return check_ident(var_name("I", x))[2:-1]


class Namer:
    """Type-level names of an inverse category's spaces and hom families."""

    def __init__(self, I: InvCat, order: Optional[Sequence] = None):
        self.I = I
        self.order = check_order(I, order)
        self.rank = {x: i for i, x in enumerate(self.order)}
        for x in self.order:
            _label(x)

    def below(self, x) -> list:
        return sorted(self.I.poset.below(x), key=self.rank.__getitem__)

    def space(self, x) -> Name:
        d = self.I.display.get(x)
        return Name(check_ident(d) if d else var_name("I", x))

    def hom(self, x, y) -> str:
        return var_name("I", x, y)


def check_order(I: InvCat, order: Optional[Sequence]) -> tuple:
    """Validate a user order as a linear extension of the precedence relation."""
    if order is None:
        return I.order()
    order = tuple(order)
    if sorted(map(repr, order)) != sorted(map(repr, I.objects)) or len(set(order)) != len(order):
        raise UnorderedObjects("the given order is not a permutation of the objects", order=list(order))
    pos = {x: i for i, x in enumerate(order)}
    for x in order:
        for y in I.poset.below(x):
            if pos[y] > pos[x]:
                raise UnorderedObjects(f"{y!r} precedes {x!r} but comes later in the order", lower=y, upper=x)
    return order


def u(x) -> str:
    return var_name("u", x)


def _depth_prefix(depth: int) -> str:
    return "v" if depth == 0 else ("w" if depth == 1 else f"w{depth}")


def family_type(nm: Namer, c, source, target, outer: dict, depth: int):
    """Type of a map component at ``c`` from the hom family ``source`` into ``target``.

    ``source(u_c, ws)`` and ``target(u_c, composites)`` build the two sides;
    ``outer`` names the sibling components already bound for objects below
    ``c``, which the target is composed with.
    """
    inner = {}
    binders = []
    for d in nm.below(c):
        name = var_name(_depth_prefix(depth + 1), d)
        ty = family_type(
            nm, d,
            source=lambda ud, ws, d=d: app(nm.hom(c, d), Name(u(c)), Name(ud), *ws),
            target=lambda ud, comps, d=d: source(ud, comps, d),
            outer=inner, depth=depth + 1,
        )
        inner[d] = name
        binders.append((name, ty))
    ws = [Name(n) for n in inner.values()]
    comps = [Compose(Name(outer[d]), Name(inner[d])) for d in nm.below(c)]
    body = Arrow(source(u(c), ws, c), target(u(c), comps, c))
    for name, ty in reversed(binders):
        body = Pi(name, ty, body)
    return Pi(u(c), nm.space(c), body)


def _matching_binders(nm: Namer, s, target, depth: int = 0) -> list:
    """The ``v`` components of a family ``I(s, -) -> target`` below ``s``."""
    out = {}
    binders = []
    for c in nm.below(s):
        ty = family_type(
            nm, c,
            source=lambda uc, ws, c2: app(nm.hom(s, c2), Name(u(s)), Name(uc), *ws),
            target=target, outer=out, depth=depth,
        )
        out[c] = var_name(_depth_prefix(depth), c)
        binders.append(Bind(out[c], ty))
    return binders


def _family(name: str):
    return lambda uc, comps, c: app(var_name(name, c), Name(uc), *comps)


def emit_invcat(I: InvCat, order=None) -> Signature:
    nm = Namer(I, order)
    js = [Judgment((), nm.space(x)) for x in nm.order]
    pairs = [(a, b) for a in nm.order for b in nm.below(a)]
    pairs.sort(key=lambda p: (nm.rank[p[1]], nm.rank[p[0]]))
    for a, b in pairs:
        target = lambda uc, comps, c, a=a: app(nm.hom(a, c), Name(u(a)), Name(uc), *comps)
        vs = _matching_binders(nm, b, target)
        ctx = (Bind(u(a), nm.space(a)), Bind(u(b), nm.space(b)), *vs)
        js.append(Judgment(ctx, app(nm.hom(a, b), Name(u(a)), Name(u(b)), *[Name(v.var) for v in vs])))
    return Signature(tuple(js))


def emit_diagram(I: InvCat, family: str = "A", order=None) -> Signature:
    nm = Namer(I, order)
    js = []
    for x in nm.order:
        vs = _matching_binders(nm, x, _family(family))
        ctx = (GAMMA, Bind(u(x), nm.space(x)), *vs)
        js.append(Judgment(ctx, app(var_name(family, x), Name(u(x)), *[Name(v.var) for v in vs])))
    return Signature(tuple(js))


def _sigma_chain(binders: list):
    if not binders:
        return UnitT()
    body = binders[-1][1]
    for name, ty in reversed(binders[:-1]):
        body = Sg(name, ty, body)
    return body


def emit_matching(I: InvCat, family: str = "A", order=None) -> Signature:
    nm = Namer(I, order)
    js = []
    for x in nm.order:
        vs = _matching_binders(nm, x, _family(family))
        js.append(Judgment((GAMMA, Bind(u(x), nm.space(x))), _sigma_chain([(b.var, b.type) for b in vs])))
    return Signature(tuple(js))


def emit_signature(I: InvCat, what: str = "invcat", family: str = "A", order=None) -> Signature:
    if what == "invcat":
        return emit_invcat(I, order)
    if what == "diagram":
        return emit_diagram(I, family, order)
    if what == "matching":
        return emit_matching(I, family, order)
    if what == "reedy":
        return emit_matching(I, family, order) + emit_diagram(I, family, order)
    raise ValueError(f"unknown mode {what!r}")


def emit_hom_type(I: InvCat, source: str = "A", target: str = "B", order=None) -> Signature:
    """``Gm, De |- T type`` where T is the type of diagram maps ``source -> target``."""
    nm = Namer(I, order)
    comps = []
    for x in nm.order:
        vs = _matching_binders(nm, x, _family(source))
        vnames = [Name(v.var) for v in vs]
        fs = [Compose(Name(var_name("f", c)), Name(v.var)) for c, v in zip(nm.below(x), vs)]
        body = Arrow(app(var_name(source, x), Name(u(x)), *vnames), app(var_name(target, x), Name(u(x)), *fs))
        for v in reversed(vs):
            body = Pi(v.var, v.type, body)
        comps.append((var_name("f", x), Pi(u(x), nm.space(x), body)))
    return Signature((Judgment((GAMMA, DELTA), _sigma_chain(comps)),))


# -- path-object contexts --------------------------------------------------

PATH_NOTE = "g is an opaque constant standing for the lift in the glued path object"


def emit_path_context(mode: str = "base") -> Signature:
    N = Name
    if mode == "base":
        ctx = (Bind("b_0", N("B_0")), Bind("a_0", app("A_0", N("b_0"))), Bind("a_0'", app("A_0", N("b_0"))))
        return Signature((Judgment(ctx, Id(N("a_0"), N("a_0'"))),))
    if mode == "glued":
        GA = App(app("G", N("A_0")), (N("b_0"),))
        ctx = (
            Bind("b_0", app("G", N("B_0"))),
            Bind("b_1", app("B_1", N("b_0"))),
            Bind("a_0", GA),
            Bind("a_0'", GA),
            Bind("p_0", app("G", Id(N("a_0"), N("a_0'")))),
            Bind("a_1", app("A_1", N("b_0"), N("b_1"), N("a_0"))),
            Bind("a_1'", app("A_1", N("b_0"), N("b_1"), N("a_0'"))),
        )
        body = Sg("p_0'", Id(N("a_0"), N("a_0'")),
                  Prod(Id(app("g", N("p_0'")), N("p_0")),
                       Id(app("transport", N("p_0'"), N("a_1")), N("a_1'"))))
        return Signature((Judgment(ctx, body),))
    raise ValueError(f"unknown path mode {mode!r}")
