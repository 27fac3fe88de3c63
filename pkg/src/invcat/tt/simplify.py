"""The ``units-and-booleans`` pass: erase Unit binders, expand Bool-indexed families.

Which type names are Unit or Bool comes from the presentation's data (see
:func:`annotations`); the pass itself is purely syntactic.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..inverse import InvCat
from .syntax import (
    App, Arrow, Bind, Compose, Id, Judgment, Name, Opaque, Pi, Prod, Sg, Signature, UnitT, app, var_name,
)
from .emit import Namer

BOOL = Name("Bool")
LITERALS = ("true", "false")


@dataclass
class Annotations:
    units: set = field(default_factory=set)
    bools: set = field(default_factory=set)
    unit_families: set = field(default_factory=set)


def _is_terminal(P) -> bool:
    return all(s == 1 for s in P.sizes())


def _is_two_points(P) -> bool:
    # discrete: every simplex is degenerate on a vertex
    return all(s == 2 for s in P.sizes())


def _span_is_product(span, X, Y) -> bool:
    for m, level in enumerate(span.obj.levels):
        pairs = {(span.left(m, e), span.right(m, e)) for e in level}
        if not (len(pairs) == len(level) == len(X.levels[m]) * len(Y.levels[m])):
            return False
    return True


def annotations(I: InvCat) -> Annotations:
    """Spaces that are a point or two points, and hom spans that are full products."""
    nm = Namer(I)
    ann = Annotations()
    for x in I.objects:
        name = nm.space(x).id
        if _is_terminal(I.spaces[x]):
            ann.units.add(name)
        elif _is_two_points(I.spaces[x]):
            ann.bools.add(name)
    for (x, y), span in I.homs.items():
        if _span_is_product(span, I.spaces[x], I.spaces[y]):
            ann.unit_families.add(nm.hom(x, y))
    return ann


class _Erased:
    pass


ERASED = _Erased()


def with_suffix(name: str, s: str) -> str:
    if name.endswith("}"):
        return f"{name[:-1]},{s}}}"
    return var_name(name, s)


def _drop(scope: dict, v: str) -> dict:
    if v in scope:
        scope = dict(scope)
        del scope[v]
    return scope


def _simp(e, ann: Annotations, scope: dict):
    if isinstance(e, Name):
        kind = scope.get(e.id)
        if kind == "erase":
            return ERASED
        if isinstance(kind, tuple) and kind[0] == "lit":
            return Name(kind[1])
        if e.id in ann.units:
            return UnitT()
        if e.id in ann.bools:
            return BOOL
        return e
    if isinstance(e, UnitT):
        return e
    if isinstance(e, App):
        if isinstance(e.fn, Name) and e.fn.id in ann.unit_families:
            return UnitT()
        fn = _simp(e.fn, ann, scope)
        args, suffix = [], []
        for a in e.args:
            kind = scope.get(a.id) if isinstance(a, Name) else None
            if isinstance(kind, tuple) and kind[0] == "split":
                args.extend(Name(n) for n in kind[1])
                continue
            if isinstance(kind, tuple) and kind[0] == "lit":
                suffix.append(kind[1])
                continue
            a2 = _simp(a, ann, scope)
            if a2 is not ERASED:
                args.append(a2)
        if suffix and isinstance(fn, Name):
            fn = Name(with_suffix(fn.id, ",".join(suffix)))
        return app(fn, *args)
    if isinstance(e, (Pi, Sg)):
        dom = _simp(e.dom, ann, scope)
        if isinstance(dom, UnitT):
            return _simp(e.body, ann, {**scope, e.var: "erase"})
        if isinstance(e, Pi) and dom == BOOL:
            t, f = (_simp(e.body, ann, {**scope, e.var: ("lit", b)}) for b in LITERALS)
            return Prod(t, f)
        body = _simp(e.body, ann, _drop(scope, e.var))
        return type(e)(e.var, dom, body)
    if isinstance(e, Arrow):
        dom, cod = _simp(e.dom, ann, scope), _simp(e.cod, ann, scope)
        if isinstance(dom, UnitT) or isinstance(cod, UnitT):
            return cod
        return Arrow(dom, cod)
    if isinstance(e, Prod):
        l, r = _simp(e.left, ann, scope), _simp(e.right, ann, scope)
        if isinstance(l, UnitT):
            return r
        if isinstance(r, UnitT):
            return l
        return Prod(l, r)
    if isinstance(e, Compose):
        l, r = _simp(e.left, ann, scope), _simp(e.right, ann, scope)
        if r is ERASED:
            return l
        if l is ERASED:
            return r
        return Compose(l, r)
    if isinstance(e, Id):
        return Id(_simp(e.left, ann, scope), _simp(e.right, ann, scope))
    raise TypeError(f"not an expression: {e!r}")


def _telescope(items, i, ann, scope, ctx, subject, out):
    if i == len(items):
        out.append(Judgment(tuple(ctx), _simp(subject, ann, scope)))
        return
    item = items[i]
    if isinstance(item, Opaque):
        _telescope(items, i + 1, ann, scope, ctx + [item], subject, out)
        return
    v, ty = item.var, item.type
    if isinstance(ty, Pi) and _simp(ty.dom, ann, scope) == BOOL:
        names = tuple(with_suffix(v, b) for b in LITERALS)
        binds = [Bind(n, _simp(ty.body, ann, {**scope, ty.var: ("lit", b)})) for n, b in zip(names, LITERALS)]
        _telescope(items, i + 1, ann, {**scope, v: ("split", names)}, ctx + binds, subject, out)
        return
    ty2 = _simp(ty, ann, scope)
    if isinstance(ty2, UnitT):
        _telescope(items, i + 1, ann, {**scope, v: "erase"}, ctx, subject, out)
    elif ty2 == BOOL:
        for b in LITERALS:
            _telescope(items, i + 1, ann, {**scope, v: ("lit", b)}, ctx, subject, out)
    else:
        _telescope(items, i + 1, ann, _drop(scope, v), ctx + [Bind(v, ty2)], subject, out)


def simplify(sig: Signature, ann: Annotations) -> Signature:
    out: list = []
    for j in sig.judgments:
        _telescope(list(j.context), 0, ann, {}, [], j.subject, out)
    return Signature(tuple(out))


PASSES = {"units-and-booleans": simplify}
