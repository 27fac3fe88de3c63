"""Alpha-equivalence and scope checking of signatures."""
from __future__ import annotations

from ..errors import ScopeError
from .syntax import App, Arrow, Bind, Compose, Id, Judgment, Name, Opaque, Pi, Prod, Sg, Signature, UnitT


def _nameless(e, env: list, later: set, where: str):
    """Replace bound names by de Bruijn indices; ``later`` holds names bound further right."""
    if isinstance(e, Name):
        for i, v in enumerate(reversed(env)):
            if v == e.id:
                return ("bv", i)
        if e.id in later:
            raise ScopeError(f"{e.id} is used in {where} before its binder", name=e.id)
        return ("fv", e.id)
    if isinstance(e, UnitT):
        return ("unit",)
    if isinstance(e, App):
        return ("app", _nameless(e.fn, env, later, where), tuple(_nameless(a, env, later, where) for a in e.args))
    if isinstance(e, (Pi, Sg)):
        tag = "pi" if isinstance(e, Pi) else "sg"
        return (tag, _nameless(e.dom, env, later, where), _nameless(e.body, env + [e.var], later, where))
    if isinstance(e, Arrow):
        return ("arrow", _nameless(e.dom, env, later, where), _nameless(e.cod, env, later, where))
    tag = {Prod: "prod", Compose: "compose", Id: "id"}[type(e)]
    return (tag, _nameless(e.left, env, later, where), _nameless(e.right, env, later, where))


def nameless_judgment(j: Judgment) -> tuple:
    """Positional form of a judgment; raises :class:`ScopeError` on use-before-bind."""
    env: list = []
    out = []
    binders = [i.var for i in j.context if isinstance(i, Bind)]
    for pos, item in enumerate(j.context):
        if isinstance(item, Opaque):
            out.append(("opaque", item.name))
            continue
        later = set(binders[len(env) + 1:]) - set(env) - {item.var}
        out.append(("bind", _nameless(item.type, env, later, f"the type of {item.var}")))
        env.append(item.var)
    return tuple(out), _nameless(j.subject, env, set(), "the subject")


def check_scopes(sig: Signature) -> None:
    for j in sig.judgments:
        nameless_judgment(j)


def alpha_equal(s1: Signature, s2: Signature) -> bool:
    """Equality up to renaming of bound variables; judgment order matters."""
    a = [nameless_judgment(j) for j in s1.judgments]
    b = [nameless_judgment(j) for j in s2.judgments]
    return a == b


def first_difference(s1: Signature, s2: Signature):
    """Index of the first judgment that differs, or None."""
    a = [nameless_judgment(j) for j in s1.judgments]
    b = [nameless_judgment(j) for j in s2.judgments]
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    return None if len(a) == len(b) else min(len(a), len(b))
