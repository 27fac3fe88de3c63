"""Internal categories, the coproduct (Sigma) construction, nerves and EI diagnostics."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import wf
from .base import presheaf as ps
from .base.instances import BaseCat, FinSetBase, Verdict, instance_for
from .base.presheaf import PMap, Presheaf
from .errors import CompositionMismatch, CycleFound, NonCommutingDiagram
from .inverse import InvCat

NOTE = ("strongly Segal is certified as a sufficient condition for Segal fibrancy; "
        "homotopy-pullback conditions are not decided")


class InternalCat:
    """``K1 => K0`` with identities and composition on ``K1 x_{K0} K1``.

    Composable pairs are ``(f, g)`` with ``tgt(f) = src(g)`` (f first).
    """

    def __init__(self, base: BaseCat, obj: Presheaf, mor: Presheaf, src: PMap, tgt: PMap, ident: PMap,
                 comp: PMap, name: Optional[str] = None):
        self.base = base
        self.obj, self.mor = obj, mor
        self.src, self.tgt, self.ident, self.comp = src, tgt, ident, comp
        self.name = name
        self._composable = None

    def __repr__(self):
        return f"<InternalCat {self.name or ''} K0={self.obj.sizes()} K1={self.mor.sizes()}>"

    @property
    def composable(self) -> ps.Pullback:
        if self._composable is None:
            self._composable = ps.pullback(self.tgt, self.src)
        return self._composable

    def validate(self) -> "InternalCat":
        K0, K1 = self.obj, self.mor
        for f, what in ((self.src, "source"), (self.tgt, "target")):
            if f.src != K1 or f.tgt != K0:
                raise CompositionMismatch(f"{what} map must go K1 -> K0")
        if self.ident.src != K0 or self.ident.tgt != K1:
            raise CompositionMismatch("identity map must go K0 -> K1")
        dom = self.composable
        if self.comp.src != dom.obj or self.comp.tgt != K1:
            raise CompositionMismatch("composition must go K1 x_K0 K1 -> K1")
        one = ps.identity(K0)
        ps.require_equal(ps.compose(self.src, self.ident), one, "source of identity")
        ps.require_equal(ps.compose(self.tgt, self.ident), one, "target of identity")
        ps.require_equal(ps.compose(self.src, self.comp), ps.compose(self.src, dom.p1), "source of composite")
        ps.require_equal(ps.compose(self.tgt, self.comp), ps.compose(self.tgt, dom.p2), "target of composite")
        c = self.comp.comps
        for m, lv in enumerate(K1.levels):
            for f in lv:
                if c[m][(self.ident.comps[m][self.src.comps[m][f]], f)] != f:
                    raise NonCommutingDiagram(f"left unit law fails at {f!r}", condition="unit", level=m, element=f)
                if c[m][(f, self.ident.comps[m][self.tgt.comps[m][f]])] != f:
                    raise NonCommutingDiagram(f"right unit law fails at {f!r}", condition="unit", level=m, element=f)
        for m in range(K1.trunc + 1):
            for (f, g) in dom.obj.levels[m]:
                fg = c[m][(f, g)]
                for h in self.src.fibre(m, self.tgt.comps[m][g]):
                    if c[m][(fg, h)] != c[m][(f, c[m][(g, h)])]:
                        raise NonCommutingDiagram(f"associativity fails at {(f, g, h)!r}", condition="associativity",
                                                  level=m, element=[f, g, h])
        return self

    def compose(self, m: int, f, g):
        return self.comp.comps[m][(f, g)]


def from_category(objects, arrows: Mapping, compose: Mapping, identities: Optional[Mapping] = None,
                  name: Optional[str] = None) -> InternalCat:
    """A finite ordinary category as a discrete internal category.

    ``arrows`` maps arrow labels to ``(src, tgt)`` and must include
    identities (given by ``identities[obj]``, default ``("id", obj)``).
    ``compose[(f, g)]`` is f followed by g.
    """
    identities = dict(identities or {x: ("id", x) for x in objects})
    arrows = dict(arrows)
    for x, i in identities.items():
        arrows.setdefault(i, (x, x))
    K0 = ps.finset(objects)
    K1 = ps.finset(list(arrows))
    src = ps.finmap(K1, K0, {f: st[0] for f, st in arrows.items()})
    tgt = ps.finmap(K1, K0, {f: st[1] for f, st in arrows.items()})
    ident = ps.finmap(K0, K1, identities)
    dom = ps.pullback(tgt, src)
    table = {}
    for (f, g) in dom.obj.levels[0]:
        if f == identities[arrows[f][0]]:
            table[(f, g)] = g
        elif g == identities[arrows[g][1]]:
            table[(f, g)] = f
        else:
            table[(f, g)] = compose[(f, g)]
    comp = ps.PMap(dom.obj, K1, [table])
    K = InternalCat(FinSetBase(), K0, K1, src, tgt, ident, comp, name)
    K._composable = dom
    return K.validate()


def sigma(I: InvCat) -> InternalCat:
    """Coproduct of object spaces and hom spans, with identity summands.

    Objects are ``(x, e)``; morphisms are ``(("hom", x, y), f)`` and
    ``(("id", x), e)``.
    """
    n = I.base.trunc
    order = I.order()
    K0 = ps.coproduct([(x, I.spaces[x]) for x in order]) if order else ps.empty(n)
    parts = [(("hom", x, y), I.homs[(x, y)].obj) for x in order for y in I.poset.below(x)]
    parts += [(("id", x), I.spaces[x]) for x in order]
    K1 = ps.coproduct(parts) if parts else ps.empty(n)

    def src_fn(m, e):
        tag, f = e
        if tag[0] == "id":
            return (tag[1], f)
        return (tag[1], I.homs[(tag[1], tag[2])].left.comps[m][f])

    def tgt_fn(m, e):
        tag, f = e
        if tag[0] == "id":
            return (tag[1], f)
        return (tag[2], I.homs[(tag[1], tag[2])].right.comps[m][f])

    src = ps.from_function(K1, K0, src_fn)
    tgt = ps.from_function(K1, K0, tgt_fn)
    ident = ps.from_function(K0, K1, lambda m, e: (("id", e[0]), e[1]))
    dom = ps.pullback(tgt, src)

    def comp_fn(m, pair):
        (tf, f), (tg, g) = pair
        if tf[0] == "id":
            return (tg, g)
        if tg[0] == "id":
            return (tf, f)
        x, y, z = tf[1], tf[2], tg[2]
        return (("hom", x, z), I.comp[(x, y, z)].comps[m][(f, g)])

    comp = ps.from_function(dom.obj, K1, comp_fn)
    K = InternalCat(I.base, K0, K1, src, tgt, ident, comp, "Sigma")
    K._composable = dom
    return K.validate()


# -- strongly Segal ----------------------------------------------------------

@dataclass
class SegalReport:
    ok: bool
    checks: dict = field(default_factory=dict)
    note: str = NOTE

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"strongly_segal": self.ok, "note": self.note,
                "checks": {k: v.to_json() for k, v in self.checks.items()},
                "failed": [k for k, v in self.checks.items() if not v]}


def is_strongly_segal(subject, base: Optional[BaseCat] = None) -> SegalReport:
    """Object space fibrant and both legs of the morphism space fibrations."""
    checks = {}
    if isinstance(subject, InvCat):
        base = base or subject.base
        for x in subject.order():
            checks[f"I({x}) fibrant"] = base.is_fibrant(subject.spaces[x])
        for x in subject.order():
            for y in subject.poset.below(x):
                span = subject.homs[(x, y)]
                checks[f"I({x},{y}) -> I({x})"] = base.is_fibration(span.left)
                checks[f"I({x},{y}) -> I({y})"] = base.is_fibration(span.right)
    else:
        base = base or subject.base
        checks["K0 fibrant"] = base.is_fibrant(subject.obj)
        checks["source"] = base.is_fibration(subject.src)
        checks["target"] = base.is_fibration(subject.tgt)
    return SegalReport(all(bool(v) for v in checks.values()), checks)


# -- nerve -------------------------------------------------------------------

def nerve_level(K: InternalCat, n: int) -> Presheaf:
    """Composable n-chains ``(f_1, ..., f_n)``; level 0 is K0 and level 1 is K1."""
    if n < 0:
        raise ValueError("nerve level must be non-negative")
    if n == 0:
        return K.obj
    if n == 1:
        return K.mor
    K1 = K.mor
    levels = []
    for m in range(K1.trunc + 1):
        by_src: dict = {}
        for f in K1.levels[m]:
            by_src.setdefault(K.src.comps[m][f], []).append(f)
        chains = [(f,) for f in K1.levels[m]]
        for _ in range(n - 1):
            chains = [c + (g,) for c in chains for g in by_src.get(K.tgt.comps[m][c[-1]], ())]
        levels.append(ps.sorted_labels(chains))
    faces = {(m, i): {c: tuple(K1.face(m, i, f) for f in c) for c in levels[m]}
             for m in range(1, K1.trunc + 1) for i in range(m + 1)}
    degens = {(m, i): {c: tuple(K1.degen(m, i, f) for f in c) for c in levels[m]}
              for m in range(K1.trunc) for i in range(m + 1)}
    return Presheaf(levels, faces, degens, check=False, name=f"N{n}")


def sigma_nerve_decomposition(I: InvCat, n: int) -> int:
    """Size of level n of the nerve of Sigma(I), summed over weakly decreasing object chains.

    A chain ``x_0 >= x_1 >= ... >= x_n`` contributes the vertices of the wide
    pullback of its hom spans, with ``I(x)`` standing in for the identity
    summand on repeated objects.
    """
    total = 0
    objs = I.order()
    for chain in itertools.product(objs, repeat=n + 1):
        if not all(chain[i + 1] == chain[i] or I.poset.precedes(chain[i + 1], chain[i]) for i in range(n)):
            continue
        pieces = []
        for a, b in zip(chain, chain[1:]):
            pieces.append(("id", a) if a == b else ("hom", a, b))
        if n == 0:
            total += len(I.spaces[chain[0]].levels[0])
            continue
        count = 0

        def go(i, point):
            nonlocal count
            if i == len(pieces):
                count += 1
                return
            piece = pieces[i]
            if piece[0] == "id":
                elems = [(e, e) for e in I.spaces[piece[1]].levels[0]]
            else:
                span = I.homs[(piece[1], piece[2])]
                elems = [(span.left.at0(f), span.right.at0(f)) for f in span.obj.levels[0]]
            for s, t in elems:
                if point is None or s == point:
                    go(i + 1, t)

        go(0, None)
        total += count
    return total


# -- EI diagnostics ----------------------------------------------------------

@dataclass
class EIReport:
    is_ei: bool
    components: dict
    non_invertible_endos: list
    precedence: Optional[wf.WfPoset]
    cycle: Optional[list]

    def to_json(self):
        return {"is_EI_shadow": self.is_ei, "components": {str(k): v for k, v in self.components.items()},
                "non_invertible_endomorphisms": [str(f) for f in self.non_invertible_endos],
                "precedence": self.precedence.to_json() if self.precedence else None,
                "cycle": self.cycle, "inverse_EI": self.is_ei and self.precedence is not None}


def components(obj: Presheaf) -> dict:
    """Connected components of the vertices (joined by edges); labelled by their least vertex."""
    parent = {v: v for v in obj.levels[0]}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    if obj.trunc >= 1:
        for e in obj.levels[1]:
            a, b = find(obj.face(1, 0, e)), find(obj.face(1, 1, e))
            if a != b:
                parent[a] = b
    groups: dict = {}
    for v in obj.levels[0]:
        groups.setdefault(find(v), []).append(v)
    out = {}
    for members in groups.values():
        members = ps.sorted_labels(members)
        for v in members:
            out[v] = members[0]
    return out


def ei_inverse_diagnostic(K: InternalCat) -> EIReport:
    """Vertex-level shadow of K: EI check by exhaustive inverse search, then well-foundedness of precedence."""
    comp_of = components(K.obj)
    src, tgt = K.src.comps[0], K.tgt.comps[0]
    ident = K.ident.comps[0]
    table = K.comp.comps[0]
    arrows = K.mor.levels[0]

    def invertible(f):
        a, b = src[f], tgt[f]
        for g in arrows:
            if src[g] == b and tgt[g] == a and table.get((f, g)) == ident[a] and table.get((g, f)) == ident[b]:
                return True
        return False

    inv = {f: invertible(f) for f in arrows}
    bad = [f for f in arrows if comp_of[src[f]] == comp_of[tgt[f]] and not inv[f]]
    pairs = {(comp_of[tgt[f]], comp_of[src[f]]) for f in arrows
             if comp_of[src[f]] != comp_of[tgt[f]] and not inv[f]}
    labels = ps.sorted_labels(set(comp_of.values()))
    precedence, cycle = None, None
    try:
        precedence = wf.check_well_founded(sorted(pairs, key=ps.sort_key), elements=labels)
    except CycleFound as exc:
        cycle = exc.path
    groups: dict = {}
    for v, c in comp_of.items():
        groups.setdefault(c, []).append(v)
    return EIReport(not bad, {c: list(vs) for c, vs in groups.items()}, bad, precedence, cycle)
