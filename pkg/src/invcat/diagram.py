"""Diagrams on internal inverse categories, reindexing, matching objects and Reedy fibrancy."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import wf
from .base import presheaf as ps
from .base.instances import Verdict
from .base.presheaf import PMap, Presheaf
from .errors import (
    AssocFailure, MatchingObjectFailure, NonCommutingDiagram, NotAMap, TargetMismatch, UnknownLabel,
)
from .inverse import InvCat


@dataclass(eq=False)
class Component:
    """``Gamma <- A_x -> I(x)``."""

    obj: Presheaf
    to_gamma: PMap
    to_space: PMap


class Diagram:
    """An I-diagram over the base object ``gamma``.

    ``actions[(x, y)]`` maps the canonical pullback ``A_x x_{I(x)} I(x, y)``
    (pairs ``(a, f)``) to ``A_y``.
    """

    def __init__(self, invcat: InvCat, gamma: Presheaf, comps: Mapping, actions: Mapping, name: Optional[str] = None):
        self.invcat = invcat
        self.gamma = gamma
        self.comps = dict(comps)
        self.actions = dict(actions)
        self.name = name
        self._cache: dict = {}
        self._origin: Optional["Diagram"] = None

    def __repr__(self):
        return f"<Diagram {self.name or ''} on {list(self.invcat.objects)!r}>"

    def action_domain(self, x, y) -> ps.Pullback:
        key = ("ad", x, y)
        if key not in self._cache:
            self._cache[key] = ps.pullback(self.comps[x].to_space, self.invcat.homs[(x, y)].left)
        return self._cache[key]

    def act(self, x, y, m: int, a, f):
        return self.actions[(x, y)].comps[m][(a, f)]

    def restrict(self, J: InvCat) -> "Diagram":
        """Restriction to a down-closed full subcategory (cached per subcategory object)."""
        if J is self.invcat:
            return self
        if self._origin is not None:
            return self._origin.restrict(J)
        key = ("restrict", id(J))
        if key not in self._cache:
            keep = set(J.objects)
            D = Diagram(J, self.gamma, {x: c for x, c in self.comps.items() if x in keep},
                        {k: v for k, v in self.actions.items() if k[0] in keep and k[1] in keep}, self.name)
            D._origin = self
            D._cache = self._cache  # action domains are shared
            self._cache[key] = (J, D)
        return self._cache[key][1]

    def sizes(self) -> dict:
        return {x: c.obj.sizes() for x, c in self.comps.items()}

    def same(self, other: "Diagram") -> bool:
        return (self.gamma == other.gamma and set(self.comps) == set(other.comps)
                and all(self.comps[x].obj == other.comps[x].obj
                        and self.comps[x].to_gamma == other.comps[x].to_gamma
                        and self.comps[x].to_space == other.comps[x].to_space for x in self.comps)
                and all(self.actions[k] == other.actions[k] for k in self.actions))


def validate_diagram(A: Diagram) -> Diagram:
    I = A.invcat
    for x in I.objects:
        if x not in A.comps:
            raise UnknownLabel(f"diagram has no component at {x!r}", label=x)
        c = A.comps[x]
        if c.to_gamma.src != c.obj or c.to_gamma.tgt != A.gamma:
            raise NotAMap(f"component {x}: first leg must go to Gamma", object=x)
        if c.to_space.src != c.obj or c.to_space.tgt != I.spaces[x]:
            raise NotAMap(f"component {x}: second leg must go to I({x})", object=x)
    for x in I.objects:
        for y in I.poset.below(x):
            if (x, y) not in A.actions:
                raise UnknownLabel(f"diagram has no action for {x}>{y}", pair=[x, y])
            act = A.actions[(x, y)]
            dom = A.action_domain(x, y)
            if act.src != dom.obj or act.tgt != A.comps[y].obj:
                raise NotAMap(f"action {x}>{y} has the wrong domain or codomain", pair=[x, y])
            ps.require_equal(ps.compose(A.comps[y].to_gamma, act), ps.compose(A.comps[x].to_gamma, dom.p1),
                             f"action {x}>{y} over Gamma", pair=[x, y])
            ps.require_equal(ps.compose(A.comps[y].to_space, act), ps.compose(I.homs[(x, y)].right, dom.p2),
                             f"action {x}>{y} over I({y})", pair=[x, y])
    for x, y, z in I.chains(3):
        cxyz = I.comp[(x, y, z)]
        for m, lv in enumerate(A.action_domain(x, y).obj.levels):
            for (a, f) in lv:
                for g in I.homs[(y, z)].obj.levels[m]:
                    if I.homs[(y, z)].left.comps[m][g] != I.homs[(x, y)].right.comps[m][f]:
                        continue
                    one = A.act(y, z, m, A.act(x, y, m, a, f), g)
                    two = A.act(x, z, m, a, cxyz.comps[m][(f, g)])
                    if one != two:
                        raise AssocFailure(f"diagram action not associative on {x}>{y}>{z} at ({a!r}, {f!r}, {g!r})",
                                           chain=[z, y, x], element=[a, f, g], level=m, left=one, right=two)
    return A


class DiagramMap:
    """Span maps ``A_x -> B_x`` over the same Gamma, commuting with the actions."""

    def __init__(self, source: Diagram, target: Diagram, comps: Mapping):
        self.source = source
        self.target = target
        self.comps = dict(comps)

    def __repr__(self):
        return f"<DiagramMap {self.source!r} -> {self.target!r}>"

    def key(self):
        return tuple((x, tuple(frozenset(c.items()) for c in self.comps[x].comps))
                     for x in sorted(self.comps, key=ps.sort_key))

    def __eq__(self, other):
        return isinstance(other, DiagramMap) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def validate_map(phi: DiagramMap) -> DiagramMap:
    A, B = phi.source, phi.target
    if A.gamma != B.gamma:
        raise TargetMismatch("diagram map between diagrams over different bases")
    I = A.invcat
    for x in I.objects:
        f = phi.comps.get(x)
        if f is None or f.src != A.comps[x].obj or f.tgt != B.comps[x].obj:
            raise NotAMap(f"component {x} of the diagram map is missing or mistyped", object=x)
        ps.require_equal(ps.compose(B.comps[x].to_gamma, f), A.comps[x].to_gamma, f"map component {x} over Gamma")
        ps.require_equal(ps.compose(B.comps[x].to_space, f), A.comps[x].to_space, f"map component {x} over I({x})")
    for x in I.objects:
        for y in I.poset.below(x):
            for m, lv in enumerate(A.action_domain(x, y).obj.levels):
                for (a, h) in lv:
                    one = phi.comps[y].comps[m][A.act(x, y, m, a, h)]
                    two = B.act(x, y, m, phi.comps[x].comps[m][a], h)
                    if one != two:
                        raise NonCommutingDiagram(f"map does not commute with action {x}>{y} at {(a, h)!r}",
                                                  pair=[x, y], element=[a, h], level=m)
    return phi


# -- constructions ---------------------------------------------------------

def reindex(A: Diagram, f: PMap) -> Diagram:
    """Pull A back along ``f: Y -> Gamma``; component simplices are pairs ``(a, y)``."""
    if f.tgt != A.gamma:
        raise TargetMismatch("reindexing map must land in the diagram's base object")
    I = A.invcat
    comps = {}
    for x, c in A.comps.items():
        pb = ps.pullback(c.to_gamma, f)
        comps[x] = Component(pb.obj, pb.p2, ps.compose(c.to_space, pb.p1))
    B = Diagram(I, f.src, comps, {}, A.name)
    actions = {}
    for (x, y) in A.actions:
        dom = B.action_domain(x, y)
        actions[(x, y)] = ps.from_function(
            dom.obj, comps[y].obj, lambda m, e, x=x, y=y: (A.act(x, y, m, e[0][0], e[1]), e[0][1]))
    B.actions = actions
    return B


def reindex_map(phi: DiagramMap, f: PMap, source: Optional[Diagram] = None, target: Optional[Diagram] = None) -> DiagramMap:
    src = source or reindex(phi.source, f)
    tgt = target or reindex(phi.target, f)
    comps = {x: ps.from_function(src.comps[x].obj, tgt.comps[x].obj,
                                 lambda m, e, x=x: (phi.comps[x].comps[m][e[0]], e[1]))
             for x in phi.comps}
    return DiagramMap(src, tgt, comps)


def terminal_diagram(I: InvCat, gamma: Presheaf) -> Diagram:
    """The terminal diagram over gamma: components ``Gamma x I(x)``."""
    comps = {}
    for x in I.objects:
        pb = ps.product(gamma, I.spaces[x])
        comps[x] = Component(pb.obj, pb.p1, pb.p2)
    D = Diagram(I, gamma, comps, {}, "1")
    for x in I.objects:
        for y in I.poset.below(x):
            dom = D.action_domain(x, y)
            right = I.homs[(x, y)].right
            D.actions[(x, y)] = ps.from_function(dom.obj, comps[y].obj,
                                                 lambda m, e, right=right: (e[0][0], right.comps[m][e[1]]))
    return D


def to_terminal_map(A: Diagram) -> DiagramMap:
    T = terminal_diagram(A.invcat, A.gamma)
    comps = {x: ps.from_function(c.obj, T.comps[x].obj,
                                 lambda m, e, c=c: (c.to_gamma.comps[m][e], c.to_space.comps[m][e]))
             for x, c in A.comps.items()}
    return DiagramMap(A, T, comps)


def identity_map(A: Diagram) -> DiagramMap:
    return DiagramMap(A, A, {x: ps.identity(c.obj) for x, c in A.comps.items()})


def compose_maps(g: DiagramMap, f: DiagramMap) -> DiagramMap:
    return DiagramMap(f.source, g.target, {x: ps.compose(g.comps[x], f.comps[x]) for x in f.comps})


def profile(I: InvCat, x) -> Diagram:
    """``I(x, -)``: the hom spans out of x as a diagram over ``I(x)`` on the strict slice."""
    if I._root is not None:
        return profile(I._root, x)
    key = ("profile", x)
    if key not in I._cache:
        J = I.slice("strict", x)
        comps = {y: Component(I.homs[(x, y)].obj, I.homs[(x, y)].left, I.homs[(x, y)].right) for y in J.objects}
        actions = {(y, z): I.comp[(x, y, z)] for y in J.objects for z in J.poset.below(y)}
        I._cache[key] = Diagram(J, I.spaces[x], comps, actions, f"I({x},-)")
    return I._cache[key]


def pullback_diagram(f: DiagramMap, g: DiagramMap) -> tuple:
    """Objectwise pullback of ``f: A -> C`` and ``g: B -> C``; returns (P, p1, p2)."""
    A, B, C = f.source, g.source, f.target
    I = A.invcat
    pbs = {x: ps.pullback(f.comps[x], g.comps[x]) for x in I.objects}
    comps = {x: Component(pb.obj, ps.compose(A.comps[x].to_gamma, pb.p1), ps.compose(A.comps[x].to_space, pb.p1))
             for x, pb in pbs.items()}
    P = Diagram(I, A.gamma, comps, {}, "P")
    for x in I.objects:
        for y in I.poset.below(x):
            dom = P.action_domain(x, y)
            P.actions[(x, y)] = ps.from_function(
                dom.obj, comps[y].obj,
                lambda m, e, x=x, y=y: (A.act(x, y, m, e[0][0], e[1]), B.act(x, y, m, e[0][1], e[1])))
    p1 = DiagramMap(P, A, {x: pbs[x].p1 for x in I.objects})
    p2 = DiagramMap(P, B, {x: pbs[x].p2 for x in I.objects})
    return P, p1, p2


# -- matching objects and Reedy fibrancy -----------------------------------

def matching_object(A: Diagram, x, engine=None):
    """``M_x A``: the hom-object from ``I(x, -)`` to A on the strict slice below x.

    Returns the :class:`~invcat.hom.HomObject`; its ``leg`` maps to
    ``I(x) x Gamma``.
    """
    from .hom import HomEngine

    I = A.invcat
    if x not in I.poset:
        raise UnknownLabel(f"unknown object {x!r}", label=x)
    engine = engine or HomEngine()
    J = I.slice("strict", x)
    return engine.hom(J, profile(I, x), A.restrict(J))


def matching_map(A: Diagram, x, engine=None) -> PMap:
    """The comparison map ``A_x -> M_x A``."""
    from .hom import HomEngine

    engine = engine or HomEngine()
    M = matching_object(A, x, engine)
    c = A.comps[x]
    I = A.invcat
    # family over A_x: (f, a) |-> act(a, f) for f in I(x, y)
    return M.classify(c.obj, c.to_space, c.to_gamma,
                      lambda y, m, f, a: A.act(x, y, m, a, f))


def matching_induced(phi: DiagramMap, x, engine=None) -> PMap:
    """``M_x f : M_x A -> M_x B`` for a diagram map f: A -> B."""
    from .hom import HomEngine

    engine = engine or HomEngine()
    MA = matching_object(phi.source, x, engine)
    MB = matching_object(phi.target, x, engine)
    return MB.classify(MA.carrier, MA.leg_first, MA.leg_second,
                       lambda y, m, f, h: phi.comps[y].comps[m][MA.apply(y, m, f, h)])


@dataclass
class ReedyReport:
    ok: bool
    per_object: dict = field(default_factory=dict)
    failed_at: Optional[object] = None
    kind: str = "fibration"

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "kind": self.kind, "failed_at": self.failed_at,
                "per_object": {str(k): v.to_json() for k, v in self.per_object.items()}}


def comparison_map(phi: DiagramMap, x, engine=None):
    """``A_x -> M_x A x_{M_x B} B_x`` together with the pullback it lands in."""
    from .hom import HomEngine

    engine = engine or HomEngine()
    A, B = phi.source, phi.target
    mA = matching_map(A, x, engine)
    mB = matching_map(B, x, engine)
    Mf = matching_induced(phi, x, engine)
    pb = ps.pullback(Mf, mB)
    return pb.pair(mA, phi.comps[x]), pb


def is_reedy_fibration(phi: DiagramMap, prefibration: bool = False, engine=None) -> ReedyReport:
    """Check each comparison map ``A_x -> M_x A x_{M_x B} B_x`` in a fixed topological order."""
    from .hom import HomEngine

    engine = engine or HomEngine()
    I = phi.source.invcat
    base = I.base
    report = ReedyReport(True, kind="prefibration" if prefibration else "fibration")
    for x in I.order():
        try:
            cmp, _ = comparison_map(phi, x, engine)
        except Exception as exc:  # noqa: BLE001 - reported as a certificate
            raise MatchingObjectFailure(f"matching object at {x!r} failed: {exc}", object=x) from exc
        verdict = base.is_prefibration(cmp) if prefibration else base.is_fibration(cmp)
        report.per_object[x] = verdict
        if not verdict and report.ok:
            report.ok = False
            report.failed_at = x
    return report


def is_reedy_fibrant(A: Diagram, prefibration: bool = False, engine=None) -> ReedyReport:
    """Each ``A_x -> M_x A`` is a fibration (the map to the terminal diagram is a Reedy fibration)."""
    from .hom import HomEngine

    engine = engine or HomEngine()
    I = A.invcat
    report = ReedyReport(True, kind="prefibrant" if prefibration else "fibrant")
    for x in I.order():
        mA = matching_map(A, x, engine)
        verdict = I.base.is_prefibration(mA) if prefibration else I.base.is_fibration(mA)
        report.per_object[x] = verdict
        if not verdict and report.ok:
            report.ok = False
            report.failed_at = x
    return report


@dataclass
class FibrancyReport:
    ok: bool
    spaces: dict
    profiles: dict
    failed: list

    def __bool__(self):
        return self.ok

    def to_json(self):
        failed = [{"condition": "space fibrant", "object": f[1]} if f[0] == "space" else
                  {"condition": "profile Reedy fibrant", "object": f[1], "at": f[2]} for f in self.failed]
        return {"fibrant": self.ok, "failed": failed,
                "spaces": {str(k): v.to_json() for k, v in self.spaces.items()},
                "profiles": {str(k): v.to_json() for k, v in self.profiles.items()}}


def is_fibrant_invcat(I: InvCat, engine=None) -> FibrancyReport:
    """Each ``I(x)`` fibrant and each ``I(x, -)`` Reedy fibrant, visited by well-founded recursion."""
    from .hom import HomEngine

    engine = engine or HomEngine()

    def step(x, below):
        return (I.base.is_fibrant(I.spaces[x]), is_reedy_fibrant(profile(I, x), engine=engine))

    results = wf.recurse(I.poset, step)
    spaces = {x: r[0] for x, r in results.items()}
    profiles = {x: r[1] for x, r in results.items()}
    failed = [("space", x) for x in I.order() if not spaces[x]]
    failed += [("profile", x, profiles[x].failed_at) for x in I.order() if not profiles[x]]
    return FibrancyReport(not failed, spaces, profiles, failed)
