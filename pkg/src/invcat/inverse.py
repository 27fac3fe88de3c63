"""Inverse categories internal to a base category."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from . import wf
from .base import presheaf as ps
from .base.instances import BaseCat, FinSetBase, instance_for
from .base.presheaf import PMap, Presheaf
from .errors import (
    AssocFailure, InvalidProfile, LabelClash, MissingComposite, NonCommutingDiagram, NotAMap,
    SpanLegNotPrefibration, UnknownLabel, InstanceMismatch,
)


@dataclass(eq=False)
class Span:
    """``I(x) <- I(x, y) -> I(y)``: ``left`` goes to the upper object."""

    obj: Presheaf
    left: PMap
    right: PMap

    def same(self, other: "Span") -> bool:
        return self.obj == other.obj and self.left == other.left and self.right == other.right


class InvCat:
    """An inverse category internal to ``base``.

    ``homs[(x, y)]`` exists exactly when ``y < x``; ``comp[(x, y, z)]`` maps the
    canonical pullback ``I(x,y) x_{I(y)} I(y,z)`` (pairs ``(f, g)``) to
    ``I(x,z)``.  Construct through :func:`validate` to get every condition
    checked.
    """

    def __init__(self, base: BaseCat, poset: wf.WfPoset, spaces: Mapping, homs: Mapping, comp: Mapping,
                 display: Optional[Mapping] = None):
        self.base = base
        self.poset = poset
        self.spaces = dict(spaces)
        self.homs = dict(homs)
        self.comp = dict(comp)
        self.display = dict(display or {})
        self._cache: dict = {}
        self._root: Optional["InvCat"] = None

    @property
    def objects(self) -> tuple:
        return self.poset.elements

    def __repr__(self):
        return f"<InvCat on {list(self.objects)!r} over {self.base.name}>"

    def order(self) -> tuple:
        return self.poset.topological_order()

    def chains(self, length: int):
        """Strictly decreasing chains ``(x0 > x1 > ... )`` of the given length."""
        def go(prefix):
            if len(prefix) == length:
                yield tuple(prefix)
                return
            for y in self.poset.below(prefix[-1]):
                yield from go(prefix + [y])
        for x in self.objects:
            yield from go([x])

    def comp_domain(self, x, y, z) -> ps.Pullback:
        key = ("cd", x, y, z)
        if key not in self._cache:
            self._cache[key] = ps.pullback(self.homs[(x, y)].right, self.homs[(y, z)].left)
        return self._cache[key]

    def full_subcategory(self, subset: Iterable) -> "InvCat":
        keep = set(subset)
        poset = self.poset.restrict(keep)
        return InvCat(
            self.base, poset,
            {x: v for x, v in self.spaces.items() if x in keep},
            {k: v for k, v in self.homs.items() if k[0] in keep and k[1] in keep},
            {k: v for k, v in self.comp.items() if all(t in keep for t in k)},
            {k: v for k, v in self.display.items() if k in keep},
        )

    def slice(self, mode: str, x) -> "InvCat":
        """``x/I`` (mode ``lax``) or the strict slice below x (mode ``strict``), cached."""
        if x not in self.poset:
            raise UnknownLabel(f"unknown object {x!r}", label=x)
        if mode not in ("strict", "lax"):
            raise ValueError(f"mode must be 'strict' or 'lax', got {mode!r}")
        if self._root is not None:
            # slices are down-closed, so slicing a slice is slicing the root
            return self._root.slice(mode, x)
        key = ("slice", mode, x)
        if key not in self._cache:
            below = self.poset.below(x)
            J = self.full_subcategory(below + ((x,) if mode == "lax" else ()))
            J._root = self
            self._cache[key] = J
        return self._cache[key]

    def same(self, other: "InvCat") -> bool:
        """Structural equality of all data."""
        return (
            set(self.objects) == set(other.objects)
            and self.poset.lt == other.poset.lt
            and all(self.spaces[x] == other.spaces[x] for x in self.objects)
            and set(self.homs) == set(other.homs)
            and all(self.homs[k].same(other.homs[k]) for k in self.homs)
            and set(self.comp) == set(other.comp)
            and all(self.comp[k] == other.comp[k] for k in self.comp)
        )

    def hom_sizes(self) -> dict:
        return {k: v.obj.sizes() for k, v in self.homs.items()}


def validate(base: BaseCat, poset: wf.WfPoset, spaces: Mapping, homs: Mapping, comp: Mapping,
             display: Optional[Mapping] = None) -> InvCat:
    """Check every condition of an internal inverse category and return it.

    Raises the first violation found, in a fixed order: shape, spans,
    composites over both ends, associativity.
    """
    I = InvCat(base, poset, spaces, homs, comp, display)
    for x in poset:
        if x not in I.spaces:
            raise UnknownLabel(f"no object space for {x!r}", label=x)
        base.check(I.spaces[x])
    for key in I.homs:
        x, y = key
        if not poset.precedes(y, x):
            raise UnknownLabel(f"hom span given for {x}>{y} but {y} is not below {x}", pair=[x, y])
    for x in poset:
        for y in poset.below(x):
            if (x, y) not in I.homs:
                raise MissingComposite(f"missing hom span for {x}>{y}", pair=[x, y])
            span = I.homs[(x, y)]
            base.check(span.obj)
            if span.left.src != span.obj or span.left.tgt != I.spaces[x]:
                raise NotAMap(f"left leg of {x}>{y} must go to I({x})", pair=[x, y])
            if span.right.src != span.obj or span.right.tgt != I.spaces[y]:
                raise NotAMap(f"right leg of {x}>{y} must go to I({y})", pair=[x, y])
            verdict = base.is_prefibration(span.left)
            if not verdict:
                raise SpanLegNotPrefibration(f"left leg of {x}>{y} is not a prefibration",
                                             pair=[x, y], detail=verdict.to_json())
    for x, y, z in I.chains(3):
        if (x, y, z) not in I.comp:
            raise MissingComposite(f"missing composite {x}>{y}>{z}", chain=[x, y, z])
        c = I.comp[(x, y, z)]
        dom = I.comp_domain(x, y, z)
        if c.src != dom.obj or c.tgt != I.homs[(x, z)].obj:
            raise NotAMap(f"composite {x}>{y}>{z} has the wrong domain or codomain", chain=[x, y, z])
        ps.require_equal(ps.compose(I.homs[(x, z)].left, c), ps.compose(I.homs[(x, y)].left, dom.p1),
                         f"composite {x}>{y}>{z} over I({x})", chain=[x, y, z])
        ps.require_equal(ps.compose(I.homs[(x, z)].right, c), ps.compose(I.homs[(y, z)].right, dom.p2),
                         f"composite {x}>{y}>{z} over I({z})", chain=[x, y, z])
    extra = [k for k in I.comp if k not in set(I.chains(3))]
    if extra:
        raise UnknownLabel(f"composites given for non-chains {extra}", chains=[list(k) for k in extra])
    check_associativity(I)
    return I


def check_associativity(I: InvCat):
    """Exhaustive check that ``(f g) h = f (g h)`` for every chain x > y > z > w."""
    for x, y, z, w in I.chains(4):
        c_xyz, c_xzw = I.comp[(x, y, z)], I.comp[(x, z, w)]
        c_yzw, c_xyw = I.comp[(y, z, w)], I.comp[(x, y, w)]
        left_zw = I.homs[(z, w)].left
        for m, lv in enumerate(I.comp_domain(x, y, z).obj.levels):
            for (f, g) in lv:
                for h in I.homs[(z, w)].obj.levels[m]:
                    if left_zw.comps[m][h] != I.homs[(y, z)].right.comps[m][g]:
                        continue
                    one = c_xzw.comps[m][(c_xyz.comps[m][(f, g)], h)]
                    two = c_xyw.comps[m][(f, c_yzw.comps[m][(g, h)])]
                    if one != two:
                        raise AssocFailure(
                            f"associativity fails on chain {x}>{y}>{z}>{w} at ({f!r}, {g!r}, {h!r})",
                            chain=[w, z, y, x], element=[f, g, h], level=m, left=one, right=two)


def empty_invcat(base: BaseCat) -> InvCat:
    return InvCat(base, wf.check_well_founded([], elements=[]), {}, {}, {})


def trivial(poset: wf.WfPoset, base: Optional[BaseCat] = None) -> InvCat:
    """Every object space and hom span is the terminal object."""
    base = base or FinSetBase()
    one = base.terminal()
    idm = ps.identity(one)
    spaces = {x: one for x in poset}
    homs = {(x, y): Span(one, idm, idm) for x in poset for y in poset.below(x)}
    I = InvCat(base, poset, spaces, homs, {})
    comp = {}
    for x, y, z in I.chains(3):
        comp[(x, y, z)] = ps.to_terminal(I.comp_domain(x, y, z).obj)
    I.comp = comp
    return validate(base, poset, spaces, homs, comp)


def from_ordinary(poset: wf.WfPoset, arrows: Mapping, compose: Mapping, base: Optional[BaseCat] = None) -> InvCat:
    """Embed an ordinary finite inverse category.

    ``arrows[(x, y)]`` lists the non-identity arrows x -> y (y < x);
    ``compose[(f, g)]`` gives the composite of f: x -> y then g: y -> z.
    Object spaces are the point and ``I(x, y)`` is the discrete set of arrows.
    """
    base = base or FinSetBase()
    n = base.trunc
    one = base.terminal()
    spaces = {x: one for x in poset}
    homs = {}
    for x in poset:
        for y in poset.below(x):
            obj = ps.discrete(arrows.get((x, y), ()), n)
            homs[(x, y)] = Span(obj, ps.to_terminal(obj), ps.to_terminal(obj))
    I = InvCat(base, poset, spaces, homs, {})
    comp = {}
    for x, y, z in I.chains(3):
        dom = I.comp_domain(x, y, z)
        comp[(x, y, z)] = ps.from_function(dom.obj, homs[(x, z)].obj, lambda m, fg: compose[fg])
    return validate(base, poset, spaces, homs, comp)


def down_closed_slice(I: InvCat, mode: str, x) -> InvCat:
    return I.slice(mode, x)


def collage_extend(J: InvCat, x, Ix: Presheaf, profile) -> InvCat:
    """Adjoin ``x`` above every object of J, reading its hom data off ``profile``.

    ``profile`` is a J-diagram over ``Ix``: its component at y becomes
    ``I(x, y)`` and its actions become the composites ``x > y > z``.
    """
    from .diagram import Diagram, validate_diagram

    if x in J.poset:
        raise LabelClash(f"label {x!r} already used", label=x)
    if not isinstance(profile, Diagram) or profile.invcat is not J and not profile.invcat.same(J):
        raise InvalidProfile("profile must be a diagram over the inverse category being extended")
    if profile.gamma != Ix:
        raise InvalidProfile("profile must live over the new object space")
    try:
        validate_diagram(profile)
    except Exception as exc:
        raise InvalidProfile(f"profile is not a valid diagram: {exc}") from exc
    pairs = [tuple(p) for p in J.poset.generators or J.poset.lt] + [(y, x) for y in J.objects]
    poset = wf.check_well_founded(pairs, elements=list(J.objects) + [x])
    spaces = dict(J.spaces)
    spaces[x] = Ix
    homs = dict(J.homs)
    comp = dict(J.comp)
    for y in J.objects:
        c = profile.comps[y]
        homs[(x, y)] = Span(c.obj, c.to_gamma, c.to_space)
    for (y, z), act in profile.actions.items():
        comp[(x, y, z)] = act
    return validate(J.base, poset, spaces, homs, comp, J.display)
