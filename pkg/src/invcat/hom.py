"""Hom-objects between diagrams on an internal inverse category.

For diagrams A over X and B over Y the hom-object is an object C with a leg
to ``X x Y`` such that maps ``Z -> C`` over ``(p, q)`` correspond to diagram
maps ``p*A -> q*B``.  It is built by well-founded recursion: at each object x
the partial maps defined on the lax slice below x form an object ``S_x``,
obtained from the partial maps on the strict slice by a dependent product of
a local exponential between the pulled-back components at x.

Carrier simplices are tuples ``(xy, s_1, ..., s_k)`` with one entry per object
in topological order.
"""
from __future__ import annotations

from typing import Callable, Optional

from .base import presheaf as ps
from .base.presheaf import PMap, Presheaf
from .diagram import Diagram, DiagramMap, matching_map, matching_object, profile, reindex
from .errors import SizeBoundExceeded, TargetMismatch, UniversalPropertyViolation
from .inverse import InvCat

XY = "XY"


class _Stage:
    """Everything built at one object x of the recursion."""

    __slots__ = ("H", "MA", "MB", "matchA", "matchB", "P", "c", "E", "R", "pos")


class HomObject:
    """The hom-object ``[A, B]`` together with its universal family."""

    def __init__(self, engine: "HomEngine", J: InvCat, A: Diagram, B: Diagram):
        self.engine = engine
        self.invcat = J
        self.source = A
        self.target = B
        self.order = J.order()
        self.xy = ps.product(A.gamma, B.gamma)
        self.stages: dict = {}
        self._fibres: dict = {}
        self._index: dict = {}
        for x in self.order:
            self.stages[x] = self._stage(x)
        objects = {XY: self.xy.obj}
        arrows = []
        for x in self.order:
            objects[x] = self.stages[x].R.obj
            arrows.append((x, XY, self._to_xy(x)))
            for y in J.poset.below(x):
                arrows.append((x, y, self._restriction(x, y)))
        lim = ps.limit(objects, arrows)
        self.limit = lim
        self.carrier: Presheaf = lim.obj
        self.pos = {nm: i for i, nm in enumerate(lim.names)}
        self.leg: PMap = lim.projections[XY]
        self.leg_first = ps.compose(self.xy.p1, self.leg)
        self.leg_second = ps.compose(self.xy.p2, self.leg)
        engine._charge(self.carrier)

    # -- construction ------------------------------------------------------

    def _to_xy(self, x) -> PMap:
        st = self.stages[x]
        return ps.compose(st.H.projections[XY], st.R.leg)

    def _restriction(self, x, y) -> PMap:
        st = self.stages[x]
        return ps.compose(st.H.projections[y], st.R.leg)

    def _stage(self, x) -> _Stage:
        J, A, B, eng = self.invcat, self.source, self.target, self.engine
        st = _Stage()
        below = J.poset.below(x)
        objects = {XY: self.xy.obj}
        arrows = []
        for y in below:
            objects[y] = self.stages[y].R.obj
            arrows.append((y, XY, self._to_xy(y)))
            for z in J.poset.below(y):
                arrows.append((y, z, self._restriction(y, z)))
        st.H = ps.limit(objects, arrows)
        st.pos = {nm: i for i, nm in enumerate(st.H.names)}
        st.MA = matching_object(A, x, eng)
        st.MB = matching_object(B, x, eng)
        st.matchA = eng.matching_map(A, x)
        st.matchB = eng.matching_map(B, x)
        h_first = ps.compose(self.xy.p1, st.H.projections[XY])
        h_second = ps.compose(self.xy.p2, st.H.projections[XY])
        st.P = ps.pullback(st.MA.leg_second, h_first)
        MA = st.MA

        def composite(y, j, f, mh):
            m, h = mh
            return self._apply_partial(st, y, j, MA.apply(y, j, f, m), h)

        st.c = st.MB.classify(st.P.obj, ps.compose(MA.leg_first, st.P.p1), ps.compose(h_second, st.P.p2),
                              composite)
        pa = ps.pullback(st.matchA, st.P.p1)
        pb = ps.pullback(st.matchB, st.c)
        st.E = ps.Exponential(pa.p2, pb.p2)
        st.R = ps.DepProduct(st.P.p2, st.E.leg)
        eng._charge(st.R.obj)
        return st

    def _apply_partial(self, st: _Stage, y, j, a, h):
        """Universal family of the strict-slice stage: apply the partial map h at y."""
        return self.top(y, j, h[st.pos[y]], a)

    # -- the universal family ----------------------------------------------

    def top(self, x, k: int, s, a):
        """Value at ``a`` (in ``A_x``) of the component at x of the k-simplex ``s`` of ``S_x``."""
        st = self.stages[x]
        h = s[0]
        m = st.matchA.comps[k][a]
        e = st.R.evaluate(k, s, (m, h))
        return st.E.apply(k, e, (a, (m, h)))[0]

    def apply(self, y, k: int, a, r):
        """Universal family: the image of ``a`` in ``A_y`` under the map named by the k-simplex r."""
        return self.top(y, k, r[self.pos[y]], a)

    def fibre_A(self, y, j, x0) -> tuple:
        key = (y, j)
        if key not in self._fibres:
            idx: dict = {}
            c = self.source.comps[y]
            for a in c.obj.levels[j]:
                idx.setdefault(c.to_gamma.comps[j][a], []).append(a)
            self._fibres[key] = idx
        return tuple(self._fibres[key].get(x0, ()))

    def _signature(self, m: int, point: Callable, value: Callable) -> tuple:
        out = []
        for y in self.order:
            for j in range(self.carrier.trunc + 1):
                for alpha in ps.monotone_maps(j, m):
                    for a in self.fibre_A(y, j, point(j, alpha)):
                        out.append(value(y, j, alpha, a))
        return tuple(out)

    def signature(self, m: int, r) -> tuple:
        """The diagram map named by the m-simplex r, serialized over every face and degeneracy."""
        C, X = self.carrier, self.source.gamma
        x0 = self.leg_first.comps[m][r]
        return self._signature(m, lambda j, al: X.act(x0, m, al),
                               lambda y, j, al, a: self.apply(y, j, a, C.act(r, m, al)))

    def _lookup(self, m: int):
        if m not in self._index:
            idx = {}
            for r in self.carrier.levels[m]:
                idx[(self.leg.comps[m][r], self.signature(m, r))] = r
            self._index[m] = idx
        return self._index[m]

    def classify(self, Z: Presheaf, p: PMap, q: PMap, family: Callable) -> PMap:
        """The map ``Z -> C`` over ``(p, q)`` naming ``family``.

        ``family(y, j, a, z)`` is the image of ``(a, z)`` in ``B_y`` for a
        j-simplex z of Z and a in ``A_y`` over ``p(z)``.
        """
        if p.src != Z or q.src != Z or p.tgt != self.source.gamma or q.tgt != self.target.gamma:
            raise TargetMismatch("classifying legs must go from Z to the two base objects")
        comps = []
        for m, lv in enumerate(Z.levels):
            idx = self._lookup(m)
            comp = {}
            for z in lv:
                sig = self._signature(m, lambda j, al: p.comps[j][Z.act(z, m, al)],
                                      lambda y, j, al, a: family(y, j, a, Z.act(z, m, al)))
                key = ((p.comps[m][z], q.comps[m][z]), sig)
                if key not in idx:
                    raise UniversalPropertyViolation(
                        f"no carrier simplex names the family at {z!r} (level {m})", level=m, element=z)
                comp[z] = idx[key]
            comps.append(comp)
        return PMap(Z, self.carrier, comps, check=False)

    def classify_map(self, phi: DiagramMap, p: PMap, q: PMap) -> PMap:
        """Name a diagram map ``p*A -> q*B`` (components on pairs ``(a, z)``)."""
        return self.classify(p.src, p, q, lambda y, j, a, z: phi.comps[y].comps[j][(a, z)][0])

    def unclassify(self, k: PMap, p: Optional[PMap] = None, q: Optional[PMap] = None) -> DiagramMap:
        """The diagram map ``p*A -> q*B`` named by ``k: Z -> C``."""
        p = p or ps.compose(self.leg_first, k)
        q = q or ps.compose(self.leg_second, k)
        src, tgt = reindex(self.source, p), reindex(self.target, q)
        comps = {}
        for y in self.order:
            comps[y] = ps.from_function(
                src.comps[y].obj, tgt.comps[y].obj,
                lambda j, az, y=y: (self.apply(y, j, az[0], k.comps[j][az[1]]), az[1]))
        return DiagramMap(src, tgt, comps)

    # -- reporting ---------------------------------------------------------

    def witness(self, r) -> tuple:
        """Vertex r as ``(x0, y0, ((y, ((a, b), ...)), ...))``."""
        x0, y0 = self.leg.comps[0][r]
        per = []
        for y in self.order:
            pairs = tuple((a, self.apply(y, 0, a, r)) for a in self.fibre_A(y, 0, x0))
            per.append((y, ps.sorted_labels(pairs)))
        return (x0, y0, tuple(per))

    def witnesses(self) -> list:
        return [self.witness(r) for r in self.carrier.levels[0]]

    def fibre(self, x0, y0, m: int = 0) -> tuple:
        return tuple(r for r in self.carrier.levels[m] if self.leg.comps[m][r] == (x0, y0))

    def per_object(self) -> dict:
        """Sizes of the recursion stages, for reports."""
        out = {}
        for x in self.order:
            st = self.stages[x]
            out[x] = {"strict": st.H.obj.sizes(), "lax": st.R.obj.sizes(),
                      "matching_source": st.MA.carrier.sizes(), "matching_target": st.MB.carrier.sizes()}
        return out

    def sizes(self) -> tuple:
        return self.carrier.sizes()


class HomEngine:
    """Builds and caches hom-objects and matching maps.

    Caches are keyed on object identity; the keyed objects are held so ids
    stay unique.  ``size_bound`` caps the number of simplices of any
    intermediate object.
    """

    def __init__(self, size_bound: Optional[int] = None):
        self.size_bound = size_bound
        self._homs: dict = {}
        self._matching: dict = {}
        self._keep: list = []

    def _charge(self, obj: Presheaf):
        if self.size_bound is not None and len(obj) > self.size_bound:
            raise SizeBoundExceeded(f"intermediate object with {len(obj)} simplices exceeds bound {self.size_bound}",
                                    size=len(obj), bound=self.size_bound)

    def hom(self, J: InvCat, A: Diagram, B: Diagram) -> HomObject:
        if A.invcat is not J:
            A = A.restrict(J) if set(J.objects) <= set(A.invcat.objects) else A
        if B.invcat is not J:
            B = B.restrict(J) if set(J.objects) <= set(B.invcat.objects) else B
        key = (id(J), id(A), id(B))
        if key not in self._homs:
            self._keep.append((J, A, B))
            self._homs[key] = HomObject(self, J, A, B)
        return self._homs[key]

    def matching_map(self, A: Diagram, x) -> PMap:
        key = (id(A), x)
        if key not in self._matching:
            self._keep.append(A)
            self._matching[key] = matching_map(A, x, self)
        return self._matching[key]


def hom_object(A: Diagram, B: Diagram, engine: Optional[HomEngine] = None) -> HomObject:
    if A.invcat is not B.invcat and not A.invcat.same(B.invcat):
        raise TargetMismatch("the two diagrams live on different inverse categories")
    engine = engine or HomEngine()
    return engine.hom(A.invcat, A, B)


def lax_slice_homs(A: Diagram, B: Diagram, engine: Optional[HomEngine] = None) -> dict:
    """Hom-objects of the restrictions to each lax slice ``x/I``."""
    engine = engine or HomEngine()
    I = A.invcat
    return {x: engine.hom(I.slice("lax", x), A, B) for x in I.order()}


def glue_witnesses(parts: dict) -> set:
    """Compatible tuples of lax-slice witnesses, merged into whole-diagram witnesses.

    Two slices are compatible when they agree on the base points and on every
    shared object.
    """
    names = list(parts)
    tables = {x: [(w[0], w[1], dict(w[2])) for w in parts[x].witnesses()] for x in names}
    result = set()

    def go(i, x0y0, merged):
        if i == len(names):
            full = tuple((y, merged[y]) for y in sorted(merged, key=lambda t: ps.sort_key(t)))
            result.add((x0y0[0], x0y0[1], full))
            return
        for (x0, y0, per) in tables[names[i]]:
            if x0y0 is not None and (x0, y0) != x0y0:
                continue
            if any(y in merged and merged[y] != v for y, v in per.items()):
                continue
            nxt = dict(merged)
            nxt.update(per)
            go(i + 1, (x0, y0), nxt)

    go(0, None, {})
    return result


def check_lax_decomposition(A: Diagram, B: Diagram, engine: Optional[HomEngine] = None) -> dict:
    """Compare the hom-object with the limit of the lax-slice hom-objects, by witness sets."""
    engine = engine or HomEngine()
    H = hom_object(A, B, engine)
    whole = {(w[0], w[1], tuple(sorted(w[2], key=lambda t: ps.sort_key(t[0])))) for w in H.witnesses()}
    glued = glue_witnesses(lax_slice_homs(A, B, engine)) if A.invcat.objects else None
    if glued is None:
        glued = whole
    return {"ok": whole == glued, "hom": len(whole), "limit": len(glued),
            "only_hom": len(whole - glued), "only_limit": len(glued - whole)}
