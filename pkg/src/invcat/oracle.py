"""Brute-force enumeration of diagram maps, used to check hom-objects in finite sets."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .base import presheaf as ps
from .base.presheaf import PMap, Presheaf
from .diagram import Diagram, DiagramMap, reindex, reindex_map
from .errors import InstanceMismatch, SizeBoundExceeded, UniversalPropertyViolation
from .hom import HomEngine, HomObject, hom_object

DEFAULT_BOUND = 1_000_000


def _require_sets(*objs):
    for o in objs:
        if o.trunc != 0:
            raise InstanceMismatch("the enumeration oracle only runs on finite sets")


def enumerate_maps(A: Diagram, B: Diagram, bound: int = DEFAULT_BOUND) -> list:
    """All diagram maps ``A -> B`` over the common base object, as component dicts.

    Components are chosen object by object in topological order; each element
    is constrained only by its own legs and by components already chosen
    below it, so the candidates factor elementwise.
    """
    _require_sets(A.gamma, B.gamma)
    if A.gamma != B.gamma:
        raise InstanceMismatch("maps are only enumerated between diagrams over the same base")
    I = A.invcat
    order = I.order()
    results = []

    def candidates(x, a, chosen):
        ca, cb = A.comps[x], B.comps[x]
        out = []
        for b in cb.obj.levels[0]:
            if cb.to_gamma.at0(b) != ca.to_gamma.at0(a) or cb.to_space.at0(b) != ca.to_space.at0(a):
                continue
            ok = True
            for y in I.poset.below(x):
                for f in I.homs[(x, y)].left.fibre(0, ca.to_space.at0(a)):
                    if chosen[y][A.act(x, y, 0, a, f)] != B.act(x, y, 0, b, f):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append(b)
        return out

    def go(i, chosen):
        if i == len(order):
            results.append({y: dict(v) for y, v in chosen.items()})
            if len(results) > bound:
                raise SizeBoundExceeded(f"more than {bound} diagram maps", bound=bound)
            return
        x = order[i]
        elems = A.comps[x].obj.levels[0]
        options = [candidates(x, a, chosen) for a in elems]
        for choice in itertools.product(*options):
            chosen[x] = dict(zip(elems, choice))
            go(i + 1, chosen)
        chosen.pop(x, None)

    go(0, {})
    return results


def map_key(comps: dict) -> tuple:
    """Canonical serialization of a family of component functions."""
    return tuple((y, ps.sorted_labels(comps[y].items())) for y in sorted(comps, key=ps.sort_key))


def oracle_enumerate(A: Diagram, B: Diagram, Z: Presheaf, p: PMap, q: PMap, bound: int = DEFAULT_BOUND) -> set:
    """Keys of all diagram maps ``p*A -> q*B``."""
    _require_sets(Z)
    return {map_key(c) for c in enumerate_maps(reindex(A, p), reindex(B, q), bound)}


def fibre_oracle(A: Diagram, B: Diagram, x0, y0, bound: int = DEFAULT_BOUND) -> set:
    """Maps between the fibres over single points, serialized like :meth:`HomObject.witness`."""
    one = ps.finset(["z"])
    p = ps.finmap(one, A.gamma, {"z": x0})
    q = ps.finmap(one, B.gamma, {"z": y0})
    out = set()
    for c in enumerate_maps(reindex(A, p), reindex(B, q), bound):
        per = tuple((y, ps.sorted_labels((az[0], bz[0]) for az, bz in c[y].items())) for y in A.invcat.order())
        out.add((x0, y0, per))
    return out


# -- universal property ----------------------------------------------------

class CorruptedHom:
    """A hom-object with some carrier elements removed, for mutation tests."""

    def __init__(self, hom: HomObject, drop):
        self.hom = hom
        self.drop = set(drop)
        self.source, self.target, self.order = hom.source, hom.target, hom.order

    def fibre(self, x0, y0, m=0):
        return tuple(r for r in self.hom.fibre(x0, y0, m) if r not in self.drop)

    def witness(self, r):
        return self.hom.witness(r)

    def apply(self, y, k, a, r):
        return self.hom.apply(y, k, a, r)

    @property
    def carrier_elements(self):
        return [r for r in self.hom.carrier.levels[0] if r not in self.drop]


@dataclass
class UPReport:
    ok: bool = True
    checked_sets: int = 0
    checked_pairs: int = 0
    checked_maps: int = 0
    naturality_squares: int = 0
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def fail(self, **witness):
        self.ok = False
        if len(self.violations) < 5:
            self.violations.append(witness)

    def to_json(self):
        from .errors import _jsonable
        return {"ok": self.ok, "sets": self.checked_sets, "pairs": self.checked_pairs, "maps": self.checked_maps,
                "naturality_squares": self.naturality_squares, "violations": _jsonable(self.violations)}


def _all_maps(src: Presheaf, tgt: Presheaf):
    s, t = src.levels[0], tgt.levels[0]
    for img in itertools.product(t, repeat=len(s)):
        yield ps.finmap(src, tgt, dict(zip(s, img)))


def _named_key(H, A: Diagram, choice: dict) -> tuple:
    """Key of the diagram map ``p*A -> q*B`` named by ``z |-> r_z``."""
    comps = {}
    for y in A.invcat.objects:
        c = A.comps[y]
        d = {}
        for z, r in choice.items():
            x0 = r_x0(H, r)
            for a in c.obj.levels[0]:
                if c.to_gamma.at0(a) == x0:
                    d[(a, z)] = (H.apply(y, 0, a, r), z)
        comps[y] = d
    return map_key(comps)


def r_x0(H, r):
    hom = H.hom if isinstance(H, CorruptedHom) else H
    return hom.leg.comps[0][r][0]


def verify_universal_property(A: Diagram, B: Diagram, hom=None, max_z: int = 3, naturality: bool = True,
                              max_maps: int = 400, engine: Optional[HomEngine] = None,
                              raise_on_failure: bool = False) -> UPReport:
    """Compare maps ``Z -> [A, B]`` with enumerated diagram maps, for all sets Z up to ``max_z``.

    For each Z and each ``(p, q)``, the maps into the carrier over ``(p, q)``
    are sent to the diagram maps they name; the check asks that this is a
    bijection onto the oracle's set.  At most ``max_maps`` maps are examined
    per ``(p, q)`` when the sets are too large to compare wholesale, after an
    exact count comparison.  Naturality is checked by reindexing along every
    map ``Z' -> Z`` with ``|Z'| <= |Z|``.
    """
    _require_sets(A.gamma, B.gamma)
    H = hom if hom is not None else hom_object(A, B, engine)
    X, Y = A.gamma, B.gamma
    report = UPReport()
    fibres = {(x0, y0): H.fibre(x0, y0) for x0 in X.levels[0] for y0 in Y.levels[0]}

    # single points first: the fibre witnesses themselves must match the oracle
    for (x0, y0), rs in fibres.items():
        got = [H.witness(r) for r in rs]
        want = fibre_oracle(A, B, x0, y0)
        if len(set(got)) != len(got):
            report.fail(kind="non-injective", point=[x0, y0])
        missing = want - set(got)
        extra = set(got) - want
        if missing or extra:
            report.fail(kind="fibre-mismatch", point=[x0, y0],
                        missing=sorted(missing, key=ps.sort_key)[:1], extra=sorted(extra, key=ps.sort_key)[:1])

    for size in range(max_z + 1):
        Z = ps.finset(range(size))
        report.checked_sets += 1
        for p in _all_maps(Z, X):
            for q in _all_maps(Z, Y):
                report.checked_pairs += 1
                options = [fibres[(p.at0(z), q.at0(z))] for z in Z.levels[0]]
                n_maps = 1
                for o in options:
                    n_maps *= len(o)
                want = oracle_enumerate(A, B, Z, p, q)
                if n_maps != len(want):
                    report.fail(kind="count", size=size, p=p.comps[0], q=q.comps[0], carrier=n_maps, oracle=len(want))
                    continue
                seen = set()
                for i, choice in enumerate(itertools.product(*options)):
                    if i >= max_maps:
                        break
                    named = dict(zip(Z.levels[0], choice))
                    key = _named_key(H, A, named)
                    report.checked_maps += 1
                    if key not in want or key in seen:
                        report.fail(kind="not-a-bijection", size=size, p=p.comps[0], q=q.comps[0], map=named)
                    seen.add(key)
                    if naturality and i < 3 and isinstance(H, HomObject):
                        _check_naturality(H, A, B, Z, p, q, named, report)
                # converse direction on the oracle side: each oracle map is named by some carrier map
                if isinstance(H, HomObject):
                    for j, phi in enumerate(sorted(want)):
                        if j >= 3:
                            break
                        _check_classify(H, A, B, Z, p, q, phi, report)
    if raise_on_failure and not report.ok:
        raise UniversalPropertyViolation("hom-object fails its universal property", witness=report.violations[0])
    return report


def _phi_from_key(A, B, Z, p, q, key) -> DiagramMap:
    src, tgt = reindex(A, p), reindex(B, q)
    comps = {y: ps.PMap(src.comps[y].obj, tgt.comps[y].obj, [dict(pairs)], check=False) for y, pairs in key}
    return DiagramMap(src, tgt, comps)


def _check_classify(H: HomObject, A, B, Z, p, q, key, report):
    phi = _phi_from_key(A, B, Z, p, q, key)
    try:
        k = H.classify_map(phi, p, q)
    except UniversalPropertyViolation:
        report.fail(kind="unclassifiable", map=key)
        return
    back = H.unclassify(k, p, q)
    if map_key({y: back.comps[y].comps[0] for y in back.comps}) != key:
        report.fail(kind="round-trip", map=key)


def _check_naturality(H: HomObject, A, B, Z, p, q, named, report):
    k = ps.finmap(Z, H.carrier, named)
    phi = H.unclassify(k, p, q)
    for size in range(len(Z.levels[0]) + 1):
        Z2 = ps.finset(range(size))
        for t in _all_maps(Z2, Z):
            report.naturality_squares += 1
            pt, qt = ps.compose(p, t), ps.compose(q, t)
            # reindex phi along t, identified with a map (p t)*A -> (q t)*B
            moved = reindex_map(phi, t)
            via_reindex = {y: {(az[0][0], az[1]): (bz[0][0], bz[1]) for az, bz in moved.comps[y].comps[0].items()}
                           for y in moved.comps}
            direct = H.unclassify(ps.compose(k, t), pt, qt)
            via_carrier = {y: direct.comps[y].comps[0] for y in direct.comps}
            if map_key(via_reindex) != map_key(via_carrier):
                report.fail(kind="naturality", t=t.comps[0], map=named)
