"""Seeded closure checks for Reedy fibrations of finite-set diagrams.

Each ``check_*`` function draws one random instance from a seed and returns
``None`` when the property holds or a small dict describing the
counterexample.  :func:`run` sweeps a range of seeds.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .base import presheaf as ps
from .base.instances import FinSetBase
from .diagram import (
    compose_maps, is_reedy_fibrant, is_reedy_fibration, matching_induced, pullback_diagram, reindex_map,
    terminal_diagram, validate_map,
)
from .hom import HomEngine, HomObject
from .oracle import enumerate_maps
from .random_instances import random_diagram, random_invcat, random_set

SETS = FinSetBase()


def _surjective(f: ps.PMap) -> bool:
    return bool(SETS.is_fibration(f))


def _random_map(rng, src: ps.Presheaf, tgt: ps.Presheaf, onto: bool = False) -> ps.PMap:
    xs, ys = list(src.levels[0]), list(tgt.levels[0])
    assign = {}
    if onto:
        rng.shuffle(xs)
        for x, y in zip(xs, ys):
            assign[x] = y
    for x in xs:
        assign.setdefault(x, rng.choice(ys))
    return ps.finmap(src, tgt, assign)


def _invcat(rng, n=None):
    return random_invcat(rng, n or rng.randint(1, 3), fibrant=True)


# -- dependent products along towers ---------------------------------------

def postcompose_sections(pi_src: ps.DepProduct, pi_tgt: ps.DepProduct, g: ps.PMap) -> ps.PMap:
    """``Pi_k(h g) -> Pi_k(h)``: push each section forward along g."""
    comp = {}
    for e in pi_src.obj.levels[0]:
        w, s = e
        comp[e] = (w, tuple((key, g.comps[0][x]) for key, x in s))
    return ps.PMap(pi_src.obj, pi_tgt.obj, [comp])


def check_tower(seed: int):
    """``X -g-> Y -h-> Z -k-> W`` with g, k onto: ``Pi_k(hg) -> Pi_k(h)`` is onto."""
    rng = random.Random(seed)
    W = random_set(rng, 1, 2, "w")
    Z = random_set(rng, len(W.levels[0]), 3, "z")
    Y = random_set(rng, 1, 3, "y")
    X = random_set(rng, len(Y.levels[0]), 4, "x")
    g = _random_map(rng, X, Y, onto=True)
    h = _random_map(rng, Y, Z)
    k = _random_map(rng, Z, W, onto=True)
    src = ps.dep_product(k, ps.compose(h, g))
    tgt = ps.dep_product(k, h)
    induced = postcompose_sections(src, tgt, g)
    if not _surjective(induced):
        return {"sizes": (len(X), len(Y), len(Z), len(W)), "source": len(src.obj), "target": len(tgt.obj)}
    return None


# -- hom-objects -----------------------------------------------------------

def postcompose_hom(H: HomObject, H2: HomObject, g) -> ps.PMap:
    """``hom(A, B) -> hom(A, B')`` induced by a diagram map ``g: B -> B'`` over the same base."""
    k = ps.identity(H.carrier)
    p, q = H.leg_first, H.leg_second
    named = H.unclassify(k, p, q)
    pushed = compose_maps(reindex_map(g, q, source=named.target), named)
    return H2.classify_map(pushed, p, q)


def check_hom_fibration(seed: int):
    """A Reedy fibrant and ``g: B -> B'`` a Reedy fibration: the induced hom map is onto."""
    rng = random.Random(seed)
    I = _invcat(rng)
    X, Y = random_set(rng, 1, 2, "x"), random_set(rng, 1, 2, "y")
    A = random_diagram(rng, I, X, 2, fibrant=True, name="A")
    B2 = random_diagram(rng, I, Y, 2, fibrant=rng.random() < 0.5, name="B'")
    B, g = random_diagram(rng, I, Y, 2, fibrant=True, over=B2, name="B")
    eng = HomEngine()
    H, H2 = eng.hom(I, A, B), eng.hom(I, A, B2)
    induced = postcompose_hom(H, H2, g)
    if not _surjective(induced):
        return {"objects": len(I.objects), "hom": len(H.carrier), "target_hom": len(H2.carrier)}
    return None


# -- matching objects, levelwise surjectivity ------------------------------

def _fibration_pair(rng, target_fibrant: bool):
    I = _invcat(rng)
    G = random_set(rng, 1, 2, "g")
    B = random_diagram(rng, I, G, 2, fibrant=target_fibrant, name="B")
    A, f = random_diagram(rng, I, G, 2, fibrant=True, over=B, name="A")
    return I, A, B, f


def check_matching_fibration(seed: int):
    """A Reedy fibration between Reedy fibrant diagrams induces onto maps of matching objects."""
    rng = random.Random(seed)
    I, A, B, f = _fibration_pair(rng, target_fibrant=True)
    eng = HomEngine()
    for x in I.order():
        if not _surjective(matching_induced(f, x, eng)):
            return {"object": x}
    return None


def check_levelwise(seed: int):
    """A Reedy fibration is onto at every object."""
    rng = random.Random(seed)
    I, A, B, f = _fibration_pair(rng, target_fibrant=rng.random() < 0.5)
    for x in I.order():
        if not _surjective(f.comps[x]):
            return {"object": x}
    return None


# -- composites and pullbacks ----------------------------------------------

def check_composite(seed: int):
    """A composite of Reedy fibrations is a Reedy fibration."""
    rng = random.Random(seed)
    I = _invcat(rng)
    G = random_set(rng, 1, 2, "g")
    C = random_diagram(rng, I, G, 2, name="C")
    B, g = random_diagram(rng, I, G, 2, fibrant=True, over=C, name="B")
    A, f = random_diagram(rng, I, G, 2, fibrant=True, over=B, name="A")
    if not is_reedy_fibration(compose_maps(g, f)):
        return {"objects": len(I.objects)}
    return None


def check_pullback(seed: int):
    """The pullback of a Reedy fibration along any diagram map is a Reedy fibration."""
    rng = random.Random(seed)
    I = _invcat(rng)
    G = random_set(rng, 1, 2, "g")
    C = random_diagram(rng, I, G, 2, name="C")
    A, f = random_diagram(rng, I, G, 2, fibrant=True, over=C, name="A")
    B, g = random_diagram(rng, I, G, 2, over=C, name="B")
    P, p1, p2 = pullback_diagram(f, g)
    validate_map(p2)
    if not is_reedy_fibration(p2):
        return {"objects": len(I.objects), "pullback": P.sizes()}
    return None


# -- limits ----------------------------------------------------------------

def global_sections(A) -> set:
    """Keys of the sections of A, by enumeration (A over a one-point base)."""
    T = terminal_diagram(A.invcat, A.gamma)
    return {tuple((y, ps.sorted_labels(c[y].items())) for y in A.invcat.order())
            for c in enumerate_maps(T, A)}


def check_limit(seed: int):
    """A Reedy fibration between Reedy prefibrant diagrams is onto on limits."""
    rng = random.Random(seed)
    I = _invcat(rng)
    pt = ps.finset(["*"])
    B = random_diagram(rng, I, pt, 2, name="B")
    A, f = random_diagram(rng, I, pt, 2, fibrant=True, over=B, name="A")
    if not (is_reedy_fibrant(A, prefibration=True) and is_reedy_fibrant(B, prefibration=True)):
        return {"prefibrant": False}
    T = terminal_diagram(I, pt)
    eng = HomEngine()
    induced = postcompose_hom(eng.hom(I, T, A), eng.hom(I, T, B), f)
    # cross-check by brute force: every section of B lifts to one of A
    lifted = {tuple((y, ps.sorted_labels((t, f.comps[y].comps[0][a]) for t, a in comp))
                    for y, comp in sec) for sec in global_sections(A)}
    brute = lifted == global_sections(B)
    if not _surjective(induced) or not brute:
        return {"engine": _surjective(induced), "enumeration": brute}
    return None


CHECKS = {
    "tower": check_tower,
    "hom_fibration": check_hom_fibration,
    "matching_fibration": check_matching_fibration,
    "levelwise": check_levelwise,
    "composite": check_composite,
    "pullback": check_pullback,
    "limit": check_limit,
}

DEFAULT_COUNTS = {"tower": 300, "levelwise": 200}


@dataclass
class SweepReport:
    name: str
    seeds: int
    counterexamples: list = field(default_factory=list)

    def __bool__(self):
        return not self.counterexamples


def run(name: str, seeds=None, start: int = 0) -> SweepReport:
    n = seeds or DEFAULT_COUNTS.get(name, 100)
    check = CHECKS[name]
    report = SweepReport(name, n)
    for s in range(start, start + n):
        bad = check(s)
        if bad is not None:
            report.counterexamples.append({"seed": s, **bad})
    return report
