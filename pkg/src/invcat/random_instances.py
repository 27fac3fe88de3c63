"""Seeded random finite-set instances: inverse categories, diagrams and diagram maps.

Diagrams are generated bottom-up: an element of a new component is a choice
of action values satisfying every associativity constraint, found by a small
backtracking search that does not use the hom-object engine.
"""
from __future__ import annotations

import random
from typing import Optional

from . import wf
from .base import presheaf as ps
from .base.instances import FinSetBase
from .diagram import Component, Diagram, DiagramMap, validate_diagram, validate_map
from .inverse import InvCat, Span, collage_extend, validate

LABELS = "abcdefgh"


def random_poset(rng: random.Random, size: int, density: float = 0.5) -> wf.WfPoset:
    """A random poset on the first ``size`` letters; pairs only go from earlier to later labels."""
    elems = list(LABELS[:size])
    perm = elems[:]
    rng.shuffle(perm)
    pairs = [(perm[i], perm[j]) for i in range(size) for j in range(i + 1, size) if rng.random() < density]
    return wf.check_well_founded(pairs, elements=elems)


def extension_solutions(I: InvCat, comps: dict, acts: dict, x, gpt, spt, over=None) -> list:
    """All action-value assignments for a new element of the component at x.

    ``comps[y]`` lists ``(label, gamma_point, space_point)`` for objects below
    x and ``acts[(y, z)]`` maps ``(label, g)`` to a label.  With ``over =
    (target_diagram, lower_components, b)`` the values are also required to
    lie over the actions of ``b`` in the target diagram.
    """
    below = I.poset.below(x)
    variables = []
    domains = {}
    for y in below:
        for f in I.homs[(x, y)].left.fibre(0, spt):
            r = I.homs[(x, y)].right.at0(f)
            dom = [lab for (lab, g, s) in comps[y] if g == gpt and s == r]
            if over is not None:
                T, phi, b = over
                want = T.act(x, y, 0, b, f)
                dom = [lab for lab in dom if phi[y][lab] == want]
            variables.append((y, f))
            domains[(y, f)] = dom
    index = {v: i for i, v in enumerate(variables)}
    # constraints: value(z, f.g) == act_yz(value(y, f), g)
    checks = [[] for _ in variables]
    for (y, f) in variables:
        for z in I.poset.below(y):
            for g in I.homs[(y, z)].left.fibre(0, I.homs[(x, y)].right.at0(f)):
                h = I.comp[(x, y, z)].at0((f, g))
                i, j = index[(y, f)], index[(z, h)]
                checks[max(i, j)].append(((y, f), (z, h), (y, z), g))
    out = []
    value: dict = {}

    def go(i):
        if i == len(variables):
            out.append(dict(value))
            return
        v = variables[i]
        for lab in domains[v]:
            value[v] = lab
            if all(value[zh] == acts[yz][(value[yf], g)] for yf, zh, yz, g in checks[i]):
                go(i + 1)
            del value[v]

    go(0)
    return out


def _build(I: InvCat, gamma: ps.Presheaf, comps: dict, acts: dict, name=None) -> Diagram:
    out = {}
    for x in I.objects:
        labels = [lab for lab, _, _ in comps[x]]
        obj = ps.finset(labels)
        out[x] = Component(obj, ps.finmap(obj, gamma, {lab: g for lab, g, _ in comps[x]}),
                           ps.finmap(obj, I.spaces[x], {lab: s for lab, _, s in comps[x]}))
    D = Diagram(I, gamma, out, {}, name)
    for x in I.objects:
        for y in I.poset.below(x):
            dom = D.action_domain(x, y)
            D.actions[(x, y)] = ps.PMap(dom.obj, out[y].obj, [{e: acts[(x, y)][e] for e in dom.obj.levels[0]}],
                                        check=False)
    return validate_diagram(D)


def random_diagram(rng: random.Random, I: InvCat, gamma: ps.Presheaf, max_size: int = 3,
                   fibrant: bool = False, over=None, name=None):
    """A random I-diagram over gamma.

    ``fibrant`` makes every comparison map onto the matching data surjective
    (which may exceed ``max_size``).  ``over = target_diagram`` additionally
    produces a diagram map into the target, Reedy fibrant in the same sense
    when ``fibrant`` is set; then ``(diagram, map)`` is returned.
    """
    comps: dict = {}
    acts: dict = {}
    phi: dict = {}
    for x in I.order():
        elems = []
        # candidate (gamma point, space point[, target element]) slots
        if over is None:
            slots = [(g, s, None) for g in gamma.levels[0] for s in I.spaces[x].levels[0]]
        else:
            c = over.comps[x]
            slots = [(c.to_gamma.at0(b), c.to_space.at0(b), b) for b in c.obj.levels[0]]
        sols = {}
        for slot in slots:
            g, s, b = slot
            sols[slot] = extension_solutions(I, comps, acts, x, g, s,
                                             over=None if b is None else (over, phi, b))
        chosen = []
        if fibrant:
            for slot in slots:
                chosen.extend((slot, sol) for sol in sols[slot])
        k = rng.randint(1, max_size) if rng.random() < 0.9 else 0
        pool = [(slot, sol) for slot in slots for sol in sols[slot]]
        while pool and len(chosen) < k:
            chosen.append(rng.choice(pool))
        rng.shuffle(chosen)
        comps[x] = []
        phi[x] = {}
        for i, (slot, sol) in enumerate(chosen):
            lab = i
            comps[x].append((lab, slot[0], slot[1]))
            phi[x][lab] = slot[2]
            for (y, f), v in sol.items():
                acts.setdefault((x, y), {})[(lab, f)] = v
        for y in I.poset.below(x):
            acts.setdefault((x, y), {})
    D = _build(I, gamma, comps, acts, name)
    if over is None:
        return D
    f = DiagramMap(D, over, {x: ps.finmap(D.comps[x].obj, over.comps[x].obj, phi[x]) for x in I.objects})
    return D, validate_map(f)


def random_invcat(rng: random.Random, n_objects: int, max_space: int = 2, max_hom: int = 2,
                  fibrant: bool = False, density: float = 0.6) -> InvCat:
    """Random inverse category in finite sets, grown one object at a time by collage."""
    base = FinSetBase()
    poset = random_poset(rng, n_objects, density)
    order = poset.topological_order()
    I = InvCat(base, wf.check_well_founded([], elements=[]), {}, {}, {})
    for x in order:
        lo = 1 if fibrant or rng.random() < 0.9 else 0
        space = ps.finset(range(rng.randint(lo, max(lo, max_space))))
        sub = I.full_subcategory(poset.below(x))
        prof = random_diagram(rng, sub, space, max_hom, fibrant=fibrant)
        J = _collage_over(I, sub, x, space, prof)
        I = J
    return validate(base, poset, I.spaces, I.homs, I.comp)


def _collage_over(I: InvCat, sub: InvCat, x, space, prof: Diagram) -> InvCat:
    """Adjoin x above exactly the objects of ``sub`` (a down-closed part of I)."""
    spaces = dict(I.spaces)
    spaces[x] = space
    homs = dict(I.homs)
    comp = dict(I.comp)
    for y in sub.objects:
        c = prof.comps[y]
        homs[(x, y)] = Span(c.obj, c.to_gamma, c.to_space)
    for (y, z), act in prof.actions.items():
        comp[(x, y, z)] = act
    pairs = list(I.poset.lt) + [(y, x) for y in sub.objects]
    poset = wf.check_well_founded(pairs, elements=list(I.objects) + [x])
    return validate(I.base, poset, spaces, homs, comp)


def random_set(rng: random.Random, lo: int = 1, hi: int = 2, prefix: str = "") -> ps.Presheaf:
    return ps.finset([f"{prefix}{i}" for i in range(rng.randint(lo, hi))])


def random_instance(seed: int, max_objects: int = 3, max_size: int = 3, fibrant: bool = False):
    """``(I, A, B)`` with A over X and B over Y, all sets small."""
    rng = random.Random(seed)
    I = random_invcat(rng, rng.choice([1, 2, 2, 3, 3, 3][: 2 * max_objects]), fibrant=fibrant)
    X = random_set(rng, 1, 2, "x")
    Y = random_set(rng, 1, 2, "y")
    A = random_diagram(rng, I, X, max_size, fibrant=fibrant, name="A")
    B = random_diagram(rng, I, Y, max_size, fibrant=fibrant, name="B")
    return I, A, B


def fibre_sizes(A: Diagram, B: Diagram) -> dict:
    """Number of diagram maps between the fibres over each pair of base points, by enumeration."""
    from .oracle import fibre_oracle

    return {(x0, y0): len(fibre_oracle(A, B, x0, y0))
            for x0 in A.gamma.levels[0] for y0 in B.gamma.levels[0]}


def oracle_sized_instance(seed: int, max_fibre: int = 8, max_objects: int = 3, max_size: int = 3):
    """A random instance whose hom fibres stay small enough for exhaustive checks over |Z| <= 3.

    Draws ``random_instance`` with derived seeds until every fibre has at most
    ``max_fibre`` maps; returns ``(I, A, B, seed_used)``.  Except for every
    fifth seed, instances whose hom-object is empty are skipped as well.
    """
    for attempt in range(1000):
        s = seed * 1000 + attempt
        I, A, B = random_instance(s, max_objects, max_size)
        sizes = fibre_sizes(A, B).values()
        if max(sizes, default=0) <= max_fibre and (seed % 5 == 0 or sum(sizes) > 0):
            return I, A, B, s
    raise RuntimeError(f"no small instance found from seed {seed}")


def sset_spaces(n: int) -> dict:
    """Small simplicial sets used as object spaces of random simplicial instances."""
    return {
        "point": ps.terminal(n),
        "interval": ps.representable(1, n),
        "two points": ps.boundary(1, n),
        "BC2": ps.group_nerve([0, 1], lambda a, b: (a + b) % 2, 0, n),
        "empty": ps.empty(n),
    }


def random_sset_invcat(rng: random.Random, n_objects: int, trunc: int = 2) -> InvCat:
    """A finite-set inverse category C thickened by simplicial sets S_x.

    ``I(x) = S_x`` and ``I(x, y) = C(x, y) x S_x x S_y`` with the projections
    as legs; composites compose in C and forget the middle point.
    """
    from .base.instances import SSetBase

    C = random_invcat(rng, n_objects, max_space=1, fibrant=True)
    pool = sset_spaces(trunc)
    names = list(pool)
    S = {x: pool[rng.choice(names)] for x in C.objects}
    homs = {}
    for (x, y), span in C.homs.items():
        arrows = ps.discrete(span.obj.levels[0], trunc)
        obj = ps.limit({"c": arrows, "s": S[x], "t": S[y]}, []).obj
        homs[(x, y)] = Span(obj, ps.from_function(obj, S[x], lambda m, e: e[1]),
                            ps.from_function(obj, S[y], lambda m, e: e[2]))
    comp = {}
    base = SSetBase(trunc)
    J = InvCat(base, C.poset, S, homs, {})
    for (x, y, z), c in C.comp.items():
        dom = J.comp_domain(x, y, z)
        comp[(x, y, z)] = ps.from_function(
            dom.obj, homs[(x, z)].obj,
            lambda m, fg, c=c: (c.at0((fg[0][0], fg[1][0])), fg[0][1], fg[1][2]))
    return validate(base, C.poset, S, homs, comp)
