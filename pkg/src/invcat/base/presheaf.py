"""Finite presheaves on the simplex category truncated at level n.

A finite set is the ``n = 0`` case: one level, no faces or degeneracies.
Everything in this module works uniformly for every truncation level, so
the finite-set and the simplicial instance share limits, dependent products
and the hom-object engine built on top of them.

Conventions: ``faces[(m, i)]`` is ``d_i : X_m -> X_{m-1}`` and
``degens[(m, i)]`` is ``s_i : X_m -> X_{m+1}``.  A monotone map
``[j] -> [k]`` is a non-decreasing tuple of length ``j + 1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence

from ..errors import NonCommutingDiagram, NotAMap, SimplicialIdentityError, CompositionMismatch

Label = Hashable
STAR = "*"


def sort_key(label):
    """Total order on labels: ints, then strings, then tuples (recursively)."""
    if isinstance(label, tuple):
        return (2, tuple(sort_key(x) for x in label))
    if isinstance(label, bool):
        return (0, int(label), "")
    if isinstance(label, int):
        return (0, label, "")
    return (1, 0, str(label))


def sorted_labels(labels: Iterable) -> tuple:
    return tuple(sorted(labels, key=sort_key))


# -- monotone maps ---------------------------------------------------------

@lru_cache(maxsize=None)
def monotone_maps(j: int, k: int) -> tuple:
    """All monotone maps ``[j] -> [k]``."""
    return tuple(itertools.combinations_with_replacement(range(k + 1), j + 1))


def identity_arrow(k: int) -> tuple:
    return tuple(range(k + 1))


def precompose_face(alpha: tuple, i: int) -> tuple:
    """``alpha . delta_i``: drop position i."""
    return alpha[:i] + alpha[i + 1:]


def precompose_degen(alpha: tuple, i: int) -> tuple:
    """``alpha . sigma_i``: repeat position i."""
    return alpha[: i + 1] + alpha[i:]


def postcompose_face(i: int, beta: tuple) -> tuple:
    """``delta_i . beta``."""
    return tuple(b if b < i else b + 1 for b in beta)


def postcompose_degen(i: int, beta: tuple) -> tuple:
    """``sigma_i . beta``."""
    return tuple(b if b <= i else b - 1 for b in beta)


# -- objects ---------------------------------------------------------------

class Presheaf:
    """A finite presheaf on the truncated simplex category."""

    __slots__ = ("levels", "faces", "degens", "_key", "_act", "_sets", "name")

    def __init__(self, levels: Sequence[Sequence], faces: Optional[Mapping] = None,
                 degens: Optional[Mapping] = None, check: bool = True, name: Optional[str] = None):
        self.levels = tuple(tuple(lv) for lv in levels)
        if not self.levels:
            raise SimplicialIdentityError("a presheaf needs at least level 0")
        self.faces = {k: dict(v) for k, v in (faces or {}).items()}
        self.degens = {k: dict(v) for k, v in (degens or {}).items()}
        self._key = None
        self._act = {}
        self._sets = [frozenset(lv) for lv in self.levels]
        self.name = name
        if check:
            self.validate()

    @property
    def trunc(self) -> int:
        return len(self.levels) - 1

    def sizes(self) -> tuple:
        return tuple(len(lv) for lv in self.levels)

    def __len__(self):
        return sum(self.sizes())

    def contains(self, m: int, e) -> bool:
        return e in self._sets[m]

    def face(self, m: int, i: int, e):
        return self.faces[(m, i)][e]

    def degen(self, m: int, i: int, e):
        return self.degens[(m, i)][e]

    def act(self, e, k: int, alpha: tuple):
        """Restriction of the k-simplex ``e`` along the monotone map ``alpha``."""
        if alpha == identity_arrow(k):
            return e
        memo = (e, k, alpha)
        hit = self._act.get(memo)
        if hit is not None:
            return hit
        image = set(alpha)
        result = None
        for i in range(k + 1):
            if i not in image:
                alpha2 = tuple(a if a < i else a - 1 for a in alpha)
                result = self.act(self.face(k, i, e), k - 1, alpha2)
                break
        else:
            j = len(alpha) - 1
            for t in range(j):
                if alpha[t] == alpha[t + 1]:
                    alpha2 = alpha[: t + 1] + alpha[t + 2:]
                    result = self.degen(j - 1, t, self.act(e, k, alpha2))
                    break
        self._act[memo] = result
        return result

    def key(self):
        if self._key is None:
            self._key = (
                tuple(frozenset(lv) for lv in self.levels),
                frozenset((k, frozenset(v.items())) for k, v in self.faces.items()),
                frozenset((k, frozenset(v.items())) for k, v in self.degens.items()),
            )
        return self._key

    def __eq__(self, other):
        return isinstance(other, Presheaf) and (self is other or self.key() == other.key())

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        tag = f"{self.name} " if self.name else ""
        if self.trunc == 0:
            return f"<{tag}set {list(self.levels[0])!r}>"
        return f"<{tag}presheaf sizes={self.sizes()}>"

    # -- validation --------------------------------------------------------

    def validate(self):
        n = self.trunc
        for m, lv in enumerate(self.levels):
            if len(set(lv)) != len(lv):
                raise SimplicialIdentityError(f"duplicate simplex at level {m}", level=m)
        for m in range(1, n + 1):
            for i in range(m + 1):
                self._check_fn(("d", m, i), self.faces.get((m, i)), m, m - 1)
        for m in range(n):
            for i in range(m + 1):
                self._check_fn(("s", m, i), self.degens.get((m, i)), m, m + 1)
        extra = [k for k in self.faces if not (1 <= k[0] <= n and 0 <= k[1] <= k[0])]
        extra += [k for k in self.degens if not (0 <= k[0] < n and 0 <= k[1] <= k[0])]
        if extra:
            raise SimplicialIdentityError(f"structure maps outside the truncation: {extra}", maps=extra)
        self._check_identities()

    def _check_fn(self, tag, fn, src, tgt):
        if fn is None:
            raise SimplicialIdentityError(f"missing structure map {tag}", map=tag)
        for e in self.levels[src]:
            if e not in fn:
                raise SimplicialIdentityError(f"{tag} undefined on {e!r}", map=tag, element=e)
            if fn[e] not in self._sets[tgt]:
                raise SimplicialIdentityError(f"{tag} sends {e!r} outside level {tgt}", map=tag, element=e)

    def _check_identities(self):
        n = self.trunc
        d, s = self.face, self.degen

        def fail(name, m, e):
            raise SimplicialIdentityError(f"simplicial identity {name} fails at level {m} on {e!r}",
                                          identity=name, level=m, element=e)

        for m in range(2, n + 1):
            for e in self.levels[m]:
                for j in range(m + 1):
                    for i in range(j):
                        if d(m - 1, i, d(m, j, e)) != d(m - 1, j - 1, d(m, i, e)):
                            fail(f"d{i} d{j} = d{j - 1} d{i}", m, e)
        for m in range(n):
            for e in self.levels[m]:
                for j in range(m + 1):
                    se = s(m, j, e)
                    for i in range(m + 2):
                        lhs = d(m + 1, i, se)
                        if i < j:
                            rhs = s(m - 1, j - 1, d(m, i, e))
                        elif i in (j, j + 1):
                            rhs = e
                        else:
                            rhs = s(m - 1, j, d(m, i - 1, e))
                        if lhs != rhs:
                            fail(f"d{i} s{j}", m, e)
                    if m + 1 < n:
                        for i in range(j + 1):
                            if s(m + 1, i, se) != s(m + 1, j + 1, s(m, i, e)):
                                fail(f"s{i} s{j} = s{j + 1} s{i}", m, e)


# -- maps ------------------------------------------------------------------

class PMap:
    """A natural transformation between presheaves of the same truncation."""

    __slots__ = ("src", "tgt", "comps", "_key")

    def __init__(self, src: Presheaf, tgt: Presheaf, comps: Sequence[Mapping], check: bool = True):
        self.src = src
        self.tgt = tgt
        self.comps = tuple(dict(c) for c in comps)
        self._key = None
        if check:
            self.validate()

    def __call__(self, m: int, e):
        return self.comps[m][e]

    def at0(self, e):
        return self.comps[0][e]

    def validate(self):
        src, tgt = self.src, self.tgt
        if src.trunc != tgt.trunc or len(self.comps) != src.trunc + 1:
            raise NotAMap("source, target and components disagree on truncation level")
        for m, comp in enumerate(self.comps):
            for e in src.levels[m]:
                if e not in comp:
                    raise NotAMap(f"map undefined on {e!r} at level {m}", level=m, element=e)
                if not tgt.contains(m, comp[e]):
                    raise NotAMap(f"map sends {e!r} to {comp[e]!r}, not in the target", level=m, element=e)
        for (m, i), fn in src.faces.items():
            for e in src.levels[m]:
                if self.comps[m - 1][fn[e]] != tgt.face(m, i, self.comps[m][e]):
                    raise NotAMap(f"map does not commute with d{i} at level {m}", level=m, element=e)
        for (m, i), fn in src.degens.items():
            for e in src.levels[m]:
                if self.comps[m + 1][fn[e]] != tgt.degen(m, i, self.comps[m][e]):
                    raise NotAMap(f"map does not commute with s{i} at level {m}", level=m, element=e)

    def key(self):
        if self._key is None:
            self._key = (self.src.key(), self.tgt.key(),
                         tuple(frozenset(c.items()) for c in self.comps))
        return self._key

    def __eq__(self, other):
        return isinstance(other, PMap) and (self is other or self.key() == other.key())

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"<map {self.src!r} -> {self.tgt!r}>"

    def fibre(self, m: int, target_elem) -> tuple:
        return tuple(e for e in self.src.levels[m] if self.comps[m][e] == target_elem)

    def is_surjective(self) -> bool:
        return all(set(c.values()) >= set(lv) for c, lv in zip(self.comps, self.tgt.levels))

    def is_injective(self) -> bool:
        return all(len(set(c.values())) == len(c) for c in self.comps)

    def is_iso(self) -> bool:
        return self.is_surjective() and self.is_injective()

    def first_difference(self, other: "PMap"):
        """Return ``(level, element, mine, theirs)`` for the first disagreement, or None."""
        for m, lv in enumerate(self.src.levels):
            for e in lv:
                if self.comps[m][e] != other.comps[m][e]:
                    return (m, e, self.comps[m][e], other.comps[m][e])
        return None


def from_function(src: Presheaf, tgt: Presheaf, fn: Callable, check: bool = False) -> PMap:
    """Build a map from ``fn(level, element)``."""
    return PMap(src, tgt, [{e: fn(m, e) for e in lv} for m, lv in enumerate(src.levels)], check=check)


def identity(obj: Presheaf) -> PMap:
    return PMap(obj, obj, [{e: e for e in lv} for lv in obj.levels], check=False)


def compose(g: PMap, f: PMap) -> PMap:
    """``g . f`` (apply f first)."""
    if f.tgt != g.src:
        raise CompositionMismatch("cannot compose: codomain of the first map is not the domain of the second")
    return PMap(f.src, g.tgt, [{e: gc[fc[e]] for e in fc} for fc, gc in zip(f.comps, g.comps)], check=False)


def require_equal(f: PMap, g: PMap, what: str, exc=NonCommutingDiagram, **context):
    diff = f.first_difference(g)
    if diff is not None:
        m, e, a, b = diff
        raise exc(f"{what}: disagreement at level {m} on {e!r} ({a!r} vs {b!r})",
                  condition=what, level=m, element=e, left=a, right=b, **context)


# -- basic objects ---------------------------------------------------------

def discrete(labels: Iterable, n: int = 0, name: Optional[str] = None) -> Presheaf:
    """The constant presheaf on a finite set (every simplex degenerate)."""
    labels = tuple(labels)
    faces = {(m, i): {e: e for e in labels} for m in range(1, n + 1) for i in range(m + 1)}
    degens = {(m, i): {e: e for e in labels} for m in range(n) for i in range(m + 1)}
    return Presheaf([labels] * (n + 1), faces, degens, check=False, name=name)


def finset(labels: Iterable, name: Optional[str] = None) -> Presheaf:
    return discrete(labels, 0, name=name)


def finmap(src: Presheaf, tgt: Presheaf, assignment: Mapping) -> PMap:
    return PMap(src, tgt, [assignment])


def terminal(n: int = 0) -> Presheaf:
    return discrete((STAR,), n)


def empty(n: int = 0) -> Presheaf:
    return discrete((), n)


def to_terminal(obj: Presheaf) -> PMap:
    t = terminal(obj.trunc)
    return PMap(obj, t, [{e: STAR for e in lv} for lv in obj.levels], check=False)


def from_empty(obj: Presheaf) -> PMap:
    return PMap(empty(obj.trunc), obj, [{} for _ in obj.levels], check=False)


def representable(k: int, n: int) -> Presheaf:
    """The truncated standard k-simplex: level j is the monotone maps [j] -> [k]."""
    levels = [monotone_maps(j, k) for j in range(n + 1)]
    faces = {(m, i): {a: precompose_face(a, i) for a in levels[m]} for m in range(1, n + 1) for i in range(m + 1)}
    degens = {(m, i): {a: precompose_degen(a, i) for a in levels[m]} for m in range(n) for i in range(m + 1)}
    return Presheaf(levels, faces, degens, check=False, name=f"D[{k}]")


def boundary(k: int, n: int) -> Presheaf:
    """The boundary of the k-simplex: the non-surjective monotone maps into [k]."""
    D = representable(k, n)
    keep = [[a for a in lv if len(set(a)) <= k] for lv in D.levels]
    return subobject(D, keep)


def yoneda(obj: Presheaf, k: int, e) -> PMap:
    """The map ``D[k] -> obj`` classifying the k-simplex ``e``."""
    rep = representable(k, obj.trunc)
    return PMap(rep, obj, [{a: obj.act(e, k, a) for a in lv} for lv in rep.levels], check=False)


def subobject(obj: Presheaf, keep: Sequence[Iterable]) -> Presheaf:
    """Sub-presheaf on the given simplices (must be closed under faces/degeneracies)."""
    sets = [set(k) for k in keep]
    levels = [tuple(e for e in lv if e in s) for lv, s in zip(obj.levels, sets)]
    faces = {k: {e: v[e] for e in levels[k[0]]} for k, v in obj.faces.items()}
    degens = {k: {e: v[e] for e in levels[k[0]]} for k, v in obj.degens.items()}
    return Presheaf(levels, faces, degens)


def inclusion(sub: Presheaf, obj: Presheaf) -> PMap:
    return PMap(sub, obj, [{e: e for e in lv} for lv in sub.levels])


def group_nerve(elements: Sequence, mult: Callable, unit, n: int, name: Optional[str] = None) -> Presheaf:
    """Truncated nerve of a one-object groupoid: level m is m-tuples of elements."""
    elements = tuple(elements)
    levels = [tuple(itertools.product(elements, repeat=m)) for m in range(n + 1)]
    faces = {}
    for m in range(1, n + 1):
        for i in range(m + 1):
            fn = {}
            for g in levels[m]:
                if i == 0:
                    fn[g] = g[1:]
                elif i == m:
                    fn[g] = g[:-1]
                else:
                    fn[g] = g[: i - 1] + (mult(g[i - 1], g[i]),) + g[i + 1:]
            faces[(m, i)] = fn
    degens = {(m, i): {g: g[:i] + (unit,) + g[i:] for g in levels[m]} for m in range(n) for i in range(m + 1)}
    return Presheaf(levels, faces, degens, check=False, name=name)


def coproduct(parts: Sequence[tuple]) -> Presheaf:
    """Disjoint union of ``(tag, presheaf)`` pairs; simplices are ``(tag, e)``."""
    n = parts[0][1].trunc if parts else 0
    levels = [[] for _ in range(n + 1)]
    faces = {(m, i): {} for m in range(1, n + 1) for i in range(m + 1)}
    degens = {(m, i): {} for m in range(n) for i in range(m + 1)}
    for tag, obj in parts:
        for m, lv in enumerate(obj.levels):
            levels[m].extend((tag, e) for e in lv)
        for (m, i), fn in obj.faces.items():
            faces[(m, i)].update({(tag, e): (tag, v) for e, v in fn.items()})
        for (m, i), fn in obj.degens.items():
            degens[(m, i)].update({(tag, e): (tag, v) for e, v in fn.items()})
    return Presheaf(levels, faces, degens, check=False)


# -- limits ----------------------------------------------------------------

@dataclass
class Pullback:
    obj: Presheaf
    p1: PMap
    p2: PMap
    f: PMap
    g: PMap

    def pair(self, h1: PMap, h2: PMap) -> PMap:
        """The map into the pullback induced by ``h1`` and ``h2``."""
        comps = []
        for m, lv in enumerate(h1.src.levels):
            comp = {}
            for e in lv:
                a, b = h1.comps[m][e], h2.comps[m][e]
                if self.f.comps[m][a] != self.g.comps[m][b]:
                    raise NonCommutingDiagram("cone does not commute over the pullback base",
                                              level=m, element=e)
                comp[e] = (a, b)
            comps.append(comp)
        return PMap(h1.src, self.obj, comps, check=False)


def pullback(f: PMap, g: PMap) -> Pullback:
    """Canonical pullback of ``f: A -> C`` and ``g: B -> C``; simplices are pairs (a, b)."""
    if f.tgt != g.tgt:
        raise CompositionMismatch("pullback legs have different codomains")
    A, B = f.src, g.src
    n = A.trunc
    levels = []
    for m in range(n + 1):
        by_image: dict = {}
        for b in B.levels[m]:
            by_image.setdefault(g.comps[m][b], []).append(b)
        levels.append(sorted_labels((a, b) for a in A.levels[m] for b in by_image.get(f.comps[m][a], ())))
    faces = {(m, i): {(a, b): (A.face(m, i, a), B.face(m, i, b)) for (a, b) in levels[m]}
             for m in range(1, n + 1) for i in range(m + 1)}
    degens = {(m, i): {(a, b): (A.degen(m, i, a), B.degen(m, i, b)) for (a, b) in levels[m]}
              for m in range(n) for i in range(m + 1)}
    P = Presheaf(levels, faces, degens, check=False)
    p1 = PMap(P, A, [{e: e[0] for e in lv} for lv in levels], check=False)
    p2 = PMap(P, B, [{e: e[1] for e in lv} for lv in levels], check=False)
    return Pullback(P, p1, p2, f, g)


def product(A: Presheaf, B: Presheaf) -> Pullback:
    return pullback(to_terminal(A), to_terminal(B))


def product_map(f: PMap, g: PMap, target: Pullback) -> PMap:
    """``f x g`` into an existing product/pullback, from the product of the sources."""
    src = product(f.src, g.src)
    return target.pair(compose(f, src.p1), compose(g, src.p2))


@dataclass
class Limit:
    obj: Presheaf
    names: tuple
    projections: dict


def limit(objects: Mapping, arrows: Sequence[tuple]) -> Limit:
    """Limit of a finite diagram.

    ``objects`` maps names to presheaves; ``arrows`` are ``(src, tgt, map)``
    triples.  Simplices of the limit are tuples of component simplices in the
    order of ``objects``; they are listed in label order.  The empty diagram
    yields the terminal object.
    """
    names = tuple(objects)
    if not names:
        raise CompositionMismatch("use terminal() for the empty limit; a truncation level is needed")
    n = objects[names[0]].trunc
    pos = {nm: i for i, nm in enumerate(names)}
    for s, t, f in arrows:
        if f.src != objects[s] or f.tgt != objects[t]:
            raise NonCommutingDiagram(f"arrow {s}->{t} does not match the declared objects", edge=(s, t))
    # check arrows as soon as both endpoints are chosen
    checks = [[] for _ in names]
    for s, t, f in arrows:
        checks[max(pos[s], pos[t])].append((pos[s], pos[t], f))

    levels = []
    for m in range(n + 1):
        found = []

        def go(i, chosen):
            if i == len(names):
                found.append(tuple(chosen))
                return
            for e in objects[names[i]].levels[m]:
                chosen.append(e)
                if all(f.comps[m][chosen[si]] == chosen[ti] for si, ti, f in checks[i]):
                    go(i + 1, chosen)
                chosen.pop()

        go(0, [])
        levels.append(sorted_labels(found))
    faces = {(m, i): {t: tuple(objects[nm].face(m, i, c) for nm, c in zip(names, t)) for t in levels[m]}
             for m in range(1, n + 1) for i in range(m + 1)}
    degens = {(m, i): {t: tuple(objects[nm].degen(m, i, c) for nm, c in zip(names, t)) for t in levels[m]}
              for m in range(n) for i in range(m + 1)}
    L = Presheaf(levels, faces, degens, check=False)
    projections = {nm: PMap(L, objects[nm], [{t: t[k] for t in lv} for lv in levels], check=False)
                   for k, nm in enumerate(names)}
    return Limit(L, names, projections)


# -- dependent products ----------------------------------------------------

class DepProduct:
    """Dependent product ``Pi_f(g)`` of ``g: X -> Y`` along ``f: Y -> Z``.

    A k-simplex is ``(z, s)`` where ``z`` is a k-simplex of Z and ``s`` is a
    natural section of g over ``D[k] x_Z Y``, stored as a sorted tuple of
    ``((j, alpha, y), x)`` pairs.
    """

    def __init__(self, f: PMap, g: PMap):
        if g.tgt != f.src:
            raise CompositionMismatch("dependent product needs g: X -> Y and f: Y -> Z")
        self.f, self.g = f, g
        Y, Z, X = f.src, f.tgt, g.src
        n = Z.trunc
        self.n = n
        self._sections: dict = {}
        levels = []
        for k in range(n + 1):
            elems = []
            for z in Z.levels[k]:
                for s in self._enumerate(k, z):
                    label = (z, s)
                    self._sections[(k, label)] = dict(s)
                    elems.append(label)
            levels.append(sorted_labels(elems))
        faces = {}
        degens = {}
        for k in range(1, n + 1):
            for i in range(k + 1):
                faces[(k, i)] = {e: self._restrict(k, e, k - 1, lambda b, i=i: postcompose_face(i, b),
                                                   Z.face(k, i, e[0]))
                                 for e in levels[k]}
        for k in range(n):
            for i in range(k + 1):
                degens[(k, i)] = {e: self._restrict(k, e, k + 1, lambda b, i=i: postcompose_degen(i, b),
                                                    Z.degen(k, i, e[0]))
                                  for e in levels[k]}
        self.obj = Presheaf(levels, faces, degens, check=False)
        self.leg = PMap(self.obj, Z, [{e: e[0] for e in lv} for lv in levels], check=False)

    def _domain(self, k: int, z):
        """Simplices ``(j, alpha, y)`` of ``D[k] x_Z Y`` over the k-simplex z, by level."""
        Y, Z, f = self.f.src, self.f.tgt, self.f
        out = []
        for j in range(self.n + 1):
            row = []
            for alpha in monotone_maps(j, k):
                zj = Z.act(z, k, alpha)
                row.extend((j, alpha, y) for y in Y.levels[j] if f.comps[j][y] == zj)
            out.append(row)
        return out

    def _enumerate(self, k: int, z):
        X, Y, g = self.g.src, self.g.tgt, self.g
        dom = self._domain(k, z)
        fibres = [{} for _ in range(self.n + 1)]
        for j in range(self.n + 1):
            for x in X.levels[j]:
                fibres[j].setdefault(g.comps[j][x], []).append(x)
        results = []

        def level(j, assignment):
            if j > self.n:
                results.append(tuple(sorted(assignment.items(), key=lambda kv: sort_key(kv[0]))))
                return
            row = dom[j]
            options = []
            for (jj, alpha, y) in row:
                cands = fibres[j].get(y, [])
                if j > 0:
                    cands = [x for x in cands
                             if all(X.face(j, i, x) == assignment[(j - 1, precompose_face(alpha, i), Y.face(j, i, y))]
                                    for i in range(j + 1))]
                # degeneracy constraints from below
                for i in range(j):
                    # (alpha, y) = (beta . sigma_i, s_i y') iff repeated at i and y is s_i of its face
                    if alpha[i] == alpha[i + 1]:
                        beta = precompose_face(alpha, i)
                        y_low = Y.face(j, i, y)
                        if Y.degen(j - 1, i, y_low) == y:
                            forced = X.degen(j - 1, i, assignment[(j - 1, beta, y_low)])
                            cands = [x for x in cands if x == forced]
                if not cands:
                    return
                options.append(cands)
            for choice in itertools.product(*options):
                nxt = dict(assignment)
                nxt.update(zip(row, choice))
                level(j + 1, nxt)

        level(0, {})
        return results

    def _restrict(self, k, elem, k2, post, z2):
        s = self._sections[(k, elem)]
        new = []
        for key in self._domain_keys(k2, z2):
            j, beta, y = key
            new.append((key, s[(j, post(beta), y)]))
        return (z2, tuple(sorted(new, key=lambda kv: sort_key(kv[0]))))

    def _domain_keys(self, k, z):
        return [t for row in self._domain(k, z) for t in row]

    def section(self, k: int, elem) -> dict:
        return self._sections[(k, elem)]

    def evaluate(self, k: int, elem, y):
        """Counit: the value of the section ``elem`` at the k-simplex ``y`` over it."""
        return self._sections[(k, elem)][(k, identity_arrow(k), y)]

    def transpose(self, h: PMap, t: PMap, pb: Pullback) -> PMap:
        """Adjoint transpose.

        Given ``h: W -> Z`` and ``t: pb.obj -> X`` over Y, where ``pb`` is the
        pullback of ``f`` along ``h`` (simplices ``(w, y)``), return the unique
        map ``W -> Pi_f(g)`` over Z corresponding to ``t``.
        """
        W = h.src
        comps = []
        for k, lv in enumerate(W.levels):
            comp = {}
            for w in lv:
                z = h.comps[k][w]
                items = []
                for (j, alpha, y) in self._domain_keys(k, z):
                    items.append(((j, alpha, y), t.comps[j][(W.act(w, k, alpha), y)]))
                comp[w] = (z, tuple(sorted(items, key=lambda kv: sort_key(kv[0]))))
            comps.append(comp)
        return PMap(W, self.obj, comps, check=False)


def dep_product(f: PMap, g: PMap) -> DepProduct:
    return DepProduct(f, g)


class Exponential:
    """Local exponential ``v^u`` over P for ``u: A -> P`` and ``v: B -> P``.

    Realized as the dependent product along u of the projection
    ``A x_P B -> A``.
    """

    def __init__(self, u: PMap, v: PMap):
        self.u, self.v = u, v
        self.pb = pullback(u, v)
        self.pi = DepProduct(u, self.pb.p1)
        self.obj = self.pi.obj
        self.leg = self.pi.leg

    def apply(self, k: int, elem, a):
        """Evaluate the k-simplex ``elem`` (a fibrewise function) at ``a`` in A."""
        return self.pi.evaluate(k, elem, a)[1]
