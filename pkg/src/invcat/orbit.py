"""Finite groups, subgroups up to conjugacy, orbit categories and the C_p presentation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from . import wf
from .base import presheaf as ps
from .base.instances import SSetBase
from .errors import BoundExceeded, GroupAxiomError, NotPrime
from .inverse import InvCat, Span, validate

DEFAULT_BOUND = 24


class FiniteGroup:
    """A group given by its multiplication table ``table[(a, b)] = ab``."""

    def __init__(self, elements: Sequence, table: Mapping, identity, name: str = "G", check: bool = True):
        self.elements = tuple(elements)
        self.table = dict(table)
        self.identity = identity
        self.name = name
        self._inv = None
        if check:
            self.validate()

    def __repr__(self):
        return f"<group {self.name} of order {len(self)}>"

    def __len__(self):
        return len(self.elements)

    def mul(self, a, b):
        return self.table[(a, b)]

    def inv(self, a):
        if self._inv is None:
            self._inv = {x: y for x in self.elements for y in self.elements if self.table[(x, y)] == self.identity}
        return self._inv[a]

    def validate(self):
        elems = set(self.elements)
        if len(elems) != len(self.elements):
            raise GroupAxiomError("duplicate group elements")
        for a in self.elements:
            for b in self.elements:
                if (a, b) not in self.table or self.table[(a, b)] not in elems:
                    raise GroupAxiomError(f"product {a}*{b} missing or outside the group", axiom="closure", pair=[a, b])
        if self.identity not in elems:
            raise GroupAxiomError("identity is not an element", axiom="identity")
        for a in self.elements:
            if self.table[(a, self.identity)] != a or self.table[(self.identity, a)] != a:
                raise GroupAxiomError(f"identity law fails at {a}", axiom="identity", element=a)
            if not any(self.table[(a, b)] == self.identity and self.table[(b, a)] == self.identity for b in self.elements):
                raise GroupAxiomError(f"{a} has no inverse", axiom="inverse", element=a)
        t = self.table
        for a, b, c in itertools.product(self.elements, repeat=3):
            if t[(t[(a, b)], c)] != t[(a, t[(b, c)])]:
                raise GroupAxiomError(f"associativity fails at ({a}, {b}, {c})", axiom="associativity",
                                      triple=[a, b, c])
        return self

    def conjugate(self, H: frozenset, g) -> frozenset:
        """``g^-1 H g``."""
        gi = self.inv(g)
        return frozenset(self.mul(self.mul(gi, h), g) for h in H)

    def generated(self, gens) -> frozenset:
        out = {self.identity}
        frontier = list(out)
        gens = list(gens)
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.mul(a, g)
                    if b not in out:
                        out.add(b)
                        nxt.append(b)
            frontier = nxt
        return frozenset(out)

    def to_json(self):
        return {"name": self.name, "elements": list(self.elements), "identity": self.identity,
                "table": [[self.table[(a, b)] for b in self.elements] for a in self.elements]}


def from_table(elements: Sequence, rows: Sequence[Sequence], identity=None, name: str = "G") -> FiniteGroup:
    """Group from a square table whose row a, column b entry is ab."""
    elements = list(elements)
    if len(rows) != len(elements) or any(len(r) != len(elements) for r in rows):
        raise GroupAxiomError("multiplication table must be square and match the element list")
    table = {(a, b): rows[i][j] for i, a in enumerate(elements) for j, b in enumerate(elements)}
    if identity is None:
        identity = next((e for e in elements if all(table[(e, b)] == b for b in elements)), None)
        if identity is None:
            raise GroupAxiomError("no identity element", axiom="identity")
    return FiniteGroup(elements, table, identity, name)


def _perm_group(perms, name) -> FiniteGroup:
    perms = sorted(set(perms))
    label = {p: "".join(map(str, p)) for p in perms}
    table = {(label[a], label[b]): label[tuple(a[b[i]] for i in range(len(a)))] for a in perms for b in perms}
    ident = label[tuple(range(len(perms[0])))]
    return FiniteGroup([label[p] for p in perms], table, ident, name)


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup(list(range(n)), {(a, b): (a + b) % n for a in range(n) for b in range(n)}, 0, f"C{n}")


def symmetric(n: int) -> FiniteGroup:
    if n > 4:
        raise BoundExceeded("symmetric groups are built in only up to S4", bound=4)
    return _perm_group(itertools.permutations(range(n)), f"S{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon (order 2n)."""
    if n > 6:
        raise BoundExceeded("dihedral groups are built in only up to D6", bound=6)
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    perms = {tuple(range(n))}
    frontier = list(perms)
    while frontier:
        nxt = []
        for p in frontier:
            for g in (rot, ref):
                q = tuple(p[g[i]] for i in range(n))
                if q not in perms:
                    perms.add(q)
                    nxt.append(q)
        frontier = nxt
    return _perm_group(perms, f"D{n}")


def builtin(name: str) -> FiniteGroup:
    """``C<n>``, ``S<n>`` (n <= 4), ``D<n>`` (n <= 6) or ``trivial``."""
    name = name.strip()
    if name.lower() in ("trivial", "1", "e"):
        return cyclic(1)
    kind, rest = name[0].upper(), name[1:]
    if not rest.isdigit():
        raise GroupAxiomError(f"unknown group {name!r}")
    n = int(rest)
    if kind == "C":
        return cyclic(n)
    if kind == "S":
        return symmetric(n)
    if kind == "D":
        return dihedral(n)
    raise GroupAxiomError(f"unknown group {name!r}")


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


# -- subgroups ---------------------------------------------------------------

@dataclass
class SubgroupData:
    subgroups: list
    classes: list  # lists of subgroups, each class sorted

    def class_of(self, H) -> int:
        for i, cls in enumerate(self.classes):
            if H in cls:
                return i
        raise KeyError(H)


def _sort_subgroup(H):
    return (len(H), ps.sorted_labels(H))


def subgroups(G: FiniteGroup, bound: int = DEFAULT_BOUND) -> SubgroupData:
    """All subgroups (joins of cyclic subgroups, iterated to a fixed point) and their conjugacy classes."""
    if len(G) > bound:
        raise BoundExceeded(f"group of order {len(G)} exceeds bound {bound}", order=len(G), bound=bound)
    found = {G.generated([g]) for g in G.elements}
    frontier = set(found)
    while frontier:
        new = set()
        for H in frontier:
            for K in list(found):
                J = G.generated(H | K)
                if J not in found and J not in new:
                    new.add(J)
        found |= new
        frontier = new
    subs = sorted(found, key=_sort_subgroup)
    classes, seen = [], set()
    for H in subs:
        if H in seen:
            continue
        cls = sorted({G.conjugate(H, g) for g in G.elements}, key=_sort_subgroup)
        seen.update(cls)
        classes.append(cls)
    return SubgroupData(subs, classes)


# -- orbit category ----------------------------------------------------------

class OrbitCat:
    """Objects are representatives ``G/H`` of conjugacy classes; maps ``G/H -> G/K`` are cosets gK with
    ``g^-1 H g`` contained in K."""

    def __init__(self, G: FiniteGroup, data: SubgroupData):
        self.G = G
        self.data = data
        self.reps = [cls[0] for cls in data.classes]
        self.names = [self._name(H) for H in self.reps]
        self.homs: dict = {}
        for i, H in enumerate(self.reps):
            for j, K in enumerate(self.reps):
                self.homs[(i, j)] = self._cosets(H, K)

    def _name(self, H) -> str:
        if len(H) == 1:
            return "G/e"
        if len(H) == len(self.G):
            return "G/G"
        return f"G/H{self.data.subgroups.index(H)}"

    def coset(self, g, K) -> frozenset:
        return frozenset(self.G.mul(g, k) for k in K)

    def _cosets(self, H, K) -> list:
        out = set()
        for g in self.G.elements:
            if self.G.conjugate(H, g) <= K:
                out.add(self.coset(g, K))
        return sorted(out, key=ps.sorted_labels)

    def compose(self, i: int, j: int, k: int, gK, hL):
        """``gK: G/H -> G/K`` followed by ``hL: G/K -> G/L`` is ``ghL``."""
        L = self.reps[k]
        g = min(gK, key=ps.sort_key)
        h = min(hL, key=ps.sort_key)
        return self.coset(self.G.mul(g, h), L)

    def hom_table(self) -> dict:
        return {(self.names[i], self.names[j]): len(v) for (i, j), v in self.homs.items()}

    def check(self):
        """Composition is well defined on cosets, associative, unital; endomorphisms are invertible."""
        n = len(self.reps)
        for i, j, k in itertools.product(range(n), repeat=3):
            for gK in self.homs[(i, j)]:
                for hL in self.homs[(j, k)]:
                    vals = {self.coset(self.G.mul(g, h), self.reps[k]) for g in gK for h in hL}
                    if len(vals) != 1 or next(iter(vals)) not in self.homs[(i, k)]:
                        raise GroupAxiomError("coset composition is not well defined", objects=[i, j, k])
        for i, j, k, l in itertools.product(range(n), repeat=4):
            for a in self.homs[(i, j)]:
                for b in self.homs[(j, k)]:
                    for c in self.homs[(k, l)]:
                        if self.compose(i, k, l, self.compose(i, j, k, a, b), c) != \
                                self.compose(i, j, l, a, self.compose(j, k, l, b, c)):
                            raise GroupAxiomError("orbit category composition is not associative")
        for i in range(n):
            ident = self.coset(self.G.identity, self.reps[i])
            for j in range(n):
                for a in self.homs[(i, j)]:
                    if self.compose(i, i, j, ident, a) != a or self.compose(i, j, j, a,
                                                                         self.coset(self.G.identity, self.reps[j])) != a:
                        raise GroupAxiomError("orbit category identities fail")
            for a in self.homs[(i, i)]:
                if not any(self.compose(i, i, i, a, b) == ident and self.compose(i, i, i, b, a) == ident
                           for b in self.homs[(i, i)]):
                    raise GroupAxiomError("non-invertible endomorphism in an orbit category")
        return self

    def precedence(self) -> wf.WfPoset:
        """``[H] < [K]`` iff H is strictly subconjugate to K."""
        n = len(self.reps)
        pairs = [(self.names[i], self.names[j]) for i in range(n) for j in range(n)
                 if i != j and self.homs[(i, j)]]
        return wf.check_well_founded(pairs, elements=self.names)

    def internal(self, opposite: bool = False):
        """As a discrete internal category (optionally the opposite category)."""
        from .segal import from_category

        n = len(self.reps)
        arrows, table, ids = {}, {}, {}
        lab = {}
        for (i, j), cosets in self.homs.items():
            for c in cosets:
                name = (self.names[i], self.names[j], ps.sorted_labels(c))
                lab[(i, j, c)] = name
                arrows[name] = (self.names[j], self.names[i]) if opposite else (self.names[i], self.names[j])
        for i in range(n):
            ids[self.names[i]] = lab[(i, i, self.coset(self.G.identity, self.reps[i]))]
        for i, j, k in itertools.product(range(n), repeat=3):
            for a in self.homs[(i, j)]:
                for b in self.homs[(j, k)]:
                    c = self.compose(i, j, k, a, b)
                    if opposite:
                        table[(lab[(j, k, b)], lab[(i, j, a)])] = lab[(i, k, c)]
                    else:
                        table[(lab[(i, j, a)], lab[(j, k, b)])] = lab[(i, k, c)]
        return from_category(self.names, arrows, table, ids, name=f"O_{self.G.name}" + ("^op" if opposite else ""))

    def to_json(self):
        return {"group": self.G.name, "objects": self.names,
                "subgroups": {nm: ps.sorted_labels(H) for nm, H in zip(self.names, self.reps)},
                "homs": {f"{self.names[i]}->{self.names[j]}": len(v) for (i, j), v in self.homs.items()},
                "precedence": self.precedence().to_json()}


def orbit_category(G: FiniteGroup, bound: int = DEFAULT_BOUND) -> OrbitCat:
    return OrbitCat(G, subgroups(G, bound)).check()


# -- the explicit C_p presentation -------------------------------------------

def cp_presentation(p: int, n: int = 3) -> InvCat:
    """Objects ``G/e < G/G``: ``I(G/e)`` the n-truncated nerve of C_p, ``I(G/G)`` the point, and
    ``I(G/G, G/e)`` the nerve again with legs to the point and the identity."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime", value=p)
    if n < 1:
        raise ValueError("truncation level must be at least 1")
    base = SSetBase(n)
    BG = ps.group_nerve(range(p), lambda a, b: (a + b) % p, 0, n, name="BG")
    pt = base.terminal()
    poset = wf.check_well_founded([("G/e", "G/G")], elements=["G/e", "G/G"])
    spaces = {"G/e": BG, "G/G": pt}
    homs = {("G/G", "G/e"): Span(BG, ps.to_terminal(BG), ps.identity(BG))}
    return validate(base, poset, spaces, homs, {}, display={"G/e": "BG"})
