"""The two executable base categories: finite sets and truncated simplicial sets.

Both use :class:`Presheaf` objects; they differ in truncation level and in
which maps count as fibrations.  All maps are prefibrations in both.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from ..errors import InstanceMismatch
from . import presheaf as ps
from .presheaf import PMap, Presheaf


@dataclass
class Verdict:
    """A boolean with a certificate explaining it."""

    ok: bool
    reason: str = ""
    witness: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_json(self):
        from ..errors import _jsonable
        return {"ok": self.ok, "reason": self.reason, "witness": _jsonable(self.witness)}


class BaseCat:
    """Finite products, pullbacks, dependent products, and a fibration class."""

    name = "abstract"
    trunc = 0

    def check(self, *objs):
        for obj in objs:
            obj = obj.src if isinstance(obj, PMap) else obj
            if obj.trunc != self.trunc:
                raise InstanceMismatch(f"{obj!r} has truncation {obj.trunc}, instance {self.name} expects {self.trunc}")

    def terminal(self) -> Presheaf:
        return ps.terminal(self.trunc)

    def empty(self) -> Presheaf:
        return ps.empty(self.trunc)

    def product(self, a, b):
        return ps.product(a, b)

    def pullback(self, f, g):
        return ps.pullback(f, g)

    def finite_limit(self, objects, arrows):
        if not objects:
            return ps.Limit(self.terminal(), (), {})
        return ps.limit(objects, arrows)

    def dep_product(self, f, g):
        return ps.dep_product(f, g)

    def is_prefibration(self, f: PMap) -> Verdict:
        return Verdict(True, "every map is a prefibration")

    def is_fibration(self, f: PMap) -> Verdict:
        raise NotImplementedError

    def is_fibrant(self, obj: Presheaf) -> Verdict:
        return self.is_fibration(ps.to_terminal(obj))


class FinSetBase(BaseCat):
    """Finite sets; fibrations are the surjections."""

    name = "finset"
    trunc = 0

    def is_fibration(self, f: PMap) -> Verdict:
        hit = set(f.comps[0].values())
        for e in f.tgt.levels[0]:
            if e not in hit:
                return Verdict(False, "not surjective", {"missed": e})
        return Verdict(True, "surjective")


class SSetBase(BaseCat):
    """n-truncated simplicial sets; fibrations are maps with all horn fillers up to level n."""

    name = "sset"

    def __init__(self, trunc: int = 3):
        self.trunc = trunc

    def is_fibration(self, f: PMap) -> Verdict:
        return kan_check(f)


def instance(name: str, trunc: Optional[int] = None) -> BaseCat:
    if name in ("finset", "set", "sets"):
        return FinSetBase()
    if name in ("sset", "ssets", "simplicial"):
        return SSetBase(3 if trunc is None else trunc)
    raise InstanceMismatch(f"unknown base instance {name!r}")


def instance_for(obj: Presheaf, fibrations: str = "auto") -> BaseCat:
    """Pick the instance matching an object's truncation level."""
    if obj.trunc == 0 and fibrations in ("auto", "finset"):
        return FinSetBase()
    return SSetBase(obj.trunc)


def horns(X: Presheaf, m: int, k: int, constraints=None):
    """Enumerate horns ``Lambda^k_m -> X``: families ``{i: x_i}`` (i != k) of
    (m-1)-simplices with ``d_i x_j = d_{j-1} x_i`` for ``i < j``.

    ``constraints`` optionally restricts each ``x_i`` to a candidate list.
    """
    idx = [i for i in range(m + 1) if i != k]
    cands = {i: (constraints[i] if constraints else X.levels[m - 1]) for i in idx}
    chosen: dict = {}

    def compatible(j):
        xj = chosen[j]
        for i in chosen:
            if i < j and m - 1 >= 1:
                if X.face(m - 1, i, xj) != X.face(m - 1, j - 1, chosen[i]):
                    return False
        return True

    def go(pos):
        if pos == len(idx):
            yield dict(chosen)
            return
        j = idx[pos]
        for x in cands[j]:
            chosen[j] = x
            if compatible(j):
                yield from go(pos + 1)
            del chosen[j]

    yield from go(0)


def kan_check(f: PMap) -> Verdict:
    """Exhaustive horn-lifting test for ``f: X -> Y`` in dimensions 1..n."""
    X, Y = f.src, f.tgt
    n = X.trunc
    for m in range(1, n + 1):
        # index fillers by (image, faces other than k)
        for k in range(m + 1):
            fillers = set()
            for x in X.levels[m]:
                fillers.add((f.comps[m][x],) + tuple(X.face(m, i, x) for i in range(m + 1) if i != k))
            pre = {}
            for x in X.levels[m - 1]:
                pre.setdefault(f.comps[m - 1][x], []).append(x)
            for y in Y.levels[m]:
                cons = {i: pre.get(Y.face(m, i, y), []) for i in range(m + 1) if i != k}
                for horn in horns(X, m, k, cons):
                    key = (y,) + tuple(horn[i] for i in sorted(horn))
                    if key not in fillers:
                        return Verdict(False, f"unfillable horn Lambda^{k}_{m}",
                                       {"dim": m, "k": k, "horn": horn, "target_simplex": y})
    return Verdict(True, f"all horns up to dimension {n} fill")
