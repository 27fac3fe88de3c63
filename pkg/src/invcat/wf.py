"""Finite well-founded posets and dependent well-founded recursion."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping, Optional, Sequence

from .errors import CycleFound, DuplicateLabel, StepFailure, UnknownLabel

Label = Hashable


@dataclass(frozen=True)
class WfPoset:
    """A finite set with a transitive, irreflexive, acyclic relation.

    ``lt`` holds pairs ``(y, x)`` meaning ``y < x``; it is always transitively
    closed. ``generators`` keeps the relation as it was given, which is what
    gets serialized.
    """

    elements: tuple
    lt: frozenset
    generators: frozenset = field(default=frozenset(), compare=False)

    def __contains__(self, x):
        return x in self._index

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def _index(self):
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {x: i for i, x in enumerate(self.elements)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def below(self, x) -> tuple:
        """Strict predecessors of ``x`` in element order."""
        self._check(x)
        return tuple(y for y in self.elements if (y, x) in self.lt)

    def above(self, x) -> tuple:
        self._check(x)
        return tuple(y for y in self.elements if (x, y) in self.lt)

    def precedes(self, y, x) -> bool:
        return (y, x) in self.lt

    def minimal(self) -> tuple:
        return tuple(x for x in self.elements if not self.below(x))

    def maximal(self) -> tuple:
        return tuple(x for x in self.elements if not self.above(x))

    def covers(self) -> frozenset:
        """Hasse-diagram pairs (y, x): y < x with nothing strictly between."""
        return frozenset(
            (y, x) for (y, x) in self.lt
            if not any((y, z) in self.lt and (z, x) in self.lt for z in self.elements)
        )

    def topological_order(self, tiebreak: Optional[Callable] = None) -> tuple:
        """Minimal elements first; ties broken by ``tiebreak`` (default: string order)."""
        key = tiebreak or (lambda x: str(x))
        remaining = set(self.elements)
        done: list = []
        while remaining:
            ready = [x for x in remaining if all(y not in remaining for y in self.below(x))]
            x = min(ready, key=key)
            done.append(x)
            remaining.discard(x)
        return tuple(done)

    def topological_orders(self) -> Iterable[tuple]:
        """All linear extensions (exponential; only for tiny posets)."""

        def go(prefix, remaining):
            if not remaining:
                yield tuple(prefix)
                return
            for x in sorted(remaining, key=str):
                if all(y not in remaining for y in self.below(x)):
                    yield from go(prefix + [x], remaining - {x})

        yield from go([], frozenset(self.elements))

    def restrict(self, subset: Iterable) -> "WfPoset":
        keep = set(subset)
        for x in keep:
            self._check(x)
        elements = tuple(x for x in self.elements if x in keep)
        lt = frozenset((y, x) for (y, x) in self.lt if y in keep and x in keep)
        gens = frozenset((y, x) for (y, x) in self.generators if y in keep and x in keep)
        return WfPoset(elements, lt, gens or lt)

    def to_json(self) -> dict:
        gens = self.generators or self.lt
        return {"elements": list(self.elements), "lt": sorted([list(p) for p in gens], key=str)}

    @classmethod
    def from_json(cls, data: Mapping) -> "WfPoset":
        return check_well_founded(data.get("lt", []), elements=data["elements"])

    def _check(self, x):
        if x not in self._index:
            raise UnknownLabel(f"unknown label {x!r}", label=x)


def transitive_closure(elements: Sequence, pairs: Iterable) -> set:
    succ = {x: set() for x in elements}
    for y, x in pairs:
        succ[y].add(x)
    closed = set()
    for start in elements:
        stack = list(succ[start])
        seen = set()
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(succ[x])
        closed.update((start, x) for x in seen)
    return closed


def find_cycle(elements: Sequence, pairs: Iterable) -> Optional[list]:
    """Return a cycle ``[a, b, ..., a]`` in the relation, or None."""
    succ = {x: [] for x in elements}
    for y, x in pairs:
        succ[y].append(x)
    for x in succ:
        succ[x].sort(key=str)
    colour = {x: 0 for x in elements}
    parent: dict = {}

    for root in sorted(elements, key=str):
        if colour[root]:
            continue
        stack = [(root, iter(succ[root]))]
        colour[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = 2
                stack.pop()
                continue
            if colour[nxt] == 0:
                colour[nxt] = 1
                parent[nxt] = node
                stack.append((nxt, iter(succ[nxt])))
            elif colour[nxt] == 1:
                path = [nxt]
                cur = node
                while cur != nxt:
                    path.append(cur)
                    cur = parent[cur]
                path.append(nxt)
                path.reverse()
                # path runs nxt -> ... -> node -> nxt
                return path
    return None


def check_well_founded(pairs: Iterable, elements: Optional[Sequence] = None) -> WfPoset:
    """Validate a finite relation ``{(y, x): y < x}`` and close it transitively.

    Raises :class:`CycleFound` with a witnessing cycle if the relation admits
    an infinite descending chain.
    """
    pairs = [tuple(p) for p in pairs]
    if elements is None:
        seen: dict = {}
        for p in pairs:
            for v in p:
                seen.setdefault(v, None)
        elements = list(seen)
    elements = list(elements)
    if len(set(elements)) != len(elements):
        dup = next(x for x in elements if elements.count(x) > 1)
        raise DuplicateLabel(f"duplicate label {dup!r}", label=dup)
    known = set(elements)
    for p in pairs:
        if len(p) != 2:
            raise UnknownLabel(f"relation entries must be pairs, got {p!r}", entry=p)
        for v in p:
            if v not in known:
                raise UnknownLabel(f"unknown label {v!r}", label=v)
    cycle = find_cycle(elements, pairs)
    if cycle is not None:
        raise CycleFound(cycle)
    closed = transitive_closure(elements, pairs)
    return WfPoset(tuple(elements), frozenset(closed), frozenset(pairs))


def chain(*labels) -> WfPoset:
    """The chain ``labels[0] < labels[1] < ...``."""
    return check_well_founded(zip(labels, labels[1:]), elements=labels)


def strict_slice(poset: WfPoset, x) -> WfPoset:
    return poset.restrict(poset.below(x))


def lax_slice(poset: WfPoset, x) -> WfPoset:
    return poset.restrict(poset.below(x) + (x,))


@dataclass(frozen=True)
class Cocone:
    """A step result that also supplies one datum per strict predecessor."""

    vertex: Any
    components: Mapping = field(default_factory=dict)


def recurse_section(poset: WfPoset, step: Callable, order: Optional[Sequence] = None):
    """Dependent well-founded recursion.

    ``step(x, below)`` receives the values already fixed on the strict slice
    below ``x`` (a dict) and returns either a plain value or a :class:`Cocone`
    whose ``components`` are keyed by the predecessors of ``x``.  Returns
    ``(values, components)`` where ``components[(y, x)]`` is the datum chosen
    at ``x`` for ``y < x``.
    """
    order = tuple(order) if order is not None else poset.topological_order()
    if sorted(order, key=str) != sorted(poset.elements, key=str):
        raise UnknownLabel("evaluation order must list every element once", order=list(order))
    values: dict = {}
    components: dict = {}
    for x in order:
        preds = poset.below(x)
        missing = [y for y in preds if y not in values]
        if missing:
            raise UnknownLabel(f"order visits {x!r} before its predecessors {missing!r}", element=x)
        try:
            result = step(x, {y: values[y] for y in preds})
        except StepFailure:
            raise
        except Exception as exc:  # noqa: BLE001 - re-raised with the element attached
            raise StepFailure(x, exc) from exc
        if isinstance(result, Cocone):
            extra = set(result.components) - set(preds)
            if extra:
                raise StepFailure(x, ValueError(f"components for non-predecessors {sorted(extra, key=str)}"))
            values[x] = result.vertex
            for y, datum in result.components.items():
                components[(y, x)] = datum
        else:
            values[x] = result
    return {x: values[x] for x in poset.elements}, components


def random_topological_order(poset: WfPoset, rng) -> tuple:
    """A linear extension chosen uniformly at each step among the available minimal elements."""
    remaining = list(poset.elements)
    done: set = set()
    out = []
    while remaining:
        ready = [x for x in remaining if all(y in done for y in poset.below(x))]
        x = rng.choice(ready)
        remaining.remove(x)
        done.add(x)
        out.append(x)
    return tuple(out)


def recurse(poset: WfPoset, step: Callable, order: Optional[Sequence] = None) -> dict:
    """Like :func:`recurse_section` but returns only the vertex assignment."""
    return recurse_section(poset, step, order)[0]


def dumps(poset: WfPoset) -> str:
    return json.dumps(poset.to_json(), sort_keys=True)
