"""JSON workbench files: declarations of presheaves, maps, inverse categories and diagrams.

A workbench is one JSON object::

    {
      "base": "finset" | "sset",          # default finset
      "trunc": 3,                         # truncation level for sset
      "objects":  {name: presheaf},
      "maps":     {name: {"src": ref, "tgt": ref, ...map body}},
      "invcats":  {name: invcat},
      "diagrams": {name: diagram}
    }

Presheaf declarations: ``{"elements": [...]}``, ``{"terminal": true}``,
``{"empty": true}``, ``{"simplex": k}``, ``{"nerve": "C3"}``, or explicit
``{"levels": [[...], ...], "faces": {"m": {e: [d_0 e, ..., d_m e]}},
"degens": {"m": {e: [s_0 e, ..., s_m e]}}}``.

Map bodies: ``{"assign": {e: f}}`` (level 0), ``{"levels": [{...}, ...]}``,
``{"terminal": true}`` or ``{"identity": true}``.  An assignment is either a
JSON object or a list of ``[element, image]`` pairs; JSON lists inside labels
become tuples.

Inverse categories: explicit ``{"objects", "precedes": [[lower, upper]],
"spaces": {x: ref}, "homs": [{"upper", "lower", "obj", "left", "right"}],
"comp": [{"chain": [x, y, z], "assign": ...}], "display": {x: name}}``, or
``{"ordinary": {"objects", "precedes", "arrows": [{"upper", "lower",
"names"}], "compose": [[f, g, fg], ...]}}``, ``{"trivial": {"objects",
"precedes"}}`` or ``{"cp": {"p": 2}}``.

Diagrams: ``{"invcat": name, "gamma": ref, "comps": {x: {"obj", "to_gamma",
"to_space"}}, "actions": [{"upper", "lower", "assign"}]}`` or
``{"terminal": invcat-name}``.  A reference is either a declared name or an
inline declaration.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from . import wf
from .base import presheaf as ps
from .base.instances import BaseCat, instance
from .base.presheaf import PMap, Presheaf
from .diagram import Diagram, terminal_diagram, validate_diagram, Component
from .errors import (
    DuplicateLabel, InstanceMismatch, InvcatError, NotAMap, SpecSyntaxError, UnresolvedName,
)
from .inverse import InvCat, Span, from_ordinary, trivial, validate


@dataclass
class Workbench:
    base: BaseCat
    objects: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    invcats: dict = field(default_factory=dict)
    diagrams: dict = field(default_factory=dict)

    def invcat(self, name: Optional[str] = None) -> InvCat:
        return _pick(self.invcats, name, "inverse category")

    def diagram(self, name: Optional[str] = None) -> Diagram:
        return _pick(self.diagrams, name, "diagram")


def _pick(table: dict, name, what):
    if name is None:
        if len(table) != 1:
            raise UnresolvedName(f"expected exactly one {what}, found {len(table)}; name one explicitly",
                                 available=sorted(table))
        return next(iter(table.values()))
    if name not in table:
        raise UnresolvedName(f"no {what} named {name!r}", name=name, available=sorted(table))
    return table[name]


# -- labels ----------------------------------------------------------------

def label(v):
    """JSON value -> hashable label."""
    if isinstance(v, list):
        return tuple(label(x) for x in v)
    if isinstance(v, dict):
        raise SpecSyntaxError("labels cannot be JSON objects", line=0, column=0)
    return v


def unlabel(v):
    """Hashable label -> JSON value."""
    if isinstance(v, tuple):
        return [unlabel(x) for x in v]
    return v


def _lookup(level) -> dict:
    out = {}
    for e in level:
        out[e] = e
        out[str(e)] = e
        out[json.dumps(unlabel(e))] = e
    return out


def _assignment(data, src_level, where: str) -> dict:
    """Read ``{e: f}`` or ``[[e, f], ...]`` with keys resolved against the source level."""
    look = _lookup(src_level)
    pairs = data.items() if isinstance(data, dict) else data
    out = {}
    for item in pairs:
        try:
            k, v = item
        except (TypeError, ValueError):
            raise UnresolvedName(f"{where}: assignment entries must be [element, image] pairs", at=where)
        key = label(k)
        if key not in look:
            raise UnresolvedName(f"{where}: {k!r} is not an element of the source", at=where, element=unlabel(key))
        out[look[key]] = label(v)
    return out


# -- reading ---------------------------------------------------------------

def _duplicate_check(pairs):
    seen = {}
    for k, v in pairs:
        if k in seen:
            raise DuplicateLabel(f"duplicate key {k!r}", label=k)
        seen[k] = v
    return seen


def _locate(text: str, path: list):
    """Best-effort line/column of a JSON path, by scanning for its keys in order."""
    pos = 0
    for key in path:
        if isinstance(key, str):
            i = text.find(json.dumps(key), pos)
            if i >= 0:
                pos = i
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Reader:
    def __init__(self, data: dict, base: BaseCat):
        self.data = data
        self.base = base
        self.wb = Workbench(base)
        self.path: list = []

    def _section(self, name):
        sec = self.data.get(name, {})
        if not isinstance(sec, dict):
            raise SpecSyntaxError(f"section {name!r} must be a JSON object", line=0, column=0)
        return sec

    def run(self) -> Workbench:
        for name, decl in self._section("objects").items():
            self.path = ["objects", name]
            self.wb.objects[name] = self.presheaf(decl)
        for name, decl in self._section("maps").items():
            self.path = ["maps", name]
            if not isinstance(decl, dict) or "src" not in decl or "tgt" not in decl:
                raise UnresolvedName(f"map {name!r} needs 'src' and 'tgt'", at=name)
            self.wb.maps[name] = self.pmap(decl, self.obj_ref(decl["src"]), self.obj_ref(decl["tgt"]))
        for name, decl in self._section("invcats").items():
            self.path = ["invcats", name]
            self.wb.invcats[name] = self.invcat(decl)
        for name, decl in self._section("diagrams").items():
            self.path = ["diagrams", name]
            self.wb.diagrams[name] = self.diagram(decl, name)
        return self.wb

    # presheaves
    def presheaf(self, d) -> Presheaf:
        n = self.base.trunc
        if isinstance(d, list):
            return ps.discrete([label(e) for e in d], n)
        if not isinstance(d, dict):
            raise UnresolvedName(f"cannot read a presheaf from {d!r}", at=self.path)
        if "elements" in d:
            return ps.discrete([label(e) for e in d["elements"]], n)
        if d.get("terminal"):
            return ps.terminal(n)
        if d.get("empty"):
            return ps.empty(n)
        if "simplex" in d:
            return ps.representable(int(d["simplex"]), n)
        if "nerve" in d:
            from .orbit import builtin
            G = builtin(d["nerve"])
            return ps.group_nerve(G.elements, G.mul, G.identity, n, name=f"B{d['nerve']}")
        if "levels" in d:
            levels = [[label(e) for e in lv] for lv in d["levels"]]
            if len(levels) - 1 != n:
                raise InstanceMismatch(f"presheaf has {len(levels)} levels, the base expects {n + 1}",
                                       at=self.path)
            faces, degens = {}, {}
            for key, table in (("faces", faces), ("degens", degens)):
                for m, fns in d.get(key, {}).items():
                    m = int(m)
                    for e, images in _assignment(fns, levels[m] if m < len(levels) else [], key).items():
                        for i, img in enumerate(images):
                            table.setdefault((m, i), {})[e] = img
            return Presheaf(levels, faces, degens)
        raise UnresolvedName(f"cannot read a presheaf from {d!r}", at=self.path)

    def obj_ref(self, r) -> Presheaf:
        if isinstance(r, str):
            if r not in self.wb.objects:
                raise UnresolvedName(f"unknown object {r!r}", name=r, at=self.path)
            return self.wb.objects[r]
        return self.presheaf(r)

    # maps
    def pmap(self, d, src: Presheaf, tgt: Presheaf) -> PMap:
        if isinstance(d, str) and d not in ("terminal", "identity"):
            if d not in self.wb.maps:
                raise UnresolvedName(f"unknown map {d!r}", name=d, at=self.path)
            f = self.wb.maps[d]
            if f.src != src or f.tgt != tgt:
                raise InstanceMismatch(f"map {d!r} does not have the expected source and target", name=d)
            return f
        if d == "terminal" or (isinstance(d, dict) and d.get("terminal")):
            if not all(len(lv) == 1 for lv in tgt.levels):
                raise InstanceMismatch("'terminal' maps need a one-point target at every level", at=self.path)
            return PMap(src, tgt, [{e: tgt.levels[m][0] for e in lv} for m, lv in enumerate(src.levels)])
        if d == "identity" or (isinstance(d, dict) and d.get("identity")):
            return PMap(src, tgt, [{e: e for e in lv} for lv in src.levels])
        if isinstance(d, dict) and "levels" in d:
            comps = [_assignment(a, src.levels[m], "map") for m, a in enumerate(d["levels"])]
            return PMap(src, tgt, comps)
        body = d.get("assign", {}) if isinstance(d, dict) and ("assign" in d) else d
        comp0 = _assignment(body, src.levels[0], "map")
        if src.trunc == 0:
            return PMap(src, tgt, [comp0])
        # higher levels of maps out of discrete presheaves are determined by level 0
        return ps.from_function(src, tgt, lambda m, e: tgt.act(comp0[src.act(e, m, (0,))], 0, (0,) * (m + 1)),
                                check=True)

    # inverse categories
    def poset(self, d) -> wf.WfPoset:
        objs = [label(x) for x in d.get("objects", [])]
        pairs = [(label(a), label(b)) for a, b in d.get("precedes", [])]
        return wf.check_well_founded(pairs, elements=objs)

    def invcat(self, d) -> InvCat:
        if "ordinary" in d:
            o = d["ordinary"]
            arrows = {(label(a["upper"]), label(a["lower"])): [label(f) for f in a.get("names", [])]
                      for a in o.get("arrows", [])}
            compose = {(label(f), label(g)): label(h) for f, g, h in o.get("compose", [])}
            return from_ordinary(self.poset(o), arrows, compose, self.base)
        if "trivial" in d:
            return trivial(self.poset(d["trivial"]), self.base)
        if "cp" in d:
            from .orbit import cp_presentation
            return cp_presentation(int(d["cp"].get("p", 2)), self.base.trunc)
        poset = self.poset(d)
        spaces = {label(x): self.obj_ref(r) for x, r in d.get("spaces", {}).items()}
        for x in poset:
            if x not in spaces:
                raise UnresolvedName(f"no space declared for object {x!r}", name=unlabel(x), at=self.path)
        homs = {}
        for h in d.get("homs", []):
            x, y = label(h["upper"]), label(h["lower"])
            if x not in spaces or y not in spaces:
                raise UnresolvedName(f"hom {x}>{y} mentions an undeclared object", pair=[x, y])
            obj = self.obj_ref(h["obj"])
            homs[(x, y)] = Span(obj, self.pmap(h["left"], obj, spaces[x]), self.pmap(h["right"], obj, spaces[y]))
        comp = {}
        pre = InvCat(self.base, poset, spaces, homs, {})
        for c in d.get("comp", []):
            x, y, z = (label(v) for v in c["chain"])
            if (x, y) not in homs or (y, z) not in homs or (x, z) not in homs:
                raise UnresolvedName(f"composite {x}>{y}>{z} needs all three hom spans", chain=[x, y, z])
            dom = pre.comp_domain(x, y, z).obj
            tgt = homs[(x, z)].obj
            try:
                comp[(x, y, z)] = self.pmap(c.get("map", {"assign": c.get("assign", [])}), dom, tgt)
            except NotAMap as exc:
                raise NotAMap(f"composite {x}>{y}>{z} does not land in I({x}, {z}): {exc}",
                              condition="composite lands in hom", chain=[x, y, z], **exc.certificate) from None
        display = {label(k): v for k, v in d.get("display", {}).items()}
        return validate(self.base, poset, spaces, homs, comp, display)

    # diagrams
    def diagram(self, d, name) -> Diagram:
        if "terminal" in d:
            I = self.invcat_ref(d["terminal"])
            gamma = self.obj_ref(d["gamma"]) if "gamma" in d else self.base.terminal()
            return terminal_diagram(I, gamma)
        I = self.invcat_ref(d.get("invcat"))
        gamma = self.obj_ref(d["gamma"]) if "gamma" in d else self.base.terminal()
        comps = {}
        for x, c in d.get("comps", {}).items():
            x = label(x)
            if x not in I.spaces:
                raise UnresolvedName(f"component for unknown object {x!r}", name=unlabel(x), at=self.path)
            obj = self.obj_ref(c["obj"])
            comps[x] = Component(obj, self.pmap(c.get("to_gamma", "terminal"), obj, gamma),
                                 self.pmap(c["to_space"], obj, I.spaces[x]))
        for x in I.objects:
            if x not in comps:
                raise UnresolvedName(f"diagram has no component at {x!r}", name=unlabel(x), at=self.path)
        D = Diagram(I, gamma, comps, {}, name)
        actions = {}
        for a in d.get("actions", []):
            x, y = label(a["upper"]), label(a["lower"])
            if (x, y) not in I.homs:
                raise UnresolvedName(f"action for {x}>{y}, which is not a hom", pair=[x, y])
            actions[(x, y)] = self.pmap(a.get("map", {"assign": a.get("assign", [])}),
                                        D.action_domain(x, y).obj, comps[y].obj)
        D.actions = actions
        return validate_diagram(D)

    def invcat_ref(self, r) -> InvCat:
        if isinstance(r, str):
            if r not in self.wb.invcats:
                raise UnresolvedName(f"unknown inverse category {r!r}", name=r, at=self.path)
            return self.wb.invcats[r]
        if r is None:
            return self.wb.invcat()
        return self.invcat(r)


def parse_spec(text: str, base: Optional[str] = None, trunc: Optional[int] = None) -> Workbench:
    """Parse and name-resolve a workbench; command-line ``base``/``trunc`` override the file."""
    try:
        data = json.loads(text, object_pairs_hook=_duplicate_check)
    except json.JSONDecodeError as exc:
        raise SpecSyntaxError(exc.msg, line=exc.lineno, column=exc.colno) from None
    if not isinstance(data, dict):
        raise SpecSyntaxError("a workbench must be a JSON object", line=1, column=1)
    name = base or data.get("base", "finset")
    n = trunc if trunc is not None else data.get("trunc")
    if name in ("finset", "set", "sets") and n not in (None, 0) and trunc is None:
        raise InstanceMismatch(f"finite sets have truncation 0, got {n}")
    reader = _Reader(data, instance(name, n))
    try:
        return reader.run()
    except InvcatError as exc:
        if not isinstance(exc, SpecSyntaxError):
            line, col = _locate(text, reader.path)
            exc.certificate.setdefault("line", line)
            exc.certificate.setdefault("column", col)
            exc.certificate.setdefault("at", "/".join(map(str, reader.path)))
        raise


def load_spec(path: str, base: Optional[str] = None, trunc: Optional[int] = None) -> Workbench:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read(), base, trunc)


# -- writing ---------------------------------------------------------------

def _pairs(d: dict) -> list:
    return [[unlabel(k), unlabel(v)] for k, v in sorted(d.items(), key=lambda kv: ps.sort_key(kv[0]))]


def presheaf_to_json(P: Presheaf) -> dict:
    if P.trunc == 0:
        return {"elements": [unlabel(e) for e in P.levels[0]]}
    faces = {str(m): [[unlabel(e), [unlabel(P.face(m, i, e)) for i in range(m + 1)]] for e in P.levels[m]]
             for m in range(1, P.trunc + 1)}
    degens = {str(m): [[unlabel(e), [unlabel(P.degen(m, i, e)) for i in range(m + 1)]] for e in P.levels[m]]
              for m in range(P.trunc)}
    return {"levels": [[unlabel(e) for e in lv] for lv in P.levels], "faces": faces, "degens": degens}


def pmap_to_json(f: PMap) -> dict:
    return {"levels": [_pairs(c) for c in f.comps]}


def invcat_to_json(I: InvCat) -> dict:
    """Explicit declaration that :func:`parse_spec` reads back to the same data."""
    out = {
        "objects": [unlabel(x) for x in I.objects],
        "precedes": [[unlabel(y), unlabel(x)] for x in I.objects for y in I.poset.below(x)],
        "spaces": {str(x): presheaf_to_json(I.spaces[x]) for x in I.objects},
        "homs": [{"upper": unlabel(x), "lower": unlabel(y), "obj": presheaf_to_json(s.obj),
                  "left": pmap_to_json(s.left), "right": pmap_to_json(s.right)}
                 for (x, y), s in sorted(I.homs.items(), key=lambda kv: ps.sort_key(kv[0]))],
        "comp": [{"chain": [unlabel(v) for v in k], "map": pmap_to_json(c)}
                 for k, c in sorted(I.comp.items(), key=lambda kv: ps.sort_key(kv[0]))],
    }
    if I.display:
        out["display"] = {str(k): v for k, v in I.display.items()}
    return out


def diagram_to_json(A: Diagram, invcat_name: str = "I") -> dict:
    return {
        "invcat": invcat_name,
        "gamma": presheaf_to_json(A.gamma),
        "comps": {str(x): {"obj": presheaf_to_json(c.obj), "to_gamma": pmap_to_json(c.to_gamma),
                           "to_space": pmap_to_json(c.to_space)} for x, c in A.comps.items()},
        "actions": [{"upper": unlabel(x), "lower": unlabel(y), "map": pmap_to_json(f)}
                    for (x, y), f in sorted(A.actions.items(), key=lambda kv: ps.sort_key(kv[0]))],
    }


def workbench_to_json(wb: Workbench) -> dict:
    out = {"base": wb.base.name, "invcats": {k: invcat_to_json(v) for k, v in wb.invcats.items()},
           "diagrams": {}}
    if wb.base.trunc:
        out["trunc"] = wb.base.trunc
    for k, D in wb.diagrams.items():
        owner = next((n for n, I in wb.invcats.items() if I is D.invcat), None)
        if owner is None:
            owner = f"_{k}_invcat"
            out["invcats"][owner] = invcat_to_json(D.invcat)
        out["diagrams"][k] = diagram_to_json(D, owner)
    return out


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False, ensure_ascii=False)
