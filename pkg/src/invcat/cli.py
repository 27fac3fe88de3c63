"""Command-line interface.

Every subcommand prints one report on stdout (JSON with ``--format json``).
Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for malformed input.  Errors go to stderr as JSON objects.

Workbench files are JSON; see :mod:`invcat.io` for the grammar.  Signatures
are printed in the plain-text grammar of :mod:`invcat.tt.syntax`.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import io, wf
from .base import presheaf as ps
from .errors import CheckFailure, InputError, InvcatError, StepFailure, _jsonable

EPILOG = """\
workbench grammar (JSON):
  {"base": "finset"|"sset", "trunc": N,
   "objects": {name: presheaf}, "maps": {name: map},
   "invcats": {name: invcat}, "diagrams": {name: diagram},
   "relations": {name: {"elements": [...], "pairs": [[lower, upper], ...]}}}
  presheaf: {"elements": [...]} | {"terminal": true} | {"simplex": k} | {"nerve": "C3"}
            | {"levels": [...], "faces": {m: {e: [d_0 e, ...]}}, "degens": {m: {e: [s_0 e, ...]}}}
  invcat:   {"objects", "precedes", "spaces", "homs", "comp", "display"}
            | {"ordinary": {...}} | {"trivial": {...}} | {"cp": {"p": p}}
  diagram:  {"invcat", "gamma", "comps": {x: {"obj", "to_gamma", "to_space"}}, "actions": [...]}

signature grammar (emit-*):
  judgment := [item ("," item)*] "|-" expr "type"     item := "@" name | "(" var ":" expr ")"
  expr     := ("Pi"|"Sg") "(" var ":" expr ")" "," expr | expr "->" expr | expr "*" expr
            | expr "∘" expr | f "(" expr, ... ")" | "Id" "(" expr "," expr ")" | "Unit" | name

exit codes: 0 all checks pass, 1 a check failed, 2 malformed input
"""


class Failed(Exception):
    """Carries a finished report whose check did not pass."""

    def __init__(self, report):
        self.report = report


# -- helpers ---------------------------------------------------------------

def _load(args):
    return io.load_spec(args.file, args.base, args.trunc)


def _engine(args):
    from .hom import HomEngine
    return HomEngine(args.size_bound)


def _pair(wb, args):
    names = list(wb.diagrams)
    src = args.source or (names[0] if names else None)
    tgt = args.target or (names[1] if len(names) > 1 else src)
    return wb.diagram(src), wb.diagram(tgt)


def _str_keys(d: dict) -> dict:
    return {str(k): v for k, v in d.items()}


# -- subcommands -----------------------------------------------------------

def cmd_wf_check(args):
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        from .errors import SpecSyntaxError
        raise SpecSyntaxError(exc.msg, line=exc.lineno, column=exc.colno) from None
    out = {}
    for name, rel in (data.get("relations") or {}).items():
        P = wf.check_well_founded([tuple(io.label(p)) for p in rel.get("pairs", [])],
                                  elements=[io.label(e) for e in rel.get("elements", [])])
        out[name] = P.to_json() | {"order": list(P.topological_order())}
    if data.get("invcats"):
        wb = _load(args)
        for name, I in wb.invcats.items():
            out[name] = I.poset.to_json() | {"order": list(I.order())}
    return {"well_founded": True, "relations": out}


def cmd_check_invcat(args):
    from .diagram import is_fibrant_invcat
    wb = _load(args)
    I = wb.invcat(args.name)
    rep = is_fibrant_invcat(I, _engine(args))
    out = {"valid": True, "objects": list(I.objects), "base": I.base.name, "trunc": I.base.trunc,
           "space_sizes": {str(x): I.spaces[x].sizes() for x in I.objects},
           "hom_sizes": {f"{x}>{y}": v for (x, y), v in I.hom_sizes().items()}} | rep.to_json()
    if not rep:
        raise Failed(out)
    return out


def cmd_check_diagram(args):
    from .diagram import is_reedy_fibrant
    wb = _load(args)
    A = wb.diagram(args.diagram)
    rep = is_reedy_fibrant(A, engine=_engine(args))
    out = {"valid": True, "diagram": A.name, "sizes": _str_keys(A.sizes()),
           "reedy_fibrant": rep.ok} | rep.to_json()
    if not rep:
        raise Failed(out)
    return out


def cmd_matching(args):
    from .diagram import matching_map
    wb = _load(args)
    A = wb.diagram(args.diagram)
    engine = _engine(args)
    objs = [io.label(args.object)] if args.object is not None else list(A.invcat.order())
    out = {}
    for x in objs:
        m = matching_map(A, x, engine)
        out[str(x)] = {"matching_size": m.tgt.sizes(), "component_size": m.src.sizes(),
                       "fibration": A.invcat.base.is_fibration(m).to_json()}
    return {"diagram": A.name, "matching": out}


def cmd_hom(args):
    from .hom import check_lax_decomposition, hom_object
    wb = _load(args)
    A, B = _pair(wb, args)
    engine = _engine(args)
    H = hom_object(A, B, engine)
    out = {"source": A.name, "target": B.name, "carrier_size": len(H.carrier.levels[0]),
           "carrier_sizes": H.carrier.sizes(),
           "fibres": {f"{x0}|{y0}": len(H.fibre(x0, y0)) for x0 in A.gamma.levels[0] for y0 in B.gamma.levels[0]}}
    if A.invcat.base.trunc == 0:
        out["lax_decomposition"] = check_lax_decomposition(A, B, engine)
        if not out["lax_decomposition"]["ok"]:
            raise Failed(out)
    return out


def cmd_verify_up(args):
    from .hom import check_lax_decomposition, HomEngine
    from .oracle import verify_universal_property
    from .random_instances import oracle_sized_instance
    t0 = time.time()
    runs = []
    if args.random:
        for i in range(args.random):
            I, A, B, used = oracle_sized_instance(args.seed + i)
            engine = HomEngine(args.size_bound)
            rep = verify_universal_property(A, B, engine=engine, max_z=args.max_z)
            lax = check_lax_decomposition(A, B, engine)
            runs.append({"seed": used, "objects": len(I.objects), "up": rep.to_json(), "lax": lax,
                         "ok": rep.ok and lax["ok"]})
    else:
        wb = _load(args)
        A, B = _pair(wb, args)
        rep = verify_universal_property(A, B, engine=_engine(args), max_z=args.max_z)
        lax = check_lax_decomposition(A, B, _engine(args))
        runs.append({"source": A.name, "target": B.name, "up": rep.to_json(), "lax": lax, "ok": rep.ok and lax["ok"]})
    out = {"instances": len(runs), "passed": sum(r["ok"] for r in runs), "seconds": round(time.time() - t0, 2),
           "failures": [r for r in runs if not r["ok"]][:5]}
    if not args.random:
        out["report"] = runs[0]
    if out["passed"] != len(runs):
        raise Failed(out)
    return out


def cmd_sigma(args):
    from .segal import is_strongly_segal, sigma
    wb = _load(args)
    I = wb.invcat(args.name)
    K = sigma(I)
    a, b = is_strongly_segal(I), is_strongly_segal(K)
    return {"objects_size": K.obj.sizes(), "morphisms_size": K.mor.sizes(),
            "invcat": a.to_json(), "sigma": b.to_json(), "agree": a.ok == b.ok}


def cmd_nerve(args):
    from .segal import nerve_level, sigma, sigma_nerve_decomposition
    wb = _load(args)
    I = wb.invcat(args.name)
    K = sigma(I)
    levels = {str(n): nerve_level(K, n).sizes() for n in range(args.level + 1)}
    out = {"levels": levels, "chain_decomposition": sigma_nerve_decomposition(I, args.level)}
    out["agree"] = out["chain_decomposition"] == levels[str(args.level)][0]
    if not out["agree"]:
        raise Failed(out)
    return out


def cmd_ei_check(args):
    from .segal import ei_inverse_diagnostic, sigma
    if args.group:
        from .orbit import builtin, orbit_category
        K = orbit_category(builtin(args.group), args.size_bound or 24).internal(opposite=not args.covariant)
    else:
        K = sigma(_load(args).invcat(args.name))
    return ei_inverse_diagnostic(K).to_json()


def cmd_orbit(args):
    from .orbit import builtin, cyclic, is_prime, orbit_category
    from .errors import NotPrime
    if args.p is not None:
        if not is_prime(args.p):
            raise NotPrime(f"{args.p} is not prime", value=args.p)
        G = cyclic(args.p)
    else:
        G = builtin(args.group)
    O = orbit_category(G, args.size_bound or 24)
    return O.to_json()


def cmd_cp_present(args):
    from .diagram import is_fibrant_invcat
    from .orbit import cp_presentation
    n = 3 if args.trunc is None else args.trunc
    I = cp_presentation(args.p, n)
    rep = is_fibrant_invcat(I, _engine(args))
    out = {"p": args.p, "trunc": n, "objects": list(I.objects),
           "space_sizes": {str(x): I.spaces[x].sizes() for x in I.objects},
           "hom_sizes": {f"{x}>{y}": v for (x, y), v in I.hom_sizes().items()},
           "declaration": io.invcat_to_json(I) if args.dump else None} | rep.to_json()
    if not rep:
        raise Failed(out)
    return out


def _emit_output(args, sig, comments=()):
    from .tt.syntax import show_signature, signature_to_json
    if args.format == "json":
        return {"judgments": signature_to_json(sig), "notes": list(comments)}
    return "".join(f"# {c}\n" for c in comments) + show_signature(sig)


def _simplified(args, I, sig):
    if not args.simplify:
        return sig
    from .tt.simplify import PASSES, annotations
    return PASSES[args.simplify](sig, annotations(I))


def cmd_emit_tt(args):
    from .tt.emit import emit_signature
    I = _load(args).invcat(args.name)
    order = [io.label(x) for x in args.order.split(",")] if args.order else None
    sig = emit_signature(I, args.mode, args.family, order)
    return _emit_output(args, _simplified(args, I, sig))


def cmd_emit_hom(args):
    from .tt.emit import emit_hom_type
    I = _load(args).invcat(args.name)
    sig = emit_hom_type(I, args.source_family, args.target_family)
    return _emit_output(args, _simplified(args, I, sig))


def cmd_emit_path(args):
    from .tt.emit import PATH_NOTE, emit_path_context
    sig = emit_path_context(args.mode)
    return _emit_output(args, sig, [PATH_NOTE] if args.mode == "glued" else [])


# -- wiring ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", choices=["finset", "sset"], help="base instance (overrides the file)")
    common.add_argument("--trunc", type=int, help="truncation level for sset")
    common.add_argument("--size-bound", type=int, help="cap on intermediate object sizes")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--format", choices=["json", "text"], default="text")

    p = argparse.ArgumentParser(prog="invcat", description=__doc__.splitlines()[0], epilog=EPILOG,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, file=True, optional_file=False):
        s = sub.add_parser(name, help=help, parents=[common], epilog=EPILOG,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        if file:
            s.add_argument("file", nargs="?" if optional_file else None, help="workbench JSON file")
        s.set_defaults(fn=fn)
        return s

    add("wf-check", cmd_wf_check, "check well-foundedness of declared relations and precedence orders")
    s = add("check-invcat", cmd_check_invcat, "validate an inverse category and test fibrancy")
    s.add_argument("--name")
    s = add("check-diagram", cmd_check_diagram, "validate a diagram and test Reedy fibrancy")
    s.add_argument("--diagram")
    s = add("matching", cmd_matching, "matching objects of a diagram")
    s.add_argument("--diagram")
    s.add_argument("--object")
    for name, fn, hlp in (("hom", cmd_hom, "hom-object of two diagrams"),
                          ("verify-up", cmd_verify_up, "check hom-objects against the enumeration oracle")):
        s = add(name, fn, hlp, optional_file=(name == "verify-up"))
        s.add_argument("--source")
        s.add_argument("--target")
        if name == "verify-up":
            s.add_argument("--random", type=int, default=0, help="number of random instances")
            s.add_argument("--max-z", type=int, default=3, help="largest test set Z")
    s = add("sigma", cmd_sigma, "the internal category assembled from an inverse category")
    s.add_argument("--name")
    s = add("nerve", cmd_nerve, "nerve levels of that internal category")
    s.add_argument("--name")
    s.add_argument("--level", type=int, default=2)
    s = add("ei-check", cmd_ei_check, "EI and inverse-EI diagnostics", optional_file=True)
    s.add_argument("--name")
    s.add_argument("--group", help="use the opposite orbit category of a built-in group")
    s.add_argument("--covariant", action="store_true", help="with --group, use the orbit category itself")
    s = add("orbit", cmd_orbit, "orbit category of a finite group", file=False)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--p", type=int, help="cyclic group of prime order p")
    g.add_argument("--group", help="built-in group: C<n>, S<n>, D<n>")
    s = add("cp-present", cmd_cp_present, "explicit presentation of the opposite orbit category of C_p", file=False)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--dump", action="store_true", help="include the presentation as a workbench declaration")
    s = add("emit-tt", cmd_emit_tt, "type theory signature of an inverse category or its diagrams")
    s.add_argument("--name")
    s.add_argument("--mode", choices=["invcat", "diagram", "matching", "reedy"], default="invcat")
    s.add_argument("--family", default="A")
    s.add_argument("--order", help="comma-separated object order (must extend the precedence)")
    s.add_argument("--simplify", choices=["units-and-booleans"])
    s = add("emit-hom", cmd_emit_hom, "type of diagram maps")
    s.add_argument("--name")
    s.add_argument("--source-family", default="A")
    s.add_argument("--target-family", default="B")
    s.add_argument("--simplify", choices=["units-and-booleans"])
    s = add("emit-path", cmd_emit_path, "path-object contexts", file=False)
    s.add_argument("--mode", choices=["base", "glued"], default="base")
    return p


def _print(report, fmt, stream):
    if isinstance(report, str):
        stream.write(report)
        return
    if fmt == "json":
        stream.write(json.dumps(_jsonable(report), indent=2, ensure_ascii=False) + "\n")
        return
    for k, v in report.items():
        if v is None:
            continue
        val = json.dumps(_jsonable(v), ensure_ascii=False) if isinstance(v, (dict, list, tuple)) else v
        stream.write(f"{k}: {val}\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.fn(args)
    except Failed as f:
        _print(f.report, args.format, sys.stdout)
        return 1
    except InvcatError as exc:
        err = exc.__cause__ if isinstance(exc, StepFailure) and isinstance(exc.__cause__, InvcatError) else exc
        sys.stderr.write(json.dumps(_jsonable(err.to_json()), ensure_ascii=False) + "\n")
        return 1 if isinstance(err, CheckFailure) else 2
    except (OSError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(json.dumps({"error": "input_error", "message": f"{type(exc).__name__}: {exc}"}) + "\n")
        return 2
    _print(report, args.format, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
