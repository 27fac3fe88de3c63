"""Acceptance criteria 1-9; each test prints one PASS/FAIL line."""
import random
import time

import pytest

from conftest import FIXTURES, GOLDEN, golden_index, run_cli
from invcat import closure, wf
from invcat.diagram import is_fibrant_invcat
from invcat.errors import AssocFailure, NotAMap
from invcat.hom import HomEngine, check_lax_decomposition
from invcat.io import load_spec
from invcat.oracle import verify_universal_property
from invcat.orbit import cp_presentation, cyclic, orbit_category
from invcat.random_instances import oracle_sized_instance, random_invcat, random_poset, random_sset_invcat
from invcat.segal import is_strongly_segal, sigma
from invcat.tt import alpha_equal, parse_signature


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail, seconds):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({seconds:.2f}s) {detail}")
    return emit


@pytest.fixture(scope="module")
def up_results():
    """Criterion 3 and 4 share one run over the same instances."""
    t = time.perf_counter()
    rows = []
    for seed in range(50):
        I, A, B, used = oracle_sized_instance(seed)
        eng = HomEngine()
        up = verify_universal_property(A, B, max_z=3, engine=eng)
        lax = check_lax_decomposition(A, B, eng)
        rows.append((used, up, lax))
    return rows, time.perf_counter() - t


def test_criterion_1_orbit_table(report):
    t = time.perf_counter()
    bad = []
    for p in (2, 3, 5):
        table = orbit_category(cyclic(p)).hom_table()
        want = {("G/e", "G/e"): p, ("G/G", "G/e"): 0, ("G/e", "G/G"): 1, ("G/G", "G/G"): 1}
        if table != want:
            bad.append((p, table))
    dt = time.perf_counter() - t
    ok = not bad and dt < 1
    report(1, ok, f"p in 2,3,5; mismatches {bad}", dt)
    assert ok


def test_criterion_2_golden_signatures(report):
    t = time.perf_counter()
    bad = []
    index = golden_index()
    for name, argv in index.items():
        code, out, err = run_cli(*argv)
        if code != 0 or not alpha_equal(parse_signature(out), parse_signature((GOLDEN / f"{name}.tt").read_text())):
            bad.append(name)
    dt = time.perf_counter() - t
    ok = not bad and dt < 1
    report(2, ok, f"{len(index) - len(bad)}/{len(index)} fixtures alpha-equal; differing {bad}", dt)
    assert ok


def test_criterion_3_universal_property(report, up_results):
    rows, dt = up_results
    bad = [(seed, up.violations[:1]) for seed, up, _ in rows if not up]
    maps = sum(up.checked_maps for _, up, _ in rows)
    ok = len(rows) >= 50 and not bad and dt < 120
    report(3, ok, f"{len(rows)} instances, {maps} named maps checked, failures {bad}", dt)
    assert ok


def test_criterion_4_lax_decomposition(report, up_results):
    rows, dt = up_results
    bad = [(seed, lax) for seed, _, lax in rows if not lax["ok"]]
    ok = not bad
    report(4, ok, f"{len(rows)} instances, failures {bad}", dt)
    assert ok


def test_criterion_5_closure_suite(report):
    t = time.perf_counter()
    results = {name: closure.run(name) for name in closure.CHECKS}
    dt = time.perf_counter() - t
    summary = ", ".join(f"{n} {r.seeds - len(r.counterexamples)}/{r.seeds}" for n, r in results.items())
    ok = all(results.values()) and all(r.seeds >= 100 for r in results.values()) and dt < 120
    report(5, ok, summary, dt)
    assert ok, {n: r.counterexamples[:2] for n, r in results.items() if not r}


def _segal_agreement(make):
    disagree = []
    for seed in range(100):
        I = make(seed)
        a, b = bool(is_strongly_segal(I)), bool(is_strongly_segal(sigma(I)))
        if a != b:
            disagree.append(seed)
    return disagree


def test_criterion_6_strongly_segal(report):
    t = time.perf_counter()

    def finset(seed):
        rng = random.Random(seed)
        return random_invcat(rng, rng.randint(1, 3))

    def sset(seed):
        rng = random.Random(seed)
        return random_sset_invcat(rng, rng.randint(1, 3))

    bad_sets, bad_ssets = _segal_agreement(finset), _segal_agreement(sset)
    dt = time.perf_counter() - t
    ok = not bad_sets and not bad_ssets and dt < 60
    report(6, ok, f"finset disagreements {len(bad_sets)}/100 (first {bad_sets[:5]}), "
                  f"sset disagreements {len(bad_ssets)}/100", dt)
    assert ok


def test_criterion_7_cp_fibrancy(report):
    t = time.perf_counter()
    rows = []
    for p, n, sizes in ((2, 3, (1, 2, 4, 8)), (3, 2, (1, 3, 9))):
        I = cp_presentation(p, n)
        rep = is_fibrant_invcat(I)
        rows.append((p, n, bool(rep), I.spaces["G/e"].sizes() == sizes, I.homs[("G/G", "G/e")].obj.sizes() == sizes))
    dt = time.perf_counter() - t
    ok = all(all(r[2:]) for r in rows) and dt < 60
    report(7, ok, f"(p, n, fibrant, space sizes, hom sizes): {rows}", dt)
    assert ok


def test_criterion_8_recursion_uniqueness(report):
    t = time.perf_counter()

    def step(x, below):
        return (x, tuple(sorted(below.items(), key=lambda kv: str(kv[0]))))

    bad, distinct = [], 0
    for seed in range(200):
        rng = random.Random(seed)
        P = random_poset(rng, rng.randint(1, 8))
        first = P.topological_order()
        other = first
        for _ in range(20):
            other = wf.random_topological_order(P, rng)
            if other != first:
                break
        distinct += other != first
        if wf.recurse(P, step, order=first) != wf.recurse(P, step, order=other):
            bad.append(seed)
    dt = time.perf_counter() - t
    ok = not bad and dt < 10
    report(8, ok, f"200 posets, {distinct} with a second distinct order, mismatches {bad}", dt)
    assert ok


def test_criterion_9_mutations(report):
    t = time.perf_counter()
    got = {}
    try:
        load_spec(FIXTURES / "mutations" / "broken_associativity.json").invcat("I")
    except AssocFailure as exc:
        got["broken associativity"] = ("chain" in exc.certificate, str(exc))
    try:
        load_spec(FIXTURES / "mutations" / "deleted_hom_element.json").invcat("I")
    except NotAMap as exc:
        got["deleted hom element"] = (exc.certificate.get("condition") == "composite lands in hom", str(exc))
    rep = is_fibrant_invcat(load_spec(FIXTURES / "mutations" / "nonsurjective_leg.json").invcat("I"))
    failed = rep.to_json()["failed"]
    got["non-surjective leg"] = (not rep and failed[0]["condition"] == "profile Reedy fibrant", str(failed))
    dt = time.perf_counter() - t
    ok = len(got) == 3 and all(v[0] for v in got.values()) and dt < 10
    report(9, ok, "; ".join(f"{k}: {v[1]}" for k, v in got.items()), dt)
    assert ok
