import random

import pytest

from conftest import FIXTURES
from invcat import wf
from invcat.base import presheaf as ps
from invcat.base.instances import SSetBase
from invcat.diagram import Component, Diagram, reindex, validate_diagram
from invcat.errors import SizeBoundExceeded
from invcat.hom import HomEngine, check_lax_decomposition, hom_object
from invcat.inverse import trivial
from invcat.io import load_spec
from invcat.oracle import CorruptedHom, enumerate_maps, map_key, verify_universal_property
from invcat.random_instances import oracle_sized_instance, random_instance


def point_diagram(I, obj):
    x = I.objects[0]
    one = I.spaces[x]
    return validate_diagram(Diagram(I, one, {x: Component(obj, ps.to_terminal(obj), ps.to_terminal(obj))}, {}))


def test_one_object_hom_counts_functions():
    ws = load_spec(FIXTURES / "one_obj_2_3.json")
    H = hom_object(ws.diagram("A"), ws.diagram("B"))
    assert H.carrier.sizes() == (9,)


def test_two_chain_hom_matches_enumeration():
    ws = load_spec(FIXTURES / "two_chain.json")
    A, B = ws.diagram("A"), ws.diagram("B")
    H = hom_object(A, B)
    assert len(H.carrier.levels[0]) == 2
    assert verify_universal_property(A, B, hom=H, max_z=2)


def test_hom_into_nerve_is_the_nerve():
    base = SSetBase(3)
    I = trivial(wf.chain("x"), base)
    BG = ps.group_nerve([0, 1], lambda a, b: (a + b) % 2, 0, 3)
    A = point_diagram(I, base.terminal())
    B = point_diagram(I, BG)
    H = hom_object(A, B)
    assert H.carrier.sizes() == (1, 2, 4, 8)


def test_empty_category_hom_is_the_product_of_bases():
    ws = load_spec(FIXTURES / "empty.json")
    I = ws.invcat("I")
    X, Y = ps.finset(["a", "b"]), ps.finset(["c", "d", "e"])
    H = hom_object(Diagram(I, X, {}, {}), Diagram(I, Y, {}, {}))
    assert H.carrier.sizes() == (6,)


@pytest.mark.parametrize("seed", range(15))
def test_lax_decomposition(seed):
    I, A, B = random_instance(seed)
    assert check_lax_decomposition(A, B)["ok"]


@pytest.mark.parametrize("seed", range(8))
def test_universal_property_on_random_instances(seed):
    I, A, B, _ = oracle_sized_instance(seed)
    report = verify_universal_property(A, B, max_z=2)
    assert report, report.violations


@pytest.mark.parametrize("seed", range(10))
def test_classify_unclassify_round_trip(seed):
    I, A, B = random_instance(seed)
    H = hom_object(A, B)
    k = ps.identity(H.carrier)
    phi = H.unclassify(k)
    assert H.classify_map(phi, H.leg_first, H.leg_second) == k


@pytest.mark.parametrize("seed", range(10))
def test_witnesses_are_the_enumerated_maps(seed):
    I, A, B = random_instance(seed)
    H = hom_object(A, B)
    one = ps.finset(["*"])
    count = 0
    for x0 in A.gamma.levels[0]:
        for y0 in B.gamma.levels[0]:
            p = ps.finmap(one, A.gamma, {"*": x0})
            q = ps.finmap(one, B.gamma, {"*": y0})
            count += len(enumerate_maps(reindex(A, p), reindex(B, q)))
    assert count == len(H.carrier.levels[0])


def test_corrupted_carrier_is_detected():
    ws = load_spec(FIXTURES / "one_obj_2_3.json")
    A, B = ws.diagram("A"), ws.diagram("B")
    H = hom_object(A, B)
    bad = CorruptedHom(H, [H.carrier.levels[0][0]])
    report = verify_universal_property(A, B, hom=bad, max_z=1)
    assert not report
    assert report.violations[0]["kind"] in ("fibre-mismatch", "count")


def test_size_bound():
    ws = load_spec(FIXTURES / "one_obj_2_3.json")
    with pytest.raises(SizeBoundExceeded):
        hom_object(ws.diagram("A"), ws.diagram("B"), HomEngine(size_bound=4))


def test_engine_caches_homs():
    ws = load_spec(FIXTURES / "two_chain.json")
    eng = HomEngine()
    A, B = ws.diagram("A"), ws.diagram("B")
    assert hom_object(A, B, eng) is hom_object(A, B, eng)


@pytest.mark.parametrize("seed", range(10))
def test_endomorphisms_compose_associatively(seed):
    rng = random.Random(seed)
    I, A, B = random_instance(seed)
    H = hom_object(A, A)
    x0 = A.gamma.levels[0][0]
    fibre = H.fibre(x0, x0)
    table = {r: {y: {a: H.apply(y, 0, a, r) for a in H.fibre_A(y, 0, x0)} for y in H.order} for r in fibre}
    by_witness = {map_key(f): r for r, f in table.items()}

    def comp(r, s):
        f, g = table[r], table[s]
        return by_witness[map_key({y: {a: f[y][g[y][a]] for a in g[y]} for y in g})]

    for _ in range(10):
        r, s, t = (rng.choice(fibre) for _ in range(3))
        assert comp(comp(r, s), t) == comp(r, comp(s, t))
    ident = by_witness[map_key({y: {a: a for a in d} for y, d in table[fibre[0]].items()})]
    assert all(comp(ident, r) == r == comp(r, ident) for r in fibre)


@pytest.mark.parametrize("seed", range(30))
def test_hom_leg_onto_for_fibrant_diagrams(seed):
    from invcat.base.instances import FinSetBase
    from invcat.random_instances import random_diagram, random_invcat, random_set
    rng = random.Random(seed)
    I = random_invcat(rng, rng.randint(1, 3), fibrant=True)
    A = random_diagram(rng, I, random_set(rng, 1, 2, "x"), 2, fibrant=True)
    B = random_diagram(rng, I, random_set(rng, 1, 2, "y"), 2, fibrant=True)
    assert FinSetBase().is_fibration(hom_object(A, B).leg)
