import random

import pytest

from conftest import FIXTURES
from invcat.base import presheaf as ps
from invcat.diagram import (
    DiagramMap, compose_maps, identity_map, is_reedy_fibrant, is_reedy_fibration, matching_map,
    matching_object, profile, pullback_diagram, reindex, terminal_diagram, to_terminal_map, validate_diagram,
    validate_map,
)
from invcat.errors import AssocFailure, NonCommutingDiagram, NotAMap
from invcat.io import load_spec
from invcat.oracle import fibre_oracle
from invcat.random_instances import random_diagram, random_invcat, random_set


@pytest.fixture
def two_chain():
    return load_spec(FIXTURES / "two_chain.json")


def test_fixture_diagrams_are_valid(two_chain):
    A = two_chain.diagram("A")
    validate_diagram(A)
    validate_map(to_terminal_map(A))
    validate_map(identity_map(A))


def test_matching_object_counts_families(two_chain):
    A = two_chain.diagram("A")
    # two arrows y -> x, two elements of A_x: four families
    assert matching_object(A, "y").carrier.sizes() == (4,)
    assert matching_object(A, "x").carrier.sizes() == (1,)


def test_matching_map_lies_over_legs(two_chain):
    A = two_chain.diagram("A")
    M = matching_object(A, "y")
    m = matching_map(A, "y")
    c = A.comps["y"]
    assert ps.compose(M.leg_first, m) == c.to_space
    assert ps.compose(M.leg_second, m) == c.to_gamma


@pytest.mark.parametrize("seed", range(30))
def test_matching_object_agrees_with_enumeration(seed):
    rng = random.Random(seed)
    I = random_invcat(rng, 3)
    A = random_diagram(rng, I, random_set(rng, 1, 2, "g"), 2)
    for x in I.objects:
        M = matching_object(A, x)
        J = I.slice("strict", x)
        for u in I.spaces[x].levels[0]:
            for g in A.gamma.levels[0]:
                expected = fibre_oracle(profile(I, x), A.restrict(J), u, g)
                assert len(M.fibre(u, g)) == len(expected)


@pytest.mark.parametrize("seed", range(30))
def test_fibrant_generation_is_reedy_fibrant(seed):
    rng = random.Random(seed)
    I = random_invcat(rng, 3, fibrant=True)
    A = random_diagram(rng, I, random_set(rng, 1, 2, "g"), 2, fibrant=True)
    assert is_reedy_fibrant(A)
    assert is_reedy_fibration(to_terminal_map(A))


@pytest.mark.parametrize("seed", range(20))
def test_reindex_along_identity_and_composite(seed):
    rng = random.Random(seed)
    I = random_invcat(rng, 3)
    G = random_set(rng, 1, 3, "g")
    A = random_diagram(rng, I, G, 2)
    assert reindex(A, ps.identity(G)).sizes() == A.sizes()
    W = random_set(rng, 1, 3, "w")
    V = random_set(rng, 1, 3, "v")
    f = ps.finmap(W, G, {w: rng.choice(G.levels[0]) for w in W.levels[0]})
    h = ps.finmap(V, W, {v: rng.choice(W.levels[0]) for v in V.levels[0]})
    assert reindex(reindex(A, f), h).sizes() == reindex(A, ps.compose(f, h)).sizes()
    validate_diagram(reindex(A, f))


@pytest.mark.parametrize("seed", range(20))
def test_pullback_diagram_projections(seed):
    rng = random.Random(seed)
    I = random_invcat(rng, 3)
    G = random_set(rng, 1, 2, "g")
    C = random_diagram(rng, I, G, 2)
    A, f = random_diagram(rng, I, G, 2, over=C)
    B, g = random_diagram(rng, I, G, 2, over=C)
    P, p1, p2 = pullback_diagram(f, g)
    validate_diagram(P)
    validate_map(p1)
    validate_map(p2)
    assert compose_maps(f, p1) == compose_maps(g, p2)


def test_terminal_diagram_is_terminal(two_chain):
    A = two_chain.diagram("A")
    T = terminal_diagram(A.invcat, A.gamma)
    validate_diagram(T)
    assert is_reedy_fibrant(T, prefibration=True)


def test_non_commuting_map_is_rejected(two_chain):
    A = two_chain.diagram("A")
    comps = dict(identity_map(A).comps)
    # swap the two elements of A_x; the actions out of A_y no longer commute
    Ax = A.comps["x"].obj
    a0, a1 = Ax.levels[0]
    comps["x"] = ps.finmap(Ax, Ax, {a0: a1, a1: a0})
    with pytest.raises((NonCommutingDiagram, NotAMap)):
        validate_map(DiagramMap(A, A, comps))


def test_broken_action_is_rejected():
    rng = random.Random(3)
    I = load_spec(FIXTURES / "three_chain.json").invcat("I")
    A = random_diagram(rng, I, ps.finset(["*"]), 3, fibrant=True)
    act = A.actions[("z", "x")]
    level = dict(act.comps[0])
    targets = A.comps["x"].obj.levels[0]
    key = next(iter(level))
    others = [t for t in targets if t != level[key]]
    if not others:
        pytest.skip("no alternative action value")
    level[key] = others[0]
    A.actions[("z", "x")] = ps.PMap(act.src, act.tgt, [level], check=False)
    with pytest.raises((AssocFailure, NonCommutingDiagram)):
        validate_diagram(A)
