import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from invcat import closure
from invcat.base import presheaf as ps
from invcat.base.instances import FinSetBase, SSetBase, kan_check
from invcat.errors import NonCommutingDiagram, SimplicialIdentityError

N = 3


def boundary(n=N):
    D = ps.representable(1, n)
    keep = [[a for a in lv if len(set(a)) == 1] for lv in D.levels]
    return ps.subobject(D, keep)


def nerve_c2(n=N):
    return ps.group_nerve([0, 1], lambda a, b: (a + b) % 2, 0, n)


def sets(rng, lo, hi, prefix):
    return ps.finset([f"{prefix}{i}" for i in range(rng.randint(lo, hi))])


# -- Kan examples -------------------------------------------------------------

def test_boundary_inclusion_is_not_kan():
    dD = boundary()
    v = kan_check(ps.inclusion(dD, ps.representable(1, N)))
    assert not v
    assert v.witness["dim"] == 1


def test_boundary_is_kan():
    assert kan_check(ps.to_terminal(boundary()))


def test_nerve_of_c2_is_kan():
    assert kan_check(ps.to_terminal(nerve_c2()))
    assert nerve_c2().sizes() == (1, 2, 4, 8)


def test_one_simplex_is_not_kan():
    assert not kan_check(ps.to_terminal(ps.representable(1, N)))


def test_identity_and_iso_are_kan():
    X = nerve_c2()
    assert kan_check(ps.identity(X))


def test_pullback_of_kan_fibration_is_kan():
    # BC2 x D[1] -> D[1] is the pullback of BC2 -> pt along D[1] -> pt
    pb = ps.pullback(ps.to_terminal(nerve_c2(2)), ps.to_terminal(ps.representable(1, 2)))
    assert kan_check(pb.p2)


def test_dependent_product_of_kan_fibrations_is_kan():
    n = 2
    dD = boundary(n)
    g = ps.product(nerve_c2(n), dD).p2
    pi = ps.dep_product(ps.to_terminal(dD), g)
    assert pi.obj.sizes() == (1, 4, 16)  # BC2 x BC2
    assert kan_check(pi.leg)


def test_simplicial_identity_violation_is_rejected():
    D = ps.representable(1, 1)
    faces = {k: dict(v) for k, v in D.faces.items()}
    faces[(1, 0)][(0, 1)] = (0,)  # d0 of the edge should be the vertex 1
    faces[(1, 1)][(0, 0)] = (1,)
    with pytest.raises(SimplicialIdentityError):
        ps.Presheaf(D.levels, faces, D.degens)


# -- finite limits --------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_pullback_universal_property(seed):
    rng = random.Random(seed)
    A, B, C = sets(rng, 1, 4, "a"), sets(rng, 1, 4, "b"), sets(rng, 1, 3, "c")
    f = closure._random_map(rng, A, C)
    g = closure._random_map(rng, B, C)
    pb = ps.pullback(f, g)
    assert len(pb.obj.levels[0]) == sum(
        1 for a in A.levels[0] for b in B.levels[0] if f.at0(a) == g.at0(b))
    assert ps.compose(f, pb.p1) == ps.compose(g, pb.p2)
    u = pb.pair(pb.p1, pb.p2)
    assert u == ps.identity(pb.obj)


def test_pair_rejects_non_commuting_cone():
    A, C = ps.finset(["a"]), ps.finset(["c0", "c1"])
    f = ps.finmap(A, C, {"a": "c0"})
    g = ps.finmap(A, C, {"a": "c1"})
    pb = ps.pullback(f, g)
    with pytest.raises(NonCommutingDiagram):
        pb.pair(ps.identity(A), ps.identity(A))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_pullback_of_surjection_is_surjection(seed):
    rng = random.Random(seed)
    A, B, C = sets(rng, 3, 5, "a"), sets(rng, 1, 4, "b"), sets(rng, 1, 3, "c")
    f = closure._random_map(rng, A, C, onto=True)
    g = closure._random_map(rng, B, C)
    assert FinSetBase().is_fibration(ps.pullback(f, g).p2)


def test_limit_of_empty_family_needs_a_level():
    from invcat.errors import CompositionMismatch
    with pytest.raises(CompositionMismatch):
        ps.limit({}, [])


# -- dependent products ---------------------------------------------------------

def _random_pair(rng):
    Z = sets(rng, 1, 3, "z")
    Y = sets(rng, 0, 4, "y")
    X = sets(rng, 0, 5, "x")
    f = closure._random_map(rng, Y, Z)
    g = closure._random_map(rng, X, Y) if Y.levels[0] else ps.from_empty(Y) if not X.levels[0] else None
    if g is None:
        X = ps.finset([])
        g = ps.from_empty(Y)
    return X, Y, Z, f, g


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_dependent_product_counts_sections(seed):
    rng = random.Random(seed)
    X, Y, Z, f, g = _random_pair(rng)
    pi = ps.dep_product(f, g)
    for z in Z.levels[0]:
        expected = 1
        for y in Y.levels[0]:
            if f.at0(y) == z:
                expected *= sum(1 for x in X.levels[0] if g.at0(x) == y)
        assert len(pi.leg.fibre(0, z)) == expected


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_dependent_product_adjunction(seed):
    rng = random.Random(seed)
    X, Y, Z, f, g = _random_pair(rng)
    W = sets(rng, 1, 3, "w")
    h = closure._random_map(rng, W, Z)
    pb = ps.pullback(h, f)
    # count maps pb -> X over Y and maps W -> Pi over Z; transpose must biject them
    options = [[x for x in X.levels[0] if g.at0(x) == e[1]] for e in pb.obj.levels[0]]
    pi = ps.dep_product(f, g)
    seen = set()
    for choice in itertools.product(*options):
        t = ps.finmap(pb.obj, X, dict(zip(pb.obj.levels[0], choice)))
        T = pi.transpose(h, t, pb)
        assert ps.compose(pi.leg, T) == h
        for (w, y) in pb.obj.levels[0]:
            assert pi.evaluate(0, T.at0(w), y) == t.at0((w, y))
        seen.add(T)
    n_maps = 1
    for w in W.levels[0]:
        n_maps *= len(pi.leg.fibre(0, h.at0(w)))
    assert len(seen) == n_maps


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_beck_chevalley(seed):
    rng = random.Random(seed)
    X, Y, Z, f, g = _random_pair(rng)
    W = sets(rng, 1, 3, "w")
    h = closure._random_map(rng, W, Z)
    pi = ps.dep_product(f, g)
    pbY = ps.pullback(h, f)                      # W x_Z Y -> W
    pbX = ps.pullback(pbY.p2, g)                 # (W x_Z Y) x_Y X
    pi2 = ps.dep_product(pbY.p1, pbX.p1)
    for w in W.levels[0]:
        assert len(pi2.leg.fibre(0, w)) == len(pi.leg.fibre(0, h.at0(w)))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_dependent_product_preserves_surjections(seed):
    rng = random.Random(seed)
    Z = sets(rng, 1, 3, "z")
    Y = sets(rng, len(Z.levels[0]), 4, "y")
    X = sets(rng, len(Y.levels[0]), 5, "x")
    f = closure._random_map(rng, Y, Z, onto=True)
    g = closure._random_map(rng, X, Y, onto=True)
    assert FinSetBase().is_fibration(ps.dep_product(f, g).leg)


def test_exponential_applies_pointwise():
    P = ps.finset(["p"])
    A = ps.finset(["a0", "a1"])
    B = ps.finset(["b0", "b1", "b2"])
    E = ps.Exponential(ps.finmap(A, P, {"a0": "p", "a1": "p"}), ps.finmap(B, P, {b: "p" for b in B.levels[0]}))
    assert len(E.obj.levels[0]) == 9
    values = {tuple(E.apply(0, e, a) for a in A.levels[0]) for e in E.obj.levels[0]}
    assert len(values) == 9


@pytest.mark.parametrize("seed", range(300))
def test_tower_sections_lift(seed):
    assert closure.check_tower(seed) is None


def test_sset_base_uses_truncation():
    base = SSetBase(2)
    assert base.trunc == 2
    assert base.is_fibrant(nerve_c2(2))
