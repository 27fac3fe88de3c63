import random

import pytest

from conftest import FIXTURES
from invcat.base import presheaf as ps
from invcat.io import load_spec
from invcat.orbit import builtin, orbit_category
from invcat.random_instances import random_invcat, random_sset_invcat
from invcat.segal import (
    components, ei_inverse_diagnostic, from_category, is_strongly_segal, nerve_level, sigma,
    sigma_nerve_decomposition,
)


def test_sigma_of_two_chain():
    I = load_spec(FIXTURES / "two_chain.json").invcat("I")
    K = sigma(I)
    # two identities and the two arrows y -> x
    assert len(K.obj.levels[0]) == 2
    assert len(K.mor.levels[0]) == 4


def test_nerve_of_two_chain_at_level_two():
    I = load_spec(FIXTURES / "two_chain.json").invcat("I")
    assert len(nerve_level(sigma(I), 2).levels[0]) == 6
    assert sigma_nerve_decomposition(I, 2) == 6


@pytest.mark.parametrize("seed", range(30))
def test_nerve_matches_decomposition(seed):
    rng = random.Random(seed)
    I = random_invcat(rng, rng.randint(1, 3))
    K = sigma(I)
    for n in range(4):
        assert len(nerve_level(K, n).levels[0]) == sigma_nerve_decomposition(I, n)


@pytest.mark.parametrize("seed", range(50))
def test_sset_strongly_segal_agrees_with_sigma(seed):
    rng = random.Random(seed)
    I = random_sset_invcat(rng, rng.randint(1, 3))
    assert bool(is_strongly_segal(I)) == bool(is_strongly_segal(sigma(I)))


@pytest.mark.parametrize("seed", range(50))
def test_finset_strongly_segal_passes_to_sigma(seed):
    rng = random.Random(seed)
    I = random_invcat(rng, rng.randint(1, 3))
    if is_strongly_segal(I):
        assert is_strongly_segal(sigma(I))


def test_identity_summands_hide_a_missing_leg():
    # one arrow y -> x over a two-point I(x) that misses a point: the hom leg is not onto
    I = load_spec(FIXTURES / "mutations" / "nonsurjective_leg.json").invcat("I")
    assert not is_strongly_segal(I)
    assert is_strongly_segal(sigma(I))


def test_report_json():
    I = load_spec(FIXTURES / "two_chain.json").invcat("I")
    js = is_strongly_segal(I).to_json()
    assert js["strongly_segal"] is True and js["failed"] == []


def test_orbit_category_is_inverse_ei():
    K = orbit_category(builtin("C3")).internal(opposite=True)
    report = ei_inverse_diagnostic(K)
    assert report.is_ei
    assert report.precedence is not None
    assert report.to_json()["inverse_EI"]


def test_non_ei_category_is_detected():
    # a monoid {1, e} with e idempotent: e is a non-invertible endomorphism
    K = from_category(["*"], {"1": ("*", "*"), "e": ("*", "*")},
                      {("1", "1"): "1", ("1", "e"): "e", ("e", "1"): "e", ("e", "e"): "e"}, {"*": "1"})
    report = ei_inverse_diagnostic(K)
    assert not report.is_ei
    assert report.non_invertible_endos == ["e"]


def test_cycle_between_components_is_reported():
    # two objects with arrows both ways that are not inverse
    arrows = {"1a": ("a", "a"), "1b": ("b", "b"), "f": ("a", "b"), "g": ("b", "a"),
              "ea": ("a", "a"), "eb": ("b", "b")}
    table = {}
    ident = {"a": "1a", "b": "1b"}
    for name, (s, t) in arrows.items():
        table[(ident[s], name)] = name
        table[(name, ident[t])] = name
    table.update({("f", "g"): "ea", ("g", "f"): "eb", ("ea", "ea"): "ea", ("eb", "eb"): "eb",
                  ("ea", "f"): "f", ("f", "eb"): "f", ("eb", "g"): "g", ("g", "ea"): "g"})
    K = from_category(["a", "b"], arrows, table, ident)
    report = ei_inverse_diagnostic(K)
    assert not report.is_ei
    assert report.cycle is not None and report.precedence is None


def test_components_of_boundary():
    assert len(set(components(ps.boundary(1, 2)).values())) == 2
    assert len(set(components(ps.representable(1, 2)).values())) == 1


@pytest.mark.parametrize("seed", range(30))
def test_ei_shadow_of_sigma_recovers_precedence(seed):
    from invcat import wf
    rng = random.Random(seed)
    I = random_invcat(rng, rng.randint(1, 4), max_space=1, fibrant=True)
    report = ei_inverse_diagnostic(sigma(I))
    assert report.is_ei and report.precedence is not None
    point = {x: (x, I.spaces[x].levels[0][0]) for x in I.objects}
    inhabited = [(point[y], point[x]) for (x, y), span in I.homs.items() if span.obj.levels[0]]
    expected = wf.check_well_founded(inhabited, elements=[point[x] for x in I.objects])
    assert report.precedence.lt == expected.lt
