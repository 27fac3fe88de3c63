import random

import pytest

from conftest import FIXTURES
from invcat import wf
from invcat.base import presheaf as ps
from invcat.base.instances import FinSetBase
from invcat.diagram import is_fibrant_invcat, profile
from invcat.errors import (
    AssocFailure, InvalidProfile, LabelClash, MissingComposite, NonCommutingDiagram, NotAMap, UnknownLabel,
)
from invcat.inverse import InvCat, Span, collage_extend, from_ordinary, trivial, validate
from invcat.io import load_spec
from invcat.random_instances import random_invcat


def chain_category():
    """x < y < z with two arrows y -> x, one z -> y and the composites."""
    P = wf.chain("x", "y", "z")
    arrows = {("y", "x"): ["f", "g"], ("z", "y"): ["h"], ("z", "x"): ["fh", "gh"]}
    compose = {("h", "f"): "fh", ("h", "g"): "gh"}
    return from_ordinary(P, arrows, compose)


def test_ordinary_category_embeds():
    I = chain_category()
    assert I.hom_sizes()[("z", "x")] == (2,)
    assert I.comp[("z", "y", "x")].at0(("h", "f")) == "fh"


def test_trivial_category_is_fibrant():
    I = trivial(wf.chain("a", "b", "c"))
    assert is_fibrant_invcat(I)


def test_missing_hom_span():
    I = chain_category()
    homs = dict(I.homs)
    del homs[("z", "x")]
    with pytest.raises(MissingComposite):
        validate(I.base, I.poset, I.spaces, homs, I.comp)


def test_hom_span_for_unrelated_pair():
    I = chain_category()
    homs = dict(I.homs)
    homs[("x", "z")] = I.homs[("z", "x")]
    with pytest.raises(UnknownLabel):
        validate(I.base, I.poset, I.spaces, homs, I.comp)


def test_composite_must_respect_legs():
    # an inverse category with a nontrivial space: composite that moves the endpoint
    base = FinSetBase()
    P = wf.chain("x", "y", "z")
    two = ps.finset(["p", "q"])
    one = base.terminal()
    spaces = {"x": two, "y": one, "z": one}
    hyx = Span(two, ps.to_terminal(two), ps.identity(two))
    hzy = Span(one, ps.identity(one), ps.identity(one))
    hzx = Span(two, ps.to_terminal(two), ps.identity(two))
    I = InvCat(base, P, spaces, {("y", "x"): hyx, ("z", "y"): hzy, ("z", "x"): hzx}, {})
    dom = I.comp_domain("z", "y", "x")
    swap = {(a, b): ("q" if b == "p" else "p") for (a, b) in dom.obj.levels[0]}
    bad = ps.finmap(dom.obj, two, swap)
    with pytest.raises(NonCommutingDiagram):
        validate(base, P, spaces, I.homs, {("z", "y", "x"): bad})


def test_mutation_broken_associativity():
    with pytest.raises(AssocFailure) as exc:
        load_spec(FIXTURES / "mutations" / "broken_associativity.json").invcat("I")
    assert "chain" in exc.value.certificate


def test_mutation_deleted_hom_element():
    with pytest.raises(NotAMap) as exc:
        load_spec(FIXTURES / "mutations" / "deleted_hom_element.json").invcat("I")
    assert "composite" in exc.value.certificate.get("condition", "")


def test_mutation_nonsurjective_leg():
    I = load_spec(FIXTURES / "mutations" / "nonsurjective_leg.json").invcat("I")
    report = is_fibrant_invcat(I)
    assert not report
    assert report.to_json()["failed"][0]["condition"] == "profile Reedy fibrant"


def test_slices_are_cached_and_down_closed():
    I = chain_category()
    S = I.slice("strict", "z")
    assert set(S.objects) == {"x", "y"}
    assert I.slice("strict", "z") is S
    assert S.slice("lax", "y") is I.slice("lax", "y")
    with pytest.raises(UnknownLabel):
        I.slice("strict", "nope")


def test_collage_recovers_profile():
    I = chain_category()
    J = I.slice("strict", "z")
    K = collage_extend(J, "z", I.spaces["z"], profile(I, "z"))
    assert K.same(I)


def test_collage_rejects_clash_and_bad_profile():
    I = chain_category()
    J = I.slice("strict", "z")
    with pytest.raises(LabelClash):
        collage_extend(J, "x", I.spaces["z"], profile(I, "z"))
    with pytest.raises(InvalidProfile):
        collage_extend(J, "z", ps.finset(["other"]), profile(I, "z"))


@pytest.mark.parametrize("seed", range(40))
def test_random_collages_are_valid(seed):
    rng = random.Random(seed)
    I = random_invcat(rng, rng.randint(1, 4))
    top = max(I.objects, key=lambda x: len(I.poset.below(x)))
    J = I.slice("strict", top)
    K = collage_extend(J, top, I.spaces[top], profile(I, top))
    assert K.same(I.full_subcategory(J.objects + (top,)))


@pytest.mark.parametrize("seed", range(20))
def test_fibrant_random_invcats_pass_fibrancy(seed):
    I = random_invcat(random.Random(seed), 3, fibrant=True)
    assert is_fibrant_invcat(I)
