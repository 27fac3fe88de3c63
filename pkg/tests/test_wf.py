import random

import pytest
from hypothesis import given, settings, strategies as st

from invcat import wf
from invcat.errors import CycleFound, DuplicateLabel, StepFailure, UnknownLabel
from invcat.random_instances import random_poset


def nested(x, below):
    return (x, tuple(sorted(below.items(), key=lambda kv: str(kv[0]))))


def test_cycle_is_reported_as_a_closed_path():
    pairs = [("a", "b"), ("b", "c"), ("c", "a"), ("c", "d")]
    with pytest.raises(CycleFound) as exc:
        wf.check_well_founded(pairs)
    path = exc.value.path
    assert path[0] == path[-1]
    assert all(p in pairs for p in zip(path, path[1:]))


def test_self_loop_is_a_cycle():
    with pytest.raises(CycleFound):
        wf.check_well_founded([("a", "a")])


def test_duplicate_and_unknown_labels():
    with pytest.raises(DuplicateLabel):
        wf.check_well_founded([], elements=["a", "a"])
    with pytest.raises(UnknownLabel):
        wf.check_well_founded([("a", "z")], elements=["a"])


def test_transitive_closure_and_covers():
    P = wf.chain("a", "b", "c")
    assert P.precedes("a", "c")
    assert ("a", "c") not in P.covers()
    assert set(P.below("c")) == {"a", "b"}
    assert P.minimal() == ("a",) and P.maximal() == ("c",)


def test_json_round_trip():
    P = wf.check_well_founded([("a", "b"), ("a", "c")], elements=["a", "b", "c", "d"])
    Q = wf.WfPoset.from_json(P.to_json())
    assert Q.lt == P.lt and set(Q.elements) == set(P.elements)


def test_all_linear_extensions_of_antichain():
    P = wf.check_well_founded([], elements=["a", "b", "c"])
    assert len(list(P.topological_orders())) == 6


def test_order_must_respect_precedence():
    P = wf.chain("a", "b")
    with pytest.raises(UnknownLabel):
        wf.recurse(P, nested, order=["b", "a"])


def test_step_failure_names_the_element():
    P = wf.chain("a", "b")

    def step(x, below):
        if x == "b":
            raise ValueError("boom")
        return 0

    with pytest.raises(StepFailure) as exc:
        wf.recurse(P, step)
    assert exc.value.element == "b"


def test_cocone_components_only_for_predecessors():
    P = wf.chain("a", "b")
    vals, comps = wf.recurse_section(P, lambda x, below: wf.Cocone(x, {y: (y, x) for y in below}))
    assert comps == {("a", "b"): ("a", "b")}
    with pytest.raises(StepFailure):
        wf.recurse_section(P, lambda x, below: wf.Cocone(x, {"zz": 1}))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 8))
def test_recursion_independent_of_order(seed, size):
    rng = random.Random(seed)
    P = random_poset(rng, size)
    first = wf.recurse(P, nested)
    other = wf.recurse(P, nested, order=wf.random_topological_order(P, rng))
    assert first == other


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 8))
def test_random_order_is_a_linear_extension(seed, size):
    rng = random.Random(seed)
    P = random_poset(rng, size)
    order = wf.random_topological_order(P, rng)
    pos = {x: i for i, x in enumerate(order)}
    assert sorted(order) == sorted(P.elements)
    assert all(pos[y] < pos[x] for (y, x) in P.lt)
