import random

import pytest

from invcat import closure
from invcat.diagram import is_reedy_fibration
from invcat.random_instances import random_diagram, random_set


@pytest.mark.parametrize("name", sorted(closure.CHECKS))
def test_sweep_has_no_counterexamples(name):
    report = closure.run(name, seeds=25, start=1000)
    assert report, report.counterexamples[:3]


def test_default_counts_meet_minimums():
    for name in closure.CHECKS:
        assert closure.DEFAULT_COUNTS.get(name, 100) >= 100
    assert closure.DEFAULT_COUNTS["tower"] >= 300
    assert closure.DEFAULT_COUNTS["levelwise"] >= 200


def test_levelwise_check_is_not_vacuous():
    # without the fibration hypothesis, maps that fail to be onto do turn up
    misses = 0
    for s in range(60):
        rng = random.Random(s)
        I = closure._invcat(rng)
        G = random_set(rng, 1, 2, "g")
        B = random_diagram(rng, I, G, 2, fibrant=True)
        A, f = random_diagram(rng, I, G, 2, over=B)
        if not is_reedy_fibration(f):
            misses += any(not closure._surjective(f.comps[x]) for x in I.objects)
    assert misses > 0


def test_tower_check_is_not_vacuous():
    # g not onto: pushing sections forward can miss
    from invcat.base import presheaf as ps
    X, Y, Z, W = ps.finset(["x"]), ps.finset(["y0", "y1"]), ps.finset(["z"]), ps.finset(["w"])
    g = ps.finmap(X, Y, {"x": "y0"})
    h = ps.finmap(Y, Z, {"y0": "z", "y1": "z"})
    k = ps.finmap(Z, W, {"z": "w"})
    src, tgt = ps.dep_product(k, ps.compose(h, g)), ps.dep_product(k, h)
    assert not closure._surjective(closure.postcompose_sections(src, tgt, g))
