import json

import pytest

from conftest import FIXTURES
from invcat.errors import DuplicateLabel, SimplicialIdentityError, SpecSyntaxError, UnresolvedName
from invcat.io import dumps, label, load_spec, parse_spec, unlabel, workbench_to_json

WORKBENCHES = sorted(p.name for p in FIXTURES.glob("*.json"))


@pytest.mark.parametrize("name", WORKBENCHES)
def test_workbench_round_trip(name):
    wb = load_spec(FIXTURES / name)
    again = parse_spec(dumps(workbench_to_json(wb)))
    assert set(again.invcats) == set(wb.invcats)
    for k, I in wb.invcats.items():
        assert again.invcats[k].same(I)
    for k, A in wb.diagrams.items():
        assert again.diagrams[k].same(A)


def test_labels_round_trip():
    v = ("a", (1, "b"), 2)
    assert label(json.loads(json.dumps(unlabel(v)))) == v


def test_empty_file_reports_first_position():
    with pytest.raises(SpecSyntaxError) as exc:
        parse_spec("")
    assert (exc.value.certificate["line"], exc.value.certificate["column"]) == (1, 1)


def test_syntax_error_position():
    with pytest.raises(SpecSyntaxError) as exc:
        parse_spec('{\n  "base": "finset",\n  "objects": {,}\n}')
    assert exc.value.certificate["line"] == 3


def test_duplicate_keys_are_rejected():
    with pytest.raises(DuplicateLabel):
        parse_spec('{"objects": {"X": {"elements": [1]}, "X": {"elements": [2]}}}')


def test_unresolved_reference():
    text = json.dumps({"invcats": {"I": {"objects": ["x"], "spaces": {"x": "Nope"}}}})
    with pytest.raises(UnresolvedName):
        parse_spec(text).invcat("I")


def test_simplicial_identity_error_is_located():
    # s0 v0 must be an edge from v0 to v0, but its faces are given as v1, v0
    text = json.dumps({
        "base": "sset", "trunc": 1,
        "objects": {"X": {"levels": [["v0", "v1"], ["e", "s0", "s1"]],
                          "faces": {"1": {"e": ["v1", "v0"], "s0": ["v1", "v0"], "s1": ["v1", "v1"]}},
                          "degens": {"0": {"v0": ["s0"], "v1": ["s1"]}}}},
    })
    with pytest.raises(SimplicialIdentityError) as exc:
        parse_spec(text)
    cert = exc.value.certificate
    assert cert["identity"] == "d0 s0" and cert["element"] == "v0"
    assert cert["at"] == "objects/X" and cert["line"] == 1


def test_base_override():
    wb = load_spec(FIXTURES / "cp_p3.json")
    assert wb.invcat().base.name == "sset"
    assert wb.invcat().spaces["G/e"].sizes() == (1, 3, 9)
