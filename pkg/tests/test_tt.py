import pytest
from hypothesis import given, settings, strategies as st

from conftest import GOLDEN, golden_index, run_cli
from invcat.errors import ScopeError, TTSyntaxError
from invcat.io import load_spec
from invcat.tt import (
    alpha_equal, annotations, check_scopes, emit_hom_type, emit_signature, parse_signature, show_signature,
    signature_from_json, signature_to_json, simplify,
)
from invcat.tt.parser import parse_expr
from invcat.tt.syntax import (
    App, Arrow, Bind, Compose, Id, Judgment, Name, Opaque, Pi, Prod, Sg, Signature, UnitT, show,
)
from conftest import FIXTURES

INDEX = golden_index()


@pytest.mark.parametrize("name", sorted(INDEX))
def test_golden_alpha_equal(name):
    code, out, err = run_cli(*INDEX[name])
    assert code == 0, err
    expected = parse_signature((GOLDEN / f"{name}.tt").read_text())
    assert alpha_equal(parse_signature(out), expected)


def test_four_objects_has_ten_judgments():
    assert len(parse_signature((GOLDEN / "four_objects_invcat.tt").read_text())) == 10


def test_reedy_mode_is_matching_then_diagram():
    I = load_spec(FIXTURES / "two_chain.json").invcat("I")
    sig = emit_signature(I, "reedy")
    assert alpha_equal(sig, emit_signature(I, "matching") + emit_signature(I, "diagram"))


def test_emission_is_deterministic():
    I = load_spec(FIXTURES / "four_chain.json").invcat("I")
    assert show_signature(emit_signature(I)) == show_signature(emit_signature(I))
    assert run_cli("emit-tt", "four_chain.json")[1] == run_cli("emit-tt", "four_chain.json")[1]


def test_later_matching_component_mentions_earlier():
    I = load_spec(FIXTURES / "three_chain.json").invcat("I")
    last = emit_signature(I, "diagram").judgments[-1]
    v_y = [b for b in last.context if isinstance(b, Bind) and b.var == "v{y}"][0]
    assert "v{x}" in show(v_y.type)


def test_pi_and_sigma_are_not_alpha_equal():
    a = parse_signature("|- Pi (a : X), Y(a) type")
    b = parse_signature("|- Sg (a : X), Y(a) type")
    assert not alpha_equal(a, b)


def test_renaming_bound_variables_is_alpha_equal():
    a = parse_signature("(p : X), (q : Y(p)) |- Pi (r : Z), W(p, q, r) type")
    b = parse_signature("(s : X), (t : Y(s)) |- Pi (k : Z), W(s, t, k) type")
    assert alpha_equal(a, b)


def test_judgment_order_matters():
    a = parse_signature("|- X type\n|- Y type")
    b = parse_signature("|- Y type\n|- X type")
    assert not alpha_equal(a, b)


def test_use_before_binder_is_a_scope_error():
    sig = parse_signature("(a : X(b)), (b : Y) |- Z type")
    with pytest.raises(ScopeError) as exc:
        check_scopes(sig)
    assert exc.value.certificate["name"] == "b"


def test_syntax_error_reports_position():
    with pytest.raises(TTSyntaxError) as exc:
        parse_signature("|- X type\n(a : ) |- Y type")
    assert exc.value.certificate["line"] == 2
    assert exc.value.certificate["column"] == 6


def test_simplify_erases_units_everywhere():
    I = load_spec(FIXTURES / "sierpinski.json").invcat("I")
    sig = simplify(emit_signature(I, "diagram"), annotations(I))
    assert "u{" not in show_signature(sig)


def test_hom_type_of_empty_category_is_unit():
    I = load_spec(FIXTURES / "empty.json").invcat("I")
    assert emit_hom_type(I).judgments[0].subject == UnitT()


# -- random round trips -------------------------------------------------------

idents = st.sampled_from(["a", "b", "X", "Y{x}", "I{y,x}", "u_x", "a'", "G/e"]).map(
    lambda s: s if "/" not in s else "A{G/e}")
variables = st.sampled_from(["p", "q", "r{x}", "w2{y}"])


def exprs():
    leaf = st.one_of(idents.map(Name), st.just(UnitT()))

    def extend(inner):
        return st.one_of(
            st.builds(lambda f, xs: App(Name(f), tuple(xs)), idents, st.lists(inner, min_size=1, max_size=3)),
            st.builds(Pi, variables, inner, inner),
            st.builds(Sg, variables, inner, inner),
            st.builds(Arrow, inner, inner),
            st.builds(Prod, inner, inner),
            st.builds(Compose, inner, inner),
            st.builds(Id, inner, inner),
        )

    return st.recursive(leaf, extend, max_leaves=8)


def judgments():
    item = st.one_of(st.builds(Bind, variables, exprs()), st.sampled_from([Opaque("Gm"), Opaque("De")]))
    return st.builds(lambda ctx, e: Judgment(tuple(ctx), e), st.lists(item, max_size=3), exprs())


@settings(max_examples=500, deadline=None)
@given(st.lists(judgments(), min_size=1, max_size=3))
def test_print_parse_round_trip(js):
    sig = Signature(tuple(js))
    assert parse_signature(show_signature(sig)) == sig


@settings(max_examples=200, deadline=None)
@given(exprs())
def test_expression_round_trip(e):
    assert parse_expr(show(e)) == e


@settings(max_examples=200, deadline=None)
@given(st.lists(judgments(), min_size=1, max_size=3))
def test_json_round_trip(js):
    sig = Signature(tuple(js))
    assert signature_from_json(signature_to_json(sig)) == sig
