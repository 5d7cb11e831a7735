import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import patterns, substitutions, terms
from patstd.parser import parse_pattern, parse_term
from patstd.syntax import (
    Abs,
    App,
    Const,
    PApp,
    PConst,
    PVar,
    Var,
    align_abs,
    all_names,
    alpha_eq,
    apply_subst,
    binder_correspondence,
    canonical,
    fresh_name,
    freshen,
    is_data_term,
    is_linear,
    pattern_alpha_eq,
    pattern_to_term,
    rename_pattern,
    spine,
    subst_compose,
    subst_disjoint_union,
    subst_eq,
    subst_restrict,
    subst_vars,
)

T = parse_term


def test_compound_pattern_needs_constant_head():
    with pytest.raises(TypeError):
        PApp(PVar("x"), PVar("y"))
    with pytest.raises(TypeError):
        Abs(Var("x"), Var("x"))


def test_sizes_count_leaves():
    assert T("x").size == 1
    assert T("\\x.x").size == 2
    assert T("x x").size == 2
    assert T("\\(A x y).y").size == 4
    assert parse_pattern("(A x) x").size == 3


def test_free_variables():
    assert T("\\(A x).(x y)").fv == {"y"}
    assert T("(\\x.x) x").fv == {"x"}
    assert T("A B").fv == frozenset()


def test_linearity():
    assert is_linear(parse_pattern("A x y"))
    assert not is_linear(parse_pattern("A x x"))


def test_data_terms():
    assert is_data_term(T("A"))
    assert is_data_term(T("A ((\\x.x) B) y"))
    assert not is_data_term(T("x A"))
    assert not is_data_term(T("(\\x.x) A"))


def test_spine():
    head, args = spine(T("A x (B y)"))
    assert head == Const("A") and args == [Var("x"), T("B y")]


def test_capture_avoiding_substitution():
    result = apply_subst({"x": Var("y")}, T("\\y.(x y)"))
    assert result == T("\\y1.(y y1)")
    assert result.fv == {"y"}


def test_substitution_renames_whole_binder():
    result = apply_subst({"x": Var("y")}, T("\\(A y z).(x y z)"))
    assert alpha_eq(result, T("\\(A u v).(y u v)"))
    assert result.fv == {"y"}


def test_substitution_is_simultaneous():
    assert apply_subst({"x": Var("y"), "y": Var("x")}, T("x y")) == T("y x")


def test_compose_example():
    nu, theta = {"x": Const("A")}, {"y": Var("x")}
    assert subst_eq(subst_compose(nu, theta), {"y": Const("A"), "x": Const("A")})


def test_disjoint_union():
    assert subst_disjoint_union({"x": Const("A")}, {"x": Const("A")}) is None
    assert subst_disjoint_union({"x": Const("A")}, {"y": Const("B")}) == {"x": Const("A"), "y": Const("B")}


def test_subst_vars_and_restrict():
    theta = {"x": T("y A"), "z": Const("B")}
    assert subst_vars(theta) == {"x", "y", "z"}
    assert subst_restrict(theta, {"z", "w"}) == {"z": Const("B")}


def test_fresh_names():
    assert fresh_name("x", {"x", "x1"}) == "x2"
    assert fresh_name("y3", set()) == "y1"
    p, renaming = freshen(parse_pattern("A x y"), {"x"})
    assert renaming == {"x": "x1"} and p == parse_pattern("A x1 y")


def test_alpha_eq_examples():
    assert alpha_eq(T("\\x.x"), T("\\y.y"))
    assert alpha_eq(T("\\(A x y).x y"), T("\\(A y x).y x"))
    assert not alpha_eq(T("\\(A x y).x"), T("\\(A x y).y"))
    assert not alpha_eq(T("\\x.y"), T("\\y.y"))
    assert not alpha_eq(T("\\(A x).x"), T("\\(B x).x"))
    # non-linear binders: the repeated variable must line up
    assert alpha_eq(T("\\(A x x).x"), T("\\(A y y).y"))
    assert not alpha_eq(T("\\(A x x y).x"), T("\\(A x y y).x"))


def test_binder_correspondence():
    assert binder_correspondence(parse_pattern("A x y"), parse_pattern("A u v")) == {"u": "x", "v": "y"}
    assert binder_correspondence(parse_pattern("A x x"), parse_pattern("A u v")) is None


def test_align_abs():
    assert align_abs(T("\\(A u).u B"), parse_pattern("A x")) == T("x B")
    assert align_abs(T("\\(A u).x"), parse_pattern("A x")) is None
    assert align_abs(T("\\(A u).u"), parse_pattern("B x")) is None


@given(terms)
def test_alpha_eq_reflexive_and_canonical(m):
    assert alpha_eq(m, m)
    assert alpha_eq(canonical(m), m)
    assert canonical(canonical(m)) == canonical(m)


@given(terms, terms)
def test_alpha_eq_agrees_with_canonical(m, n):
    assert alpha_eq(m, n) == (canonical(m) == canonical(n))


@given(terms, st.sampled_from(["x", "y", "z"]), st.sampled_from(["u", "v"]))
def test_renaming_a_bound_variable_is_alpha_equal(m, x, y):
    if not isinstance(m, Abs) or x not in m.binder.fv or y in all_names(m):
        return
    renamed = Abs(rename_pattern(m.binder, {x: y}), apply_subst({x: Var(y)}, m.body))
    assert alpha_eq(renamed, m)


@given(terms, substitutions)
def test_substitution_free_variables(m, theta):
    out = apply_subst(theta, m)
    expected = set(m.fv - theta.keys())
    for x in m.fv & theta.keys():
        expected |= theta[x].fv
    assert out.fv == expected


@given(terms, substitutions)
def test_substitution_respects_alpha(m, theta):
    assert alpha_eq(apply_subst(theta, canonical(m)), apply_subst(theta, m))


@given(terms, substitutions, substitutions)
def test_composition(m, nu, theta):
    assert alpha_eq(apply_subst(subst_compose(nu, theta), m), apply_subst(nu, apply_subst(theta, m)))


@given(patterns)
def test_pattern_renaming_class(p):
    assert pattern_alpha_eq(p, p)
    assert pattern_to_term(p).fv == p.fv


def test_structural_equality_and_hash():
    a, b = T("\\(A x).x B"), T("\\(A x).x B")
    assert a == b and hash(a) == hash(b)
    assert {a: 1}[b] == 1
    assert App(Var("x"), Const("A")) != App(Const("A"), Var("x"))
    assert PConst("A") != PVar("A")
