import pytest
from hypothesis import given

from conftest import patterns, terms
from patstd.parser import ParseError, parse_pattern, parse_sequence, parse_term, show_pattern, show_term
from patstd.syntax import Abs, App, Const, PApp, PConst, PVar, Var, alpha_eq


def test_atoms():
    assert parse_term("x") == Var("x")
    assert parse_term("Foo") == Const("Foo")


def test_application_is_left_associative():
    assert parse_term("x y z") == App(App(Var("x"), Var("y")), Var("z"))
    assert parse_term("x (y z)") == App(Var("x"), App(Var("y"), Var("z")))


def test_abstraction_extends_right():
    assert parse_term("\\x.x y") == Abs(PVar("x"), App(Var("x"), Var("y")))
    assert parse_term("λx.x") == parse_term("\\x.x")
    assert parse_term("A \\x.x") == App(Const("A"), Abs(PVar("x"), Var("x")))


def test_patterns():
    assert parse_pattern("A x y") == PApp(PApp(PConst("A"), PVar("x")), PVar("y"))
    assert parse_pattern("(A x) y") == parse_pattern("A x y")
    assert parse_pattern("A (B x)") == PApp(PConst("A"), PApp(PConst("B"), PVar("x")))
    assert parse_term("\\(A x).x").binder == parse_pattern("A x")


@pytest.mark.parametrize("bad", ["", "(", "x)", "\\.x", "\\x x", "x . y", "A $", "\\(x y).x", "\\(A x"])
def test_rejects(bad):
    with pytest.raises(ParseError):
        parse_term(bad)


def test_pattern_head_must_be_constant():
    with pytest.raises(ParseError):
        parse_pattern("x A")


def test_printing():
    assert show_term(parse_term("(\\x.x) ((\\y.y) A)")) == "(\\x.x) ((\\y.y) A)"
    assert show_term(parse_term("\\(A x y).x")) == "\\(A x y).x"
    assert show_pattern(parse_pattern("A (B x) y")) == "A (B x) y"


def test_sequences():
    text = "# comment\n(\\x.C) ((\\y.y) A)\n\n(\\x.C) A ; C\n"
    assert parse_sequence(text) == [parse_term("(\\x.C) ((\\y.y) A)"), parse_term("(\\x.C) A"), Const("C")]


@given(terms)
def test_print_parse_roundtrip(m):
    again = parse_term(show_term(m))
    assert again == m
    assert alpha_eq(again, m)


@given(patterns)
def test_pattern_roundtrip(p):
    assert parse_pattern(show_pattern(p)) == p
