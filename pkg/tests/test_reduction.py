import pytest
from hypothesis import given

from conftest import terms
from patstd.oracle import count_reduction_chains, enumerate_reduction_chains
from patstd.parser import parse_term
from patstd.reduction import (
    Dir,
    PositionError,
    Strategy,
    contract,
    is_redex,
    one_step_reducts,
    parse_position,
    redex_positions,
    reduce_fuelled,
    replace_at,
    show_position,
    step_at,
    subterm_at,
)
from patstd.syntax import alpha_eq

T = parse_term
OMEGA = T("(\\x.x x) (\\x.x x)")


def test_redex_positions():
    assert redex_positions(T("(\\x.x) A")) == [()]
    assert redex_positions(T("(\\(A x).x) B")) == []
    assert redex_positions(T("A ((\\x.x) B)")) == [(Dir.ARG,)]
    # preorder: outer before inner, function before argument
    assert redex_positions(T("(\\x.x) ((\\y.y) A)")) == [(), (Dir.ARG,)]


def test_step_at():
    assert step_at(T("(\\x.x) A"), ()) == T("A")
    assert step_at(T("(\\(A x).x) (A B)"), ()) == T("B")
    assert step_at(T("\\y.((\\x.x) y)"), (Dir.BODY,)) == T("\\y.y")
    with pytest.raises(PositionError):
        step_at(T("A B"), ())


def test_contract():
    assert contract(T("(\\(A x y).y x) (A B C)")) == T("C B")
    assert contract(T("(\\(A x).x) B")) is None
    assert is_redex(T("(\\x.x) A")) and not is_redex(T("A A"))


def test_positions_roundtrip():
    pos = (Dir.ARG, Dir.FUN, Dir.BODY)
    assert parse_position(show_position(pos)) == pos
    assert show_position(()) == "root"
    assert parse_position("root") == ()
    with pytest.raises(PositionError):
        parse_position("left")


def test_subterm_and_replace():
    m = T("A (B C)")
    assert subterm_at(m, (Dir.ARG, Dir.FUN)) == T("B")
    assert replace_at(m, (Dir.ARG, Dir.FUN), T("D")) == T("A (D C)")


def test_fuelled_reduction():
    last, steps, exhausted = reduce_fuelled(T("(\\x.x) A"), Strategy.LEFTMOST, 10)
    assert (last, len(steps), exhausted) == (T("A"), 1, False)
    last, steps, exhausted = reduce_fuelled(OMEGA, Strategy.LEFTMOST, 5)
    assert alpha_eq(last, OMEGA) and len(steps) == 5 and exhausted
    assert reduce_fuelled(T("A"), Strategy.HEAD, 0) == (T("A"), [], False)
    with pytest.raises(ValueError):
        reduce_fuelled(T("A"), Strategy.HEAD, -1)


def test_reduction_chains():
    assert list(enumerate_reduction_chains(T("(\\x.x) A"), 1)) == [[], [()]]
    m = T("(\\x.x) ((\\y.y) A)")
    chains = list(enumerate_reduction_chains(m, 2))
    assert chains == [[], [()], [(), ()], [(Dir.ARG,)], [(Dir.ARG,), ()]]


@given(terms)
def test_reducts_come_from_redexes(m):
    for pos, r in one_step_reducts(m):
        redex = subterm_at(m, pos)
        assert is_redex(redex)
        assert alpha_eq(r, replace_at(m, pos, contract(redex)))


@given(terms)
def test_chain_count_matches_direct_recursion(m):
    assert len(list(enumerate_reduction_chains(m, 2))) == count_reduction_chains(m, 2)
