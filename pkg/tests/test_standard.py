import pytest
from hypothesis import given, settings

from conftest import terms
from patstd.development import DRefl, IRefl, h_split, is_development, is_internal_development, validate_dev
from patstd.head import head_step_record, pattern_head_step_record
from patstd.oracle import enumerate_reduction_chains, standard_sequences
from patstd.parser import parse_pattern, parse_term
from patstd.reduction import Dir, one_step_reducts, step_at
from patstd.standard import (
    StdApp,
    StdConst,
    StdHead,
    StdVar,
    bifurcate,
    check_standard,
    check_std_proof,
    commute_head,
    postpone,
    postpone_pattern,
    standardise,
    standardise_reduction,
    steps_to_chain,
)
from patstd.syntax import alpha_eq, canonical_key
from patstd.development import internal_developments_p

P, T = parse_pattern, parse_term
M = T("(\\x.x) ((\\y.y) A)")


def test_postpone_with_refl():
    step = head_step_record(M)
    record, dev = postpone(IRefl(M), step)
    assert record == step and isinstance(dev, DRefl)


def test_postpone_beta():
    intdev = is_internal_development(M, T("(\\x.x) A"))
    record, dev = postpone(intdev, head_step_record(T("(\\x.x) A")))
    assert record.position == () and record.result == T("(\\y.y) A")
    validate_dev(dev, T("(\\y.y) A"), T("A"))


def test_postpone_pattern():
    p, m = P("A x"), T("(\\z.z) (A B)")
    pint = next(i for i in internal_developments_p(p, m) if alpha_eq(i.target, m))
    record, dev = postpone_pattern(p, pint, pattern_head_step_record(p, m))
    assert record.result == T("A B")
    validate_dev(dev, T("A B"), T("A B"))


def test_commute_head():
    intdev = is_internal_development(M, T("(\\x.x) A"))
    chain, rest = commute_head(intdev, head_step_record(T("(\\x.x) A")))
    assert [s.result for s in chain] == [T("(\\y.y) A"), T("A")]
    assert isinstance(rest, IRefl)


def test_bifurcate():
    empty = bifurcate([], M)
    assert empty.head_steps == () and empty.mid == M
    d1 = is_development(M, T("(\\x.x) A"))
    d2 = is_development(T("(\\x.x) A"), T("A"))
    split = bifurcate([d1, d2])
    assert len(split.head_steps) == 2 and split.mid == T("A")
    single = bifurcate([d1])
    assert single.mid == h_split(d1).mid


def test_standardise_inside_out():
    m = T("(\\x.C) ((\\y.y) A)")
    seq = standardise_reduction(m, [(Dir.ARG,), ()])
    assert list(seq.terms) == [m, T("C")]
    assert isinstance(seq.proof, StdHead)
    check_std_proof(seq.proof)


def test_standardise_from_developments():
    d = is_development(T("((\\x.x) A) ((\\y.y) B)"), T("A B"))
    seq = standardise(d.source, [d])
    assert alpha_eq(seq.terms[-1], T("A B"))
    assert check_standard(seq.terms) is not None


def test_check_standard_examples():
    bad = [T("(\\x.C) ((\\y.y) A)"), T("(\\x.C) A"), T("C")]
    assert check_standard(bad) is None
    assert isinstance(check_standard([bad[0], bad[2]]), StdHead)
    assert isinstance(check_standard([T("x")]), StdVar)
    assert isinstance(check_standard([T("C")]), StdConst)
    assert isinstance(check_standard([T("A ((\\x.x) B)"), T("A B")]), StdApp)
    # not a reduction sequence at all
    assert check_standard([T("A"), T("B")]) is None


def test_empty_sequence_rejected():
    with pytest.raises(ValueError):
        check_standard([])


@settings(max_examples=60)
@given(terms)
def test_standardisation(m):
    for chain in enumerate_reduction_chains(m, 2):
        end = m
        for pos in chain:
            end = step_at(end, pos)
        seq = standardise_reduction(m, chain)
        assert alpha_eq(seq.terms[0], m) and alpha_eq(seq.terms[-1], end)
        for a, b in zip(seq.terms, seq.terms[1:]):
            assert any(alpha_eq(b, r) for _, r in one_step_reducts(a))
        assert check_standard(seq.terms) is not None
        check_std_proof(seq.proof)


@settings(max_examples=60)
@given(terms)
def test_checker_agrees_with_grammar(m):
    generated = standard_sequences(m, 3)
    for chain in enumerate_reduction_chains(m, 2):
        seq = [m]
        for pos in chain:
            seq.append(step_at(seq[-1], pos))
        key = tuple(canonical_key(t) for t in seq)
        assert (check_standard(seq) is not None) == (key in generated)


@given(terms)
def test_steps_to_chain_replays(m):
    for chain in enumerate_reduction_chains(m, 2):
        devs = steps_to_chain(m, chain)
        src = m
        for pos, d in zip(chain, devs):
            validate_dev(d, src, step_at(src, pos))
            src = d.target
