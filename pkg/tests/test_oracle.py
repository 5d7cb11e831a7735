from patstd.oracle import (
    DEFAULT_UNIVERSE,
    UniverseConfig,
    count_terms,
    enumerate_patterns,
    enumerate_substitutions,
    enumerate_terms,
    head_derivations,
    match_derivations,
    standard_sequences,
)
from patstd.parser import parse_pattern, parse_term, show_pattern, show_term
from patstd.syntax import canonical_key

SMALL = UniverseConfig(constants=("A",), variables=("x",), max_term_size=2, max_pattern_size=2)


def test_size_one():
    cfg = UniverseConfig(constants=("A",), variables=("x",), max_term_size=1)
    assert [show_term(t) for t in enumerate_terms(cfg)] == ["x", "A"]


def test_size_two():
    assert [show_term(t) for t in enumerate_terms(SMALL)] == [
        "x", "A", "\\x.x", "\\x.A", "\\A.x", "\\A.A", "x x", "x A", "A x", "A A",
    ]


def test_linear_patterns():
    cfg = UniverseConfig(constants=("A",), variables=("x",), max_pattern_size=2, allow_non_linear=False)
    assert [show_pattern(p) for p in enumerate_patterns(cfg)] == ["x", "A", "A x", "A A"]


def test_default_universe_counts():
    # frozen from an independent recount (one alpha class per canonical key)
    assert count_terms(UniverseConfig(max_term_size=4)) == [4, 29, 355, 5236]
    assert len(list(enumerate_patterns(DEFAULT_UNIVERSE))) == 41


def test_one_representative_per_alpha_class():
    cfg = UniverseConfig(max_term_size=4)
    keys = [canonical_key(t) for t in enumerate_terms(cfg)]
    assert len(keys) == len(set(keys))


def test_alpha_classes_are_complete():
    # every raw term of size <= 3 over the universe is alpha-equal to an enumerated one
    cfg = UniverseConfig(max_term_size=3)
    keys = {canonical_key(t) for t in enumerate_terms(cfg)}
    for text in ["\\y.y", "\\(A y).y", "\\y.\\x.y", "(\\y.x) y", "\\(B y).A", "\\(A y y).y"]:
        t = parse_term(text)
        if t.size <= 3:
            assert canonical_key(t) in keys


def test_substitutions():
    subs = list(enumerate_substitutions(SMALL, max_size=1))
    assert subs[0] == {}
    assert {"x": parse_term("A")} in subs


def test_head_derivations_oracle():
    assert [r for r, _ in head_derivations(parse_term("(\\x.x) A"))] == ["HBeta"]
    assert head_derivations(parse_term("A ((\\x.x) B)")) == []


def test_match_derivations_oracle():
    assert match_derivations(parse_pattern("A x x"), parse_term("A B B")) == []
    assert match_derivations(parse_pattern("A x y"), parse_term("A B C")) == [
        {"x": parse_term("B"), "y": parse_term("C")}
    ]


def test_standard_sequence_generator():
    m = parse_term("(\\x.C) ((\\y.y) A)")
    seqs = standard_sequences(m, 3)
    key = lambda *ts: tuple(canonical_key(parse_term(t)) for t in ts)
    assert key("(\\x.C) ((\\y.y) A)", "C") in seqs
    assert key("(\\x.C) ((\\y.y) A)", "(\\x.C) A", "C") not in seqs
    assert key("(\\x.C) ((\\y.y) A)", "(\\x.C) A") in seqs


def test_brute_force_h_split():
    from patstd.oracle import brute_force_h_split

    x = parse_term("x")
    assert brute_force_h_split(x, x, 3) == [x]
    assert brute_force_h_split(parse_term("(\\x.x) A"), parse_term("A"), 3) == [parse_term("A")]


def test_chains_of_a_normal_form():
    from patstd.oracle import enumerate_reduction_chains

    assert list(enumerate_reduction_chains(parse_term("A"), 3)) == [[]]
