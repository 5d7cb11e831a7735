"""A constructor-based pattern calculus with a constructive standardisation engine."""

from .matching import MatchPreconditionError, match_pattern, matches
from .parser import ParseError, parse_pattern, parse_sequence, parse_term, show_pattern, show_term
from .syntax import (
    Abs,
    App,
    Const,
    PApp,
    PConst,
    PVar,
    Var,
    alpha_eq,
    apply_subst,
    free_vars,
    is_data_term,
    is_linear,
    subst_compose,
    subst_disjoint_union,
    subst_restrict,
)

__all__ = [
    "Abs",
    "App",
    "Const",
    "MatchPreconditionError",
    "PApp",
    "PConst",
    "PVar",
    "ParseError",
    "Var",
    "alpha_eq",
    "apply_subst",
    "free_vars",
    "is_data_term",
    "is_linear",
    "match_pattern",
    "matches",
    "parse_pattern",
    "parse_sequence",
    "parse_term",
    "show_pattern",
    "show_term",
    "subst_compose",
    "subst_disjoint_union",
    "subst_restrict",
]
