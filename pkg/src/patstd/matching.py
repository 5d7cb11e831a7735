"""Matching of patterns against terms.

Matching is partial: it returns a substitution or ``None``.  ``None`` covers
both a structural mismatch and a non-linear clash (the two halves of a
compound pattern binding the same variable).

The public entry points insist on the calculus' convention that the pattern
and the term share no variables.  Internally the library calls
:func:`match_raw`, which ignores that convention: whether a match exists and
which subterms get bound does not depend on variable names.
"""

from __future__ import annotations

from typing import Optional

from .syntax import (
    App,
    Const,
    PApp,
    PConst,
    Pattern,
    PVar,
    Subst,
    Term,
    apply_subst,
    subst_compose,
    subst_eq,
    subst_restrict,
)


class MatchPreconditionError(ValueError):
    """The pattern and the term share variables."""


def match_raw(p: Pattern, term: Term) -> Optional[dict[str, Term]]:
    kind = type(p)
    if kind is PVar:
        return {p.name: term}
    if kind is PConst:
        return {} if type(term) is Const and term.name == p.name else None
    if kind is PApp:
        if type(term) is not App:
            return None
        left = match_raw(p.head, term.fun)
        if left is None:
            return None
        right = match_raw(p.arg, term.arg)
        if right is None or left.keys() & right.keys():
            return None
        left.update(right)
        return left
    raise TypeError(p)


def matches_raw(p: Pattern, term: Term) -> bool:
    return match_raw(p, term) is not None


def _check_apart(p: Pattern, term: Term) -> None:
    shared = p.fv & term.fv
    if shared:
        raise MatchPreconditionError(
            f"pattern and term share variables {sorted(shared)}; rename the binder first"
        )


def match_pattern(p: Pattern, term: Term) -> Optional[dict[str, Term]]:
    """The match of ``term`` against ``p``, or ``None``.

    Raises :class:`MatchPreconditionError` when ``p`` and ``term`` share variables.
    """
    _check_apart(p, term)
    return match_raw(p, term)


def matches(p: Pattern, term: Term) -> bool:
    _check_apart(p, term)
    return match_raw(p, term) is not None


def match_under_subst(p: Pattern, term: Term, theta: Subst, nu: Subst) -> dict[str, Term]:
    """Match of ``p`` against ``nu(term)``, computed from the match ``theta`` of ``p`` against ``term``.

    The result is ``(nu theta)`` restricted to the variables of ``p``; it is
    checked against a direct match of the substituted term.
    """
    direct = match_raw(p, term)
    if direct is None or not subst_eq(direct, theta):
        raise ValueError(f"{theta} is not the match of {p} against {term}")
    shared = set(p.fv) & (set(nu) | {x for t in nu.values() for x in t.fv})
    if shared:
        raise ValueError(f"pattern variables {sorted(shared)} occur in the substitution")
    gamma = subst_restrict(subst_compose(nu, theta), p.fv)
    check = match_raw(p, apply_subst(nu, term))
    if check is None or not subst_eq(check, gamma):
        raise AssertionError(f"matching is not compatible with substitution on {p}, {term}")
    return gamma
