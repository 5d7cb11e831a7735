"""Exhaustive enumeration and brute-force checks used as independent oracles.

Sizes count leaves: every variable or constant occurrence, in terms and in
binder patterns alike.  So ``x`` has size 1 and both ``\\x.x`` and ``x x``
have size 2.

Enumeration order is size first; within a size, atoms (variables before
constants), then abstractions (by binder size), then applications (by the
size of the function part).  Terms are emitted once per alpha class, as the
first representative met in that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .development import is_internal_development, is_internal_development_p
from .head import head_step, head_step_record, pattern_head_step_record
from .matching import match_raw
from .reduction import Position, redex_positions, step_at
from .syntax import (
    Abs,
    App,
    Const,
    PApp,
    PConst,
    Pattern,
    PVar,
    Term,
    Var,
    apply_subst,
    canonical_key,
    canonical_pattern,
    is_data_term,
    is_linear,
    subst_disjoint_union,
)


@dataclass(frozen=True)
class UniverseConfig:
    constants: tuple = ("A", "B")
    variables: tuple = ("x", "y")
    max_term_size: int = 6
    max_pattern_size: int = 3
    allow_non_linear: bool = True
    max_chain_length: int = 3

    def __post_init__(self):
        if self.max_term_size < 1:
            raise ValueError("max_term_size must be at least 1")
        if self.max_pattern_size < 1 or self.max_chain_length < 0:
            raise ValueError("pattern size must be at least 1 and chain length non-negative")
        object.__setattr__(self, "constants", tuple(self.constants))
        object.__setattr__(self, "variables", tuple(self.variables))


DEFAULT_UNIVERSE = UniverseConfig()


# -- patterns ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _named_patterns(constants: tuple, variables: tuple, size: int) -> tuple:
    """Every pattern of exactly ``size`` leaves, with all variable namings."""
    if size == 1:
        return tuple(PVar(x) for x in variables) + tuple(PConst(c) for c in constants)
    out = []
    for k in range(1, size):
        for head in _named_data_patterns(constants, variables, k):
            for arg in _named_patterns(constants, variables, size - k):
                out.append(PApp(head, arg))
    return tuple(out)


def _named_data_patterns(constants, variables, size) -> tuple:
    return tuple(p for p in _named_patterns(constants, variables, size) if not isinstance(p, PVar))


def binder_patterns(cfg: UniverseConfig, size: int) -> tuple:
    """Binder candidates of exactly ``size`` leaves (all namings, linearity per ``cfg``)."""
    ps = _named_patterns(cfg.constants, cfg.variables, size)
    return ps if cfg.allow_non_linear else tuple(p for p in ps if is_linear(p))


def enumerate_patterns(cfg: UniverseConfig = DEFAULT_UNIVERSE) -> Iterator[Pattern]:
    """Every pattern up to ``max_pattern_size``, once per renaming class."""
    seen = set()
    for size in range(1, cfg.max_pattern_size + 1):
        for p in binder_patterns(cfg, size):
            key = canonical_pattern(p)
            if key not in seen:
                seen.add(key)
                yield p


# -- terms ------------------------------------------------------------------


def _level(cfg: UniverseConfig, lower: tuple, size: int) -> Iterator[Term]:
    """Terms of exactly ``size`` leaves, given every smaller level."""
    if size == 1:
        yield from (Var(x) for x in cfg.variables)
        yield from (Const(c) for c in cfg.constants)
    # distinct binders can still give alpha-equal abstractions
    seen = set()
    for k in range(1, size):
        for p in binder_patterns(cfg, k):
            for body in lower[size - k]:
                t = Abs(p, body)
                if not p.fv:
                    yield t
                    continue
                key = canonical_key(t)
                if key not in seen:
                    seen.add(key)
                    yield t
    # an application of two alpha classes is a new alpha class
    for k in range(1, size):
        for fun in lower[k]:
            for arg in lower[size - k]:
                yield App(fun, arg)


@lru_cache(maxsize=8)
def _terms_by_size(cfg: UniverseConfig, upto: int) -> tuple:
    """Levels ``0..upto`` held in memory (level 0 is empty)."""
    levels: list[tuple] = [()]
    for size in range(1, upto + 1):
        levels.append(tuple(_level(cfg, tuple(levels), size)))
    return tuple(levels)


def enumerate_terms(cfg: UniverseConfig = DEFAULT_UNIVERSE) -> Iterator[Term]:
    """Every term up to ``max_term_size``, once per alpha class.

    Only the smaller levels are kept in memory; the largest one is streamed.
    """
    lower = _terms_by_size(cfg, cfg.max_term_size - 1)
    for level in lower:
        yield from level
    yield from _level(cfg, lower, cfg.max_term_size)


def count_terms(cfg: UniverseConfig = DEFAULT_UNIVERSE) -> list[int]:
    """Number of alpha classes per size, starting at size 1."""
    lower = _terms_by_size(cfg, cfg.max_term_size - 1)
    return [len(level) for level in lower[1:]] + [sum(1 for _ in _level(cfg, lower, cfg.max_term_size))]


def enumerate_substitutions(cfg: UniverseConfig, max_size: int = 2) -> Iterator[dict]:
    """Substitutions on the universe's variables with small ranges (including the empty one)."""
    levels = _terms_by_size(cfg, min(max_size, cfg.max_term_size))
    small = [t for level in levels for t in level]
    yield {}
    for x in cfg.variables:
        for t in small:
            yield {x: t}
    if len(cfg.variables) >= 2:
        x, y = cfg.variables[:2]
        atoms = [t for t in small if t.size == 1]
        for s in atoms:
            for t in atoms:
                yield {x: s, y: t}


# -- reductions -------------------------------------------------------------


def enumerate_reduction_chains(term: Term, length: int) -> Iterator[list[Position]]:
    """Every list of redex positions of length at most ``length`` that reduces ``term``."""
    if length < 0:
        raise ValueError("length must be non-negative")

    def walk(t: Term, prefix: list, left: int):
        yield list(prefix)
        if left == 0:
            return
        for pos in redex_positions(t):
            prefix.append(pos)
            yield from walk(step_at(t, pos), prefix, left - 1)
            prefix.pop()

    yield from walk(term, [], length)


def count_reduction_chains(term: Term, length: int) -> int:
    """Number of chains counted by direct recursion over subterm redexes (no positions)."""
    if length == 0:
        return 1
    return 1 + sum(count_reduction_chains(r, length - 1) for r in _reducts(term))


def _reducts(term: Term) -> list[Term]:
    out = []
    match term:
        case App(fun, arg):
            if isinstance(fun, Abs):
                theta = match_raw(fun.binder, arg)
                if theta is not None:
                    out.append(apply_subst(theta, fun.body))
            out += [App(f, arg) for f in _reducts(fun)]
            out += [App(fun, a) for a in _reducts(arg)]
        case Abs(binder, body):
            out += [Abs(binder, b) for b in _reducts(body)]
    return out


# -- head steps, by exhaustive rule application -----------------------------


def head_derivations(term: Term) -> list[tuple[str, Term]]:
    """Every derivation of ``term ->h _``, found by trying each rule independently."""
    out = []
    if isinstance(term, App):
        fun, arg = term.fun, term.arg
        for rule, r in head_derivations(fun):
            out.append((f"HApp1/{rule}", App(r, arg)))
        if isinstance(fun, Abs):
            theta = match_raw(fun.binder, arg)
            if theta is not None:
                out.append(("HBeta", apply_subst(theta, fun.body)))
            for rule, r in pattern_head_derivations(fun.binder, arg):
                out.append((f"HPat/{rule}", App(fun, r)))
    return out


def pattern_head_derivations(p: Pattern, term: Term) -> list[tuple[str, Term]]:
    out = []
    if isinstance(p, PVar):
        return out
    for rule, r in head_derivations(term):
        out.append((f"PatHead/{rule}", r))
    if isinstance(p, PApp) and isinstance(term, App) and is_data_term(term.fun):
        for rule, r in pattern_head_derivations(p.head, term.fun):
            out.append((f"Pat1/{rule}", App(r, term.arg)))
        if match_raw(p.head, term.fun) is not None:
            for rule, r in pattern_head_derivations(p.arg, term.arg):
                out.append((f"Pat2/{rule}", App(term.fun, r)))
    return out


# -- brute-force h-splitting ------------------------------------------------


def brute_force_h_split(m: Term, n: Term, max_head: int) -> list[Term]:
    """Every ``Q`` with ``m ->h^k Q`` (``k <= max_head``) and ``Q |>int n``."""
    out = []
    term: Optional[Term] = m
    for _ in range(max_head + 1):
        if is_internal_development(term, n) is not None:
            out.append(term)
        record = head_step_record(term)
        if record is None:
            break
        term = record.result
    return out


def brute_force_h_split_pattern(p: Pattern, m: Term, n: Term, max_head: int) -> list[Term]:
    out = []
    term = m
    for _ in range(max_head + 1):
        if is_internal_development_p(p, term, n) is not None:
            out.append(term)
        record = pattern_head_step_record(p, term)
        if record is None:
            break
        term = record.result
    return out


# -- standard sequences, generated from the grammar -------------------------


def standard_sequences(term: Term, max_length: int) -> set:
    """Canonical keys of every grammar-generated standard sequence from ``term`` of length ``<= max_length``."""
    return {tuple(canonical_key(t) for t in seq) for seq in _generate(term, max_length)}


@lru_cache(maxsize=1 << 14)
def _generate(term: Term, max_length: int) -> tuple:
    if max_length < 1:
        return ()
    out = []
    match term:
        case Var() | Const():
            out.append((term,))
        case Abs(binder, body):
            out += [tuple(Abs(binder, t) for t in seq) for seq in _generate(body, max_length)]
        case App(fun, arg):
            for left in _generate(fun, max_length):
                last = left[-1]
                for right in _generate(arg, max_length - len(left) + 1):
                    out.append(tuple(App(m, arg) for m in left) + tuple(App(last, n) for n in right[1:]))
    found = head_step(term)
    if found is not None:
        out += [(term, *seq) for seq in _generate(found[0], max_length - 1)]
    return tuple(out)


# -- matching, by enumerating rule derivations ------------------------------


def match_derivations(p: Pattern, term: Term) -> list[dict]:
    """Every substitution derivable for ``p << term`` by the three matching rules."""
    if isinstance(p, PVar):
        return [{p.name: term}]
    if isinstance(p, PConst):
        return [{}] if term == Const(p.name) else []
    out = []
    if isinstance(term, App):
        for left in match_derivations(p.head, term.fun):
            for right in match_derivations(p.arg, term.arg):
                union = subst_disjoint_union(left, right)
                if union is not None:
                    out.append(union)
    return out
