"""Terms, patterns and substitutions of the constructor pattern calculus.

Terms are immutable and use named variables.  Identifiers starting with an
uppercase letter are constants; everything else is a variable.  Equality of
the dataclasses is syntactic; use :func:`alpha_eq` (or :func:`canonical`) for
equality up to renaming of bound pattern variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Union


class Term:
    """Base class of the four term constructors."""

    __slots__ = ()

    def __str__(self) -> str:
        from .parser import show_term

        return show_term(self)


@dataclass(frozen=True, eq=True, repr=False)
class Var(Term):
    name: str
    fv: frozenset = field(init=False, compare=False)
    size: int = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "fv", frozenset((self.name,)))
        object.__setattr__(self, "size", 1)
        object.__setattr__(self, "_hash", hash(("Var", self.name)))

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        # rebuild on unpickling: cached hashes are only valid in this process
        return Var, (self.name,)

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Const(Term):
    name: str
    fv: frozenset = field(init=False, compare=False)
    size: int = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "fv", frozenset())
        object.__setattr__(self, "size", 1)
        object.__setattr__(self, "_hash", hash(("Const", self.name)))

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return Const, (self.name,)

    def __repr__(self):
        return f"Const({self.name!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Abs(Term):
    binder: "Pattern"
    body: Term
    fv: frozenset = field(init=False, compare=False)
    size: int = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.binder, (PVar, PConst, PApp)):
            raise TypeError(f"abstraction binder must be a pattern, got {self.binder!r}")
        object.__setattr__(self, "fv", self.body.fv - self.binder.fv)
        object.__setattr__(self, "size", self.binder.size + self.body.size)
        object.__setattr__(self, "_hash", hash(("Abs", self.binder, self.body)))

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return Abs, (self.binder, self.body)

    def __repr__(self):
        return f"Abs({self.binder!r}, {self.body!r})"


@dataclass(frozen=True, eq=True, repr=False)
class App(Term):
    fun: Term
    arg: Term
    fv: frozenset = field(init=False, compare=False)
    size: int = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "fv", self.fun.fv | self.arg.fv)
        object.__setattr__(self, "size", self.fun.size + self.arg.size)
        object.__setattr__(self, "_hash", hash(("App", self.fun, self.arg)))

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return App, (self.fun, self.arg)

    def __repr__(self):
        return f"App({self.fun!r}, {self.arg!r})"


class Pattern:
    """Base class of patterns: a variable or a data pattern ``c p1 ... pn``."""

    __slots__ = ()

    def __str__(self) -> str:
        from .parser import show_pattern

        return show_pattern(self)


@dataclass(frozen=True, repr=False)
class PVar(Pattern):
    name: str
    occurrences: tuple = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)
    size: int = field(init=False, compare=False)

    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "occurrences", (self.name,))
        object.__setattr__(self, "fv", frozenset((self.name,)))
        object.__setattr__(self, "size", 1)
        object.__setattr__(self, "_hash", hash(("PVar", self.name)))

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return PVar, (self.name,)

    def __repr__(self):
        return f"PVar({self.name!r})"


@dataclass(frozen=True, repr=False)
class PConst(Pattern):
    name: str
    occurrences: tuple = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)
    size: int = field(init=False, compare=False)

    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "occurrences", ())
        object.__setattr__(self, "fv", frozenset())
        object.__setattr__(self, "size", 1)
        object.__setattr__(self, "_hash", hash(("PConst", self.name)))

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return PConst, (self.name,)

    def __repr__(self):
        return f"PConst({self.name!r})"


@dataclass(frozen=True, repr=False)
class PApp(Pattern):
    head: Pattern
    arg: Pattern
    occurrences: tuple = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)
    size: int = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.head, (PConst, PApp)):
            raise TypeError("the head of a compound pattern must be a data pattern")
        occ = self.head.occurrences + self.arg.occurrences
        object.__setattr__(self, "occurrences", occ)
        object.__setattr__(self, "fv", frozenset(occ))
        object.__setattr__(self, "size", self.head.size + self.arg.size)
        object.__setattr__(self, "_hash", hash(("PApp", self.head, self.arg)))

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return PApp, (self.head, self.arg)

    def __repr__(self):
        return f"PApp({self.head!r}, {self.arg!r})"


DataPattern = Union[PConst, PApp]
Subst = Mapping[str, Term]


def is_constant_name(name: str) -> bool:
    return name[:1].isupper()


def is_data_pattern(p: Pattern) -> bool:
    return not isinstance(p, PVar)


def free_vars(term: Term) -> frozenset:
    return term.fv


def pattern_vars(p: Pattern) -> frozenset:
    return p.fv


def is_linear(p: Pattern) -> bool:
    return len(p.occurrences) == len(p.fv)


def is_data_term(term: Term) -> bool:
    """True for ``c M1 ... Mn`` with ``n >= 0``."""
    while isinstance(term, App):
        term = term.fun
    return isinstance(term, Const)


def spine(term: Term) -> tuple[Term, list[Term]]:
    """Split ``H M1 ... Mn`` into its head and argument list."""
    args = []
    while isinstance(term, App):
        args.append(term.arg)
        term = term.fun
    args.reverse()
    return term, args


def pattern_to_term(p: Pattern) -> Term:
    match p:
        case PVar(name):
            return Var(name)
        case PConst(name):
            return Const(name)
        case PApp(head, arg):
            return App(pattern_to_term(head), pattern_to_term(arg))
    raise TypeError(p)


def all_names(term: Term) -> frozenset:
    """Every variable name occurring in ``term``, free or bound."""
    return _all_names(term)


@lru_cache(maxsize=1 << 16)
def _all_names(term: Term) -> frozenset:
    match term:
        case Var(name):
            return frozenset((name,))
        case Const():
            return frozenset()
        case Abs(binder, body):
            return binder.fv | _all_names(body)
        case App(fun, arg):
            return _all_names(fun) | _all_names(arg)
    raise TypeError(term)


# -- fresh names ------------------------------------------------------------

_SUFFIX = re.compile(r"\d+$")


def fresh_name(name: str, avoid: Iterable[str]) -> str:
    """``name`` with its numeric suffix replaced by the smallest one not in ``avoid``."""
    avoid = avoid if isinstance(avoid, (set, frozenset)) else set(avoid)
    base = _SUFFIX.sub("", name) or "v"
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def rename_pattern(p: Pattern, renaming: Mapping[str, str]) -> Pattern:
    if not renaming:
        return p
    match p:
        case PVar(name):
            return PVar(renaming.get(name, name))
        case PConst():
            return p
        case PApp(head, arg):
            return PApp(rename_pattern(head, renaming), rename_pattern(arg, renaming))
    raise TypeError(p)


def freshen(p: Pattern, avoid: Iterable[str], taken: Iterable[str] = ()) -> tuple[Pattern, dict[str, str]]:
    """Rename the variables of ``p`` that occur in ``avoid``.

    New names are also kept out of ``taken``.  Returns the new pattern and the
    renaming used (empty when nothing clashed).
    """
    avoid = set(avoid)
    clash = sorted(p.fv & avoid)
    if not clash:
        return p, {}
    taken = avoid | p.fv | set(taken)
    renaming = {}
    for x in clash:
        y = fresh_name(x, taken)
        taken.add(y)
        renaming[x] = y
    return rename_pattern(p, renaming), renaming


# -- substitutions ----------------------------------------------------------


def subst_vars(theta: Subst) -> frozenset:
    """``var(theta)``: the domain together with the free variables of the range."""
    out = set(theta)
    for t in theta.values():
        out |= t.fv
    return frozenset(out)


def apply_subst(theta: Subst, term: Term) -> Term:
    """Capture-avoiding simultaneous substitution."""
    if not theta:
        return term
    kind = type(term)
    if kind is Var:
        return theta.get(term.name, term)
    if kind is Const:
        return term
    if kind is App:
        if term.fv.isdisjoint(theta):
            return term
        return App(apply_subst(theta, term.fun), apply_subst(theta, term.arg))
    if kind is Abs:
        fv = term.fv
        inner = {x: t for x, t in theta.items() if x in fv}
        if not inner:
            return term
        binder, renaming = freshen(term.binder, subst_vars(inner), all_names(term.body))
        if renaming:
            inner.update((x, Var(y)) for x, y in renaming.items())
        return Abs(binder, apply_subst(inner, term.body))
    raise TypeError(term)


def subst_compose(nu: Subst, theta: Subst) -> dict[str, Term]:
    """``nu theta``: apply ``theta`` first, then ``nu``."""
    out = {x: apply_subst(nu, t) for x, t in theta.items()}
    for x, t in nu.items():
        if x not in theta:
            out[x] = t
    return out


def subst_restrict(theta: Subst, names: Iterable[str]) -> dict[str, Term]:
    names = set(names)
    return {x: t for x, t in theta.items() if x in names}


def subst_disjoint_union(a: Subst, b: Subst) -> Optional[dict[str, Term]]:
    """Union of two substitutions, or ``None`` when their domains overlap."""
    if a.keys() & b.keys():
        return None
    return {**a, **b}


def subst_eq(a: Subst, b: Subst) -> bool:
    return a.keys() == b.keys() and all(alpha_eq(a[x], b[x]) for x in a)


def format_subst(theta: Subst) -> str:
    return "{" + ", ".join(f"{x}:={theta[x]}" for x in sorted(theta)) + "}"


# -- alpha equivalence ------------------------------------------------------


def _binder_shape(p: Pattern, level: int, env: dict[str, int]):
    """Shape of ``p`` with variables numbered by first occurrence from ``level``."""
    match p:
        case PVar(name):
            if name not in env:
                env[name] = level + len(env)
            return env[name]
        case PConst(name):
            return name
        case PApp(head, arg):
            return (_binder_shape(head, level, env), _binder_shape(arg, level, env))
    raise TypeError(p)


def alpha_eq(m: Term, n: Term) -> bool:
    """Equality up to consistent renaming of bound pattern variables."""
    if m is n:
        return True
    if m.size != n.size or m.fv != n.fv:
        return False
    if m._hash == n._hash and m == n:
        return True
    return _alpha(m, n, {}, {}, 0)


def _alpha(m: Term, n: Term, env_m: dict, env_n: dict, level: int) -> bool:
    kind = type(m)
    if kind is not type(n):
        return False
    if m is n and not env_m and not env_n:
        return True
    if kind is App:
        return _alpha(m.fun, n.fun, env_m, env_n, level) and _alpha(m.arg, n.arg, env_m, env_n, level)
    if kind is Var:
        bx, by = env_m.get(m.name), env_n.get(n.name)
        if bx is None and by is None:
            return m.name == n.name
        return bx == by
    if kind is Const:
        return m.name == n.name
    new_m, new_n = {}, {}
    if _binder_shape(m.binder, level, new_m) != _binder_shape(n.binder, level, new_n):
        return False
    width = len(new_m)
    return _alpha(m.body, n.body, {**env_m, **new_m}, {**env_n, **new_n}, level + width)


def canonical(term: Term) -> Term:
    """Alpha-normal representative: bound variables renamed to ``#k`` by binding depth.

    ``canonical(m) == canonical(n)`` iff ``alpha_eq(m, n)``.  The ``#`` names
    cannot be written in concrete syntax, so they never clash with free names.
    """
    return _canon(term, {}, 0)


@lru_cache(maxsize=1 << 18)
def _canon_cached(term: Term) -> Term:
    return _canon(term, {}, 0)


def canonical_key(term: Term) -> Term:
    return _canon_cached(term)


def _canon(term: Term, env: dict, level: int) -> Term:
    match term:
        case Var(name):
            return Var(env[name]) if name in env else term
        case Const():
            return term
        case App(fun, arg):
            return App(_canon(fun, env, level), _canon(arg, env, level))
        case Abs(binder, body):
            new = {}
            _binder_shape(binder, level, new)
            renaming = {x: f"#{k}" for x, k in new.items()}
            return Abs(rename_pattern(binder, renaming), _canon(body, {**env, **renaming}, level + len(new)))
    raise TypeError(term)


def pattern_alpha_eq(p: Pattern, q: Pattern) -> bool:
    return _binder_shape(p, 0, {}) == _binder_shape(q, 0, {})


def canonical_pattern(p: Pattern) -> Pattern:
    env: dict[str, int] = {}
    _binder_shape(p, 0, env)
    return rename_pattern(p, {x: f"#{k}" for x, k in env.items()})


def binder_correspondence(p: Pattern, q: Pattern) -> Optional[dict[str, str]]:
    """Variable bijection taking ``q`` onto ``p``, if the two binders have the same shape."""
    env_p: dict[str, int] = {}
    env_q: dict[str, int] = {}
    if _binder_shape(p, 0, env_p) != _binder_shape(q, 0, env_q):
        return None
    by_level = {k: x for x, k in env_p.items()}
    return {y: by_level[k] for y, k in env_q.items()}


def align_abs(term: Abs, binder: Pattern) -> Optional[Term]:
    """The body of ``term`` re-expressed under ``binder``, or ``None`` if the shapes differ.

    The caller must ensure that the variables of ``binder`` do not occur free in ``term``.
    """
    corr = binder_correspondence(binder, term.binder)
    if corr is None:
        return None
    if binder.fv & term.fv:
        return None
    return apply_subst({y: Var(x) for y, x in corr.items() if x != y}, term.body)
