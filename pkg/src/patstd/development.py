"""Developments, internal developments and the head/internal splitting of developments.

Proof objects are derivation trees.  Every node computes its ``source`` and
``target`` from its children, so a tree is a witness as soon as the side
conditions of each rule hold; :func:`check_dev`, :func:`check_int` and
:func:`check_pint` verify exactly those side conditions.

The splitting functions :func:`h_split` and :func:`h_split_pattern` do not
search.  They follow the inductive construction that shows every development
factors into head steps followed by an internal development, carrying an
environment of already split substitution developments through beta nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import ClassVar, Mapping, Optional, Union

from .head import head_step, justification_position, pattern_head_step
from .matching import MatchPreconditionError, match_raw
from .reduction import Dir, StepRecord
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
    align_abs,
    all_names,
    alpha_eq,
    apply_subst,
    canonical_key,
    freshen,
    is_data_term,
    subst_eq,
)


class ProofError(ValueError):
    """A derivation tree violates a rule side condition or does not compose."""


# -- development proofs -----------------------------------------------------


@dataclass(frozen=True)
class DRefl:
    term: Term
    rule: ClassVar[str] = "DRefl"

    @property
    def source(self) -> Term:
        return self.term

    @property
    def target(self) -> Term:
        return self.term


@dataclass(frozen=True)
class DAbs:
    binder: Pattern
    body: "DevProof"
    rule: ClassVar[str] = "DAbs"

    @cached_property
    def source(self) -> Term:
        return Abs(self.binder, self.body.source)

    @cached_property
    def target(self) -> Term:
        return Abs(self.binder, self.body.target)


@dataclass(frozen=True)
class DApp:
    fun: "DevProof"
    arg: "DevProof"
    rule: ClassVar[str] = "DApp"

    @cached_property
    def source(self) -> Term:
        return App(self.fun.source, self.arg.source)

    @cached_property
    def target(self) -> Term:
        return App(self.fun.target, self.arg.target)


@dataclass(frozen=True)
class SubstDevProof:
    """Pointwise developments ``nu x |> theta x`` over a common domain."""

    proofs: tuple  # ((name, DevProof), ...) sorted by name

    @classmethod
    def of(cls, mapping: Mapping[str, "DevProof"]) -> "SubstDevProof":
        return cls(tuple(sorted(mapping.items(), key=lambda kv: kv[0])))

    @property
    def domain(self) -> frozenset:
        return frozenset(x for x, _ in self.proofs)

    def as_dict(self) -> dict[str, "DevProof"]:
        return dict(self.proofs)

    @cached_property
    def source(self) -> dict[str, Term]:
        return {x: d.source for x, d in self.proofs}

    @cached_property
    def target(self) -> dict[str, Term]:
        return {x: d.target for x, d in self.proofs}


@dataclass(frozen=True)
class DBeta:
    """``(\\p.M) N |> theta' M'`` from ``M |> M'``, ``p << N = theta`` and ``theta >> theta'``."""

    binder: Pattern
    body: "DevProof"
    arg: Term
    bindings: SubstDevProof
    rule: ClassVar[str] = "DBeta"

    @cached_property
    def source(self) -> Term:
        return App(Abs(self.binder, self.body.source), self.arg)

    @cached_property
    def target(self) -> Term:
        return apply_subst(self.bindings.target, self.body.target)

    @property
    def witness(self) -> Optional[dict[str, Term]]:
        return match_raw(self.binder, self.arg)


DevProof = Union[DRefl, DAbs, DApp, DBeta]


# -- internal development proofs --------------------------------------------


@dataclass(frozen=True)
class IRefl:
    term: Term
    rule: ClassVar[str] = "IRefl"

    @property
    def source(self) -> Term:
        return self.term

    @property
    def target(self) -> Term:
        return self.term


@dataclass(frozen=True)
class IAbs:
    binder: Pattern
    body: DevProof
    rule: ClassVar[str] = "IAbs"

    @cached_property
    def source(self) -> Term:
        return Abs(self.binder, self.body.source)

    @cached_property
    def target(self) -> Term:
        return Abs(self.binder, self.body.target)


@dataclass(frozen=True)
class IApp1:
    """``M N`` with ``M`` not an abstraction: internal on the left, any development on the right."""

    fun: "IntDevProof"
    arg: DevProof
    rule: ClassVar[str] = "IApp1"

    @cached_property
    def source(self) -> Term:
        return App(self.fun.source, self.arg.source)

    @cached_property
    def target(self) -> Term:
        return App(self.fun.target, self.arg.target)


@dataclass(frozen=True)
class IApp2:
    """``(\\p.M) N``: any development of the body, ``p``-internal development of the argument."""

    binder: Pattern
    body: DevProof
    arg: "PatIntDevProof"
    rule: ClassVar[str] = "IApp2"

    @cached_property
    def source(self) -> Term:
        return App(Abs(self.binder, self.body.source), self.arg.source)

    @cached_property
    def target(self) -> Term:
        return App(Abs(self.binder, self.body.target), self.arg.target)


@dataclass(frozen=True)
class PMatch:
    pattern: Pattern
    dev: DevProof
    rule: ClassVar[str] = "PMatch"

    @property
    def source(self) -> Term:
        return self.dev.source

    @property
    def target(self) -> Term:
        return self.dev.target


@dataclass(frozen=True)
class PConstant:
    """Internal development relative to a constant pattern (rule ``PConst``)."""

    pattern: Pattern
    inner: "IntDevProof"
    rule: ClassVar[str] = "PConst"

    @property
    def source(self) -> Term:
        return self.inner.source

    @property
    def target(self) -> Term:
        return self.inner.target


@dataclass(frozen=True)
class PNoCData:
    pattern: Pattern
    inner: "IntDevProof"
    rule: ClassVar[str] = "PNoCData"

    @property
    def source(self) -> Term:
        return self.inner.source

    @property
    def target(self) -> Term:
        return self.inner.target


@dataclass(frozen=True)
class PDataShort:
    """A bare constant relative to a compound pattern: ``c`` only develops to itself."""

    pattern: Pattern
    term: Term
    rule: ClassVar[str] = "PDataShort"

    @property
    def source(self) -> Term:
        return self.term

    @property
    def target(self) -> Term:
        return self.term


@dataclass(frozen=True)
class PCDataNo1:
    pattern: Pattern
    left: "PatIntDevProof"
    right: DevProof
    rule: ClassVar[str] = "PCDataNo1"

    @cached_property
    def source(self) -> Term:
        return App(self.left.source, self.right.source)

    @cached_property
    def target(self) -> Term:
        return App(self.left.target, self.right.target)


@dataclass(frozen=True)
class PCDataNo2:
    pattern: Pattern
    left: DevProof
    right: "PatIntDevProof"
    rule: ClassVar[str] = "PCDataNo2"

    @cached_property
    def source(self) -> Term:
        return App(self.left.source, self.right.source)

    @cached_property
    def target(self) -> Term:
        return App(self.left.target, self.right.target)


@dataclass(frozen=True)
class PCDataNo3:
    pattern: Pattern
    left: DevProof
    right: DevProof
    rule: ClassVar[str] = "PCDataNo3"

    @cached_property
    def source(self) -> Term:
        return App(self.left.source, self.right.source)

    @cached_property
    def target(self) -> Term:
        return App(self.left.target, self.right.target)


IntDevProof = Union[IRefl, IAbs, IApp1, IApp2]
PatIntDevProof = Union[PMatch, PConstant, PNoCData, PDataShort, PCDataNo1, PCDataNo2, PCDataNo3]


def erase(proof) -> DevProof:
    """The plain development underlying an internal (or pattern-internal) development."""
    match proof:
        case IRefl(term):
            return DRefl(term)
        case IAbs(binder, body):
            return DAbs(binder, body)
        case IApp1(fun, arg):
            return DApp(erase(fun), arg)
        case IApp2(binder, body, arg):
            return DApp(DAbs(binder, body), erase(arg))
        case PMatch(_, dev):
            return dev
        case PConstant(_, inner) | PNoCData(_, inner):
            return erase(inner)
        case PDataShort(_, term):
            return DRefl(term)
        case PCDataNo1(_, left, right):
            return DApp(erase(left), right)
        case PCDataNo2(_, left, right):
            return DApp(left, erase(right))
        case PCDataNo3(_, left, right):
            return DApp(left, right)
    raise TypeError(proof)


# -- checking ---------------------------------------------------------------


def _memo_check(check):
    """Skip re-checking a proof object that already passed.

    Proofs are immutable and subtrees are shared heavily (every pattern-indexed
    split reuses the same developments), so validity is remembered per object.
    """

    def wrapper(proof) -> None:
        state = getattr(proof, "__dict__", None)
        if state is not None and state.get("_valid"):
            return
        check(proof)
        if state is not None:
            state["_valid"] = True

    wrapper.__name__, wrapper.__doc__ = check.__name__, check.__doc__
    return wrapper


@_memo_check
def check_dev(proof) -> None:
    """Raise :class:`ProofError` unless every node of ``proof`` is a correct rule instance."""
    match proof:
        case DRefl():
            return
        case DAbs(_, body):
            check_dev(body)
        case DApp(fun, arg):
            check_dev(fun)
            check_dev(arg)
        case DBeta(binder, body, arg, bindings):
            witness = match_raw(binder, arg)
            if witness is None:
                raise ProofError(f"DBeta: {arg} does not match {binder}")
            if witness.keys() != bindings.domain:
                raise ProofError("DBeta: substitution development has the wrong domain")
            check_dev(body)
            for x, d in bindings.proofs:
                check_dev(d)
                if not alpha_eq(d.source, witness[x]):
                    raise ProofError(f"DBeta: binding for {x} starts at {d.source}, match gives {witness[x]}")
        case _:
            raise ProofError(f"not a development proof: {proof!r}")


@_memo_check
def check_int(proof) -> None:
    match proof:
        case IRefl():
            return
        case IAbs(_, body):
            check_dev(body)
        case IApp1(fun, arg):
            if isinstance(fun.source, Abs):
                raise ProofError("IApp1: the function part is an abstraction")
            check_int(fun)
            check_dev(arg)
        case IApp2(binder, body, arg):
            if not _is_pint(arg) or arg.pattern != binder:
                raise ProofError("IApp2: argument proof must be internal relative to the binder")
            check_dev(body)
            check_pint(arg)
        case _:
            raise ProofError(f"not an internal development proof: {proof!r}")


def _is_pint(proof) -> bool:
    return isinstance(proof, (PMatch, PConstant, PNoCData, PDataShort, PCDataNo1, PCDataNo2, PCDataNo3))


@_memo_check
def check_pint(proof) -> None:
    match proof:
        case PMatch(p, dev):
            if match_raw(p, dev.source) is None:
                raise ProofError(f"PMatch: {dev.source} does not match {p}")
            check_dev(dev)
        case PConstant(p, inner):
            if not isinstance(p, PConst):
                raise ProofError("PConst: pattern is not a constant")
            check_int(inner)
        case PNoCData(p, inner):
            if not isinstance(p, PApp):
                raise ProofError("PNoCData: pattern is not compound")
            if is_data_term(inner.source):
                raise ProofError(f"PNoCData: {inner.source} is a data term")
            check_int(inner)
        case PDataShort(p, term):
            if not isinstance(p, PApp) or not isinstance(term, Const):
                raise ProofError("PDataShort: needs a compound pattern and a constant")
        case PCDataNo1(p, left, right):
            if not isinstance(p, PApp) or not _is_pint(left) or left.pattern != p.head:
                raise ProofError("PCDataNo1: left proof must be relative to the head pattern")
            if not is_data_term(left.source):
                raise ProofError("PCDataNo1: left part is not a data term")
            if match_raw(p.head, left.source) is not None:
                raise ProofError("PCDataNo1: left part matches the head pattern")
            check_pint(left)
            check_dev(right)
        case PCDataNo2(p, left, right):
            if not isinstance(p, PApp) or not _is_pint(right) or right.pattern != p.arg:
                raise ProofError("PCDataNo2: right proof must be relative to the argument pattern")
            if match_raw(p.head, left.source) is None:
                raise ProofError("PCDataNo2: left part does not match the head pattern")
            if match_raw(p.arg, right.source) is not None:
                raise ProofError("PCDataNo2: right part matches the argument pattern")
            check_dev(left)
            check_pint(right)
        case PCDataNo3(p, left, right):
            if not isinstance(p, PApp):
                raise ProofError("PCDataNo3: pattern is not compound")
            if match_raw(p.head, left.source) is None or match_raw(p.arg, right.source) is None:
                raise ProofError("PCDataNo3: a component does not match")
            if match_raw(p, App(left.source, right.source)) is not None:
                raise ProofError("PCDataNo3: the whole term matches")
            check_dev(left)
            check_dev(right)
        case _:
            raise ProofError(f"not a pattern-internal development proof: {proof!r}")


def _check_ends(proof, source: Optional[Term], target: Optional[Term]) -> None:
    if source is not None and not alpha_eq(proof.source, source):
        raise ProofError(f"proof starts at {proof.source}, expected {source}")
    if target is not None and not alpha_eq(proof.target, target):
        raise ProofError(f"proof ends at {proof.target}, expected {target}")


def validate_dev(proof, source: Optional[Term] = None, target: Optional[Term] = None) -> None:
    check_dev(proof)
    _check_ends(proof, source, target)


def validate_int(proof, source: Optional[Term] = None, target: Optional[Term] = None) -> None:
    check_int(proof)
    _check_ends(proof, source, target)


def validate_pint(proof, pattern: Pattern, source: Optional[Term] = None, target: Optional[Term] = None) -> None:
    if not _is_pint(proof) or proof.pattern != pattern:
        raise ProofError(f"proof is not relative to pattern {pattern}")
    check_pint(proof)
    _check_ends(proof, source, target)


# -- search -----------------------------------------------------------------


def apart(fun: Abs, avoid) -> Abs:
    """``fun`` with its binder renamed away from ``avoid`` (unchanged when nothing clashes)."""
    binder, renaming = freshen(fun.binder, avoid, all_names(fun.body))
    if not renaming:
        return fun
    return Abs(binder, apply_subst({x: Var(y) for x, y in renaming.items()}, fun.body))


@lru_cache(maxsize=1 << 14)
def developments(term: Term) -> tuple:
    """One development proof for every target reachable by ``|>`` from ``term`` (distinct up to alpha)."""
    found: dict[Term, DevProof] = {}

    def add(proof):
        found.setdefault(canonical_key(proof.target), proof)

    add(DRefl(term))
    match term:
        case Abs(binder, body):
            for d in developments(body):
                add(DAbs(binder, d))
        case App(fun, arg):
            for d1 in developments(fun):
                for d2 in developments(arg):
                    add(DApp(d1, d2))
            if isinstance(fun, Abs):
                for proof in _beta_developments(fun, arg):
                    add(proof)
    return tuple(found.values())


def _beta_developments(fun: Abs, arg: Term):
    fun = apart(fun, arg.fv)
    theta = match_raw(fun.binder, arg)
    if theta is None:
        return
    names = sorted(theta)
    for body in developments(fun.body):
        for choice in product(*(developments(theta[x]) for x in names)):
            yield DBeta(fun.binder, body, arg, SubstDevProof(tuple(zip(names, choice))))


def is_development(m: Term, n: Term) -> Optional[DevProof]:
    """A derivation of ``m |> n``, or ``None``."""
    return _is_dev(m, n)


@lru_cache(maxsize=1 << 16)
def _is_dev(m: Term, n: Term) -> Optional[DevProof]:
    if alpha_eq(m, n):
        return DRefl(m)
    if not n.fv <= m.fv:
        return None
    match m:
        case Abs(binder, body):
            if isinstance(n, Abs):
                other = align_abs(n, binder)
                if other is not None:
                    d = _is_dev(body, other)
                    if d is not None:
                        return DAbs(binder, d)
            return None
        case App(fun, arg):
            if isinstance(fun, Abs):
                key = canonical_key(n)
                for proof in _beta_developments(fun, arg):
                    if canonical_key(proof.target) == key:
                        return proof
            if isinstance(n, App):
                d1 = _is_dev(fun, n.fun)
                if d1 is not None:
                    d2 = _is_dev(arg, n.arg)
                    if d2 is not None:
                        return DApp(d1, d2)
    return None


def is_subst_development(nu: Mapping[str, Term], theta: Mapping[str, Term]) -> Optional[SubstDevProof]:
    if nu.keys() != theta.keys():
        return None
    proofs = {}
    for x in nu:
        d = is_development(nu[x], theta[x])
        if d is None:
            return None
        proofs[x] = d
    return SubstDevProof.of(proofs)


def is_internal_development(m: Term, n: Term) -> Optional[IntDevProof]:
    return _is_int(m, n)


def is_internal_development_p(p: Pattern, m: Term, n: Term) -> Optional[PatIntDevProof]:
    shared = p.fv & m.fv
    if shared:
        raise MatchPreconditionError(f"pattern and term share variables {sorted(shared)}")
    return _search_pint(p, m, n)


@lru_cache(maxsize=1 << 16)
def _is_int(m: Term, n: Term) -> Optional[IntDevProof]:
    if alpha_eq(m, n):
        return IRefl(m)
    match m:
        case Abs(binder, body):
            if isinstance(n, Abs) and not (binder.fv & n.fv):
                other = align_abs(n, binder)
                if other is not None:
                    d = _is_dev(body, other)
                    if d is not None:
                        return IAbs(binder, d)
        case App(fun, arg) if isinstance(n, App):
            if not isinstance(fun, Abs):
                left = _is_int(fun, n.fun)
                if left is not None:
                    right = _is_dev(arg, n.arg)
                    if right is not None:
                        return IApp1(left, right)
            elif isinstance(n.fun, Abs) and not (fun.binder.fv & n.fun.fv):
                other = align_abs(n.fun, fun.binder)
                if other is not None:
                    body = _is_dev(fun.body, other)
                    if body is not None:
                        right = _search_pint(fun.binder, arg, n.arg)
                        if right is not None:
                            return IApp2(fun.binder, body, right)
    return None


@lru_cache(maxsize=1 << 16)
def _search_pint(p: Pattern, m: Term, n: Term) -> Optional[PatIntDevProof]:
    if match_raw(p, m) is not None:
        d = _is_dev(m, n)
        if d is not None:
            return PMatch(p, d)
    if isinstance(p, PConst):
        inner = _is_int(m, n)
        return PConstant(p, inner) if inner is not None else None
    if isinstance(p, PVar):
        return None
    if not is_data_term(m):
        inner = _is_int(m, n)
        return PNoCData(p, inner) if inner is not None else None
    if isinstance(m, Const):
        return PDataShort(p, m) if alpha_eq(m, n) else None
    if not isinstance(n, App):
        return None
    d, q = p.head, p.arg
    if match_raw(d, m.fun) is None:
        left = _search_pint(d, m.fun, n.fun)
        if left is not None:
            right = _is_dev(m.arg, n.arg)
            if right is not None:
                return PCDataNo1(p, left, right)
        return None
    left = _is_dev(m.fun, n.fun)
    if left is None:
        return None
    if match_raw(q, m.arg) is None:
        right = _search_pint(q, m.arg, n.arg)
        return PCDataNo2(p, left, right) if right is not None else None
    if match_raw(p, m) is None:
        right = _is_dev(m.arg, n.arg)
        return PCDataNo3(p, left, right) if right is not None else None
    return None


# -- generative enumeration of internal developments ------------------------


@lru_cache(maxsize=1 << 14)
def internal_developments(term: Term) -> tuple:
    """One internal development proof per reachable target (distinct up to alpha)."""
    found: dict[Term, IntDevProof] = {}

    def add(proof):
        found.setdefault(canonical_key(proof.target), proof)

    add(IRefl(term))
    match term:
        case Abs(binder, body):
            for d in developments(body):
                add(IAbs(binder, d))
        case App(fun, arg):
            if isinstance(fun, Abs):
                for d in developments(fun.body):
                    for pi in internal_developments_p(fun.binder, arg):
                        add(IApp2(fun.binder, d, pi))
            else:
                for left in internal_developments(fun):
                    for right in developments(arg):
                        add(IApp1(left, right))
    return tuple(found.values())


@lru_cache(maxsize=1 << 14)
def internal_developments_p(p: Pattern, term: Term) -> tuple:
    """All derivations of ``term |>int_p N``, one per rule instance family and target."""
    out: dict = {}

    def add(proof):
        out.setdefault((proof.rule, canonical_key(proof.target)), proof)

    if match_raw(p, term) is not None:
        for d in developments(term):
            add(PMatch(p, d))
    if isinstance(p, PConst):
        for inner in internal_developments(term):
            add(PConstant(p, inner))
    elif isinstance(p, PApp):
        if not is_data_term(term):
            for inner in internal_developments(term):
                add(PNoCData(p, inner))
        elif isinstance(term, Const):
            add(PDataShort(p, term))
        else:
            d, q = p.head, p.arg
            if match_raw(d, term.fun) is None:
                for left in internal_developments_p(d, term.fun):
                    for right in developments(term.arg):
                        add(PCDataNo1(p, left, right))
            elif match_raw(q, term.arg) is None:
                for left in developments(term.fun):
                    for right in internal_developments_p(q, term.arg):
                        add(PCDataNo2(p, left, right))
            elif match_raw(p, term) is None:
                for left in developments(term.fun):
                    for right in developments(term.arg):
                        add(PCDataNo3(p, left, right))
    return tuple(out.values())


# -- matches survive developments -------------------------------------------


def match_after_dev(dev: DevProof, p: Pattern, nu: Mapping[str, Term]) -> tuple[dict[str, Term], SubstDevProof]:
    """Given ``M |> N`` and ``p << M = nu``, the match ``theta`` of ``p`` against ``N`` with ``nu >> theta``."""
    found = match_raw(p, dev.source)
    if found is None or not subst_eq(found, nu):
        raise ProofError(f"{nu} is not the match of {p} against {dev.source}")
    proofs = _match_after(dev, p)
    sd = SubstDevProof.of(proofs)
    theta = sd.target
    check = match_raw(p, dev.target)
    if check is None or not subst_eq(check, theta):
        raise AssertionError("development lost a match")
    return theta, sd


def _match_after(dev: DevProof, p: Pattern) -> dict[str, DevProof]:
    match p:
        case PVar(name):
            return {name: dev}
        case PConst():
            if not isinstance(dev, DRefl):
                raise ProofError("a constant only develops by reflexivity")
            return {}
        case PApp(head, arg):
            match dev:
                case DRefl(App(fun, right)):
                    left_dev, right_dev = DRefl(fun), DRefl(right)
                case DApp(left_dev, right_dev):
                    pass
                case _:
                    raise ProofError(f"{dev.rule} cannot develop a data term")
            out = _match_after(left_dev, head)
            out.update(_match_after(right_dev, arg))
            return out
    raise TypeError(p)


# -- developments under substitution ----------------------------------------


def _env_vars(sd: Mapping[str, DevProof]) -> set:
    out = set(sd)
    for d in sd.values():
        out |= d.source.fv | d.target.fv
    return out


def _proof_names(dev) -> frozenset:
    return all_names(dev.source) | all_names(dev.target)


def rename_dev(dev: DevProof, renaming: Mapping[str, str]) -> DevProof:
    """Rename free variables of a development proof (targets must be fresh)."""
    return subst_apply_dev({x: DRefl(Var(y)) for x, y in renaming.items()}, dev)


def subst_apply_dev(sd, dev: DevProof) -> DevProof:
    """From ``nu >> theta`` and ``M |> N`` build ``nu M |> theta N``.

    ``sd`` is a :class:`SubstDevProof` or a mapping from variables to
    development proofs.  Binders are renamed apart from the substitutions as
    needed.
    """
    mapping = sd.as_dict() if isinstance(sd, SubstDevProof) else dict(sd)
    return _subst_dev(dev, mapping)


def _subst_dev(dev: DevProof, sd: Mapping[str, DevProof]) -> DevProof:
    sd = {x: d for x, d in sd.items() if x in dev.source.fv}
    if not sd:
        return dev
    match dev:
        case DRefl(term):
            return _refl_under(term, sd)
        case DApp(fun, arg):
            return DApp(_subst_dev(fun, sd), _subst_dev(arg, sd))
        case DAbs(binder, body):
            binder2, renaming = freshen(binder, _env_vars(sd), _proof_names(body))
            if renaming:
                body = rename_dev(body, renaming)
            return DAbs(binder2, _subst_dev(body, sd))
        case DBeta(binder, body, arg, bindings):
            dev = _beta_apart(dev, _env_vars(sd))
            nu = {x: d.source for x, d in sd.items()}
            new_bindings = {x: _subst_dev(b, sd) for x, b in dev.bindings.proofs}
            return DBeta(
                dev.binder,
                _subst_dev(dev.body, sd),
                apply_subst(nu, dev.arg),
                SubstDevProof.of(new_bindings),
            )
    raise TypeError(dev)


def _beta_apart(dev: DBeta, avoid) -> DBeta:
    binder, renaming = freshen(dev.binder, avoid, _proof_names(dev.body) | all_names(dev.arg))
    if not renaming:
        return dev
    bindings = {renaming.get(x, x): d for x, d in dev.bindings.proofs}
    return DBeta(binder, rename_dev(dev.body, renaming), dev.arg, SubstDevProof.of(bindings))


def _refl_under(term: Term, sd: Mapping[str, DevProof]) -> DevProof:
    sd = {x: d for x, d in sd.items() if x in term.fv}
    if not sd:
        return DRefl(term)
    if all(isinstance(d, DRefl) for d in sd.values()):
        return DRefl(apply_subst({x: d.term for x, d in sd.items()}, term))
    match term:
        case Var(name):
            return sd[name]
        case App(fun, arg):
            return DApp(_refl_under(fun, sd), _refl_under(arg, sd))
        case Abs():
            term = apart(term, _env_vars(sd))
            return DAbs(term.binder, _refl_under(term.body, sd))
    raise TypeError(term)


# -- h-developments ---------------------------------------------------------


@dataclass(frozen=True)
class HSplit:
    """``source ->h* mid`` (or ``->p*`` for a pattern) followed by an internal development to the target."""

    steps: tuple
    mid: Term
    internal: object
    pattern: Optional[Pattern] = None


def _lift_fun(step: StepRecord, arg: Term) -> StepRecord:
    return StepRecord(App(step.source, arg), (Dir.FUN,) + step.position, App(step.result, arg))


def _lift_arg(step: StepRecord, fun: Term) -> StepRecord:
    return StepRecord(App(fun, step.source), (Dir.ARG,) + step.position, App(fun, step.result))


def _abs_parts(proof: IntDevProof) -> tuple[Pattern, DevProof]:
    match proof:
        case IRefl(Abs(binder, body)):
            return binder, DRefl(body)
        case IAbs(binder, body):
            return binder, body
    raise ProofError(f"expected an internal development of an abstraction, got {proof.rule}")


def _unwrap_nodata(proof) -> IntDevProof:
    match proof:
        case PConstant(_, inner) | PNoCData(_, inner):
            return inner
    raise ProofError(f"expected PConst or PNoCData, got {proof.rule}")


class _HDev:
    """Witness that ``source |> target`` is an h-development.

    ``head()`` returns the head steps and the internal development;
    ``for_pattern(p)`` the ``p``-steps and the ``p``-internal development.
    Both are computed on demand and cached.
    """

    source: Term
    target: Term

    def __init__(self):
        self._by_pattern = {}
        self._head = None

    @cached_property
    def dev(self) -> DevProof:
        raise NotImplementedError

    def head(self):
        if self._head is None:
            self._head = self._compute_head()
        return self._head

    def for_pattern(self, p: Pattern):
        if p not in self._by_pattern:
            if isinstance(p, PVar):
                self._by_pattern[p] = ([], PMatch(p, self.dev))
            else:
                self._by_pattern[p] = self._compute_data(p)
        return self._by_pattern[p]


class _AtomHDev(_HDev):
    def __init__(self, term: Term):
        super().__init__()
        self.source = self.target = term

    @cached_property
    def dev(self):
        return DRefl(self.source)

    @cached_property
    def internal(self):
        return IRefl(self.source)

    def _compute_head(self):
        return [], self.internal

    def _compute_data(self, p):
        if isinstance(p, PConst):
            return [], PConstant(p, self.internal)
        if isinstance(self.source, Const):
            return [], PDataShort(p, self.source)
        return [], PNoCData(p, self.internal)


class _AbsHDev(_HDev):
    def __init__(self, binder: Pattern, body: _HDev):
        super().__init__()
        self.binder, self.body = binder, body
        self.source = Abs(binder, body.source)
        self.target = Abs(binder, body.target)

    @cached_property
    def dev(self):
        return DAbs(self.binder, self.body.dev)

    @cached_property
    def internal(self):
        return IAbs(self.binder, self.body.dev)

    def _compute_head(self):
        return [], self.internal

    def _compute_data(self, p):
        inner = self.internal
        if isinstance(p, PConst):
            return [], PConstant(p, inner)
        return [], PNoCData(p, inner)


class _AppHDev(_HDev):
    def __init__(self, left: _HDev, right: _HDev):
        super().__init__()
        self.left, self.right = left, right
        self.source = App(left.source, right.source)
        self.target = App(left.target, right.target)

    @cached_property
    def dev(self):
        return DApp(self.left.dev, self.right.dev)

    def _compute_head(self):
        left_steps, left_int = self.left.head()
        arg = self.right.source
        steps = [_lift_fun(s, arg) for s in left_steps]
        fun = left_int.source
        if not isinstance(fun, Abs):
            return steps, IApp1(left_int, self.right.dev)
        binder, body_dev = _abs_parts(left_int)
        right_steps, right_int = self.right.for_pattern(binder)
        steps += [_lift_arg(s, fun) for s in right_steps]
        return steps, IApp2(binder, body_dev, right_int)

    def _compute_data(self, p):
        if isinstance(p, PConst):
            steps, inner = self.head()
            return steps, PConstant(p, inner)
        d, q = p.head, p.arg
        left_steps, left_int = self.left.for_pattern(d)
        arg = self.right.source
        # head steps of the left part lift through HApp1 while it is not a
        # data term and through Pat1 afterwards; both put the redex on the left
        steps = [_lift_fun(s, arg) for s in left_steps]
        fun = left_int.source
        if isinstance(fun, Abs):
            binder, body_dev = _abs_parts(_unwrap_nodata(left_int))
            right_steps, right_int = self.right.for_pattern(binder)
            steps += [_lift_arg(s, fun) for s in right_steps]
            return steps, PNoCData(p, IApp2(binder, body_dev, right_int))
        if not is_data_term(fun):
            return steps, PNoCData(p, IApp1(_unwrap_nodata(left_int), self.right.dev))
        if match_raw(d, fun) is None:
            return steps, PCDataNo1(p, left_int, self.right.dev)
        left_dev = erase(left_int)
        if match_raw(q, arg) is None:
            right_steps, right_int = self.right.for_pattern(q)
            steps += [_lift_arg(s, fun) for s in right_steps]
            if match_raw(q, right_int.source) is None:
                return steps, PCDataNo2(p, left_dev, right_int)
            right_dev = erase(right_int)
        else:
            right_dev = self.right.dev
        if match_raw(p, App(left_dev.source, right_dev.source)) is not None:
            return steps, PMatch(p, DApp(left_dev, right_dev))
        return steps, PCDataNo3(p, left_dev, right_dev)


class _BetaHDev(_HDev):
    """``nu((\\q.M) N) ->h nu(tau M)`` followed by the split of the body under ``nu tau``."""

    def __init__(self, env: dict, beta: DBeta, inner: _HDev):
        super().__init__()
        self.env, self.beta, self.inner = env, beta, inner
        nu = {x: h.source for x, h in env.items()}
        self.source = apply_subst(nu, beta.source)
        contractum = apply_subst(beta.bindings.source, beta.body.source)
        self.step = StepRecord(self.source, (), apply_subst(nu, contractum))

    @property
    def target(self):
        return self.inner.target

    @cached_property
    def dev(self):
        return subst_apply_dev({x: h.dev for x, h in self.env.items()}, self.beta)

    def _compute_head(self):
        steps, proof = self.inner.head()
        return [self.step] + steps, proof

    def _compute_data(self, p):
        steps, proof = self.inner.for_pattern(p)
        return [self.step] + steps, proof


def _hdev_vars(env: Mapping[str, _HDev]) -> set:
    out = set(env)
    for h in env.values():
        out |= h.source.fv | h.target.fv
    return out


def _generalised(dev: DevProof, env: Mapping[str, _HDev]) -> _HDev:
    """Split ``nu M |> theta N`` where ``env`` holds the split bindings of ``nu >> theta``."""
    env = {x: h for x, h in env.items() if x in dev.source.fv}
    match dev:
        case DRefl(term):
            return _refl_hdev(term, env)
        case DAbs(binder, body):
            binder2, renaming = freshen(binder, _hdev_vars(env), _proof_names(body))
            if renaming:
                body = rename_dev(body, renaming)
            return _AbsHDev(binder2, _generalised(body, env))
        case DApp(fun, arg):
            return _AppHDev(_generalised(fun, env), _generalised(arg, env))
        case DBeta():
            beta = _beta_apart(dev, _hdev_vars(env))
            inner_env = dict(env)
            for x, b in beta.bindings.proofs:
                inner_env[x] = _generalised(b, env)
            inner = _generalised(beta.body, inner_env)
            return _BetaHDev(env, beta, inner)
    raise TypeError(dev)


def _refl_hdev(term: Term, env: Mapping[str, _HDev]) -> _HDev:
    match term:
        case Var(name) if name in env:
            return env[name]
        case Var() | Const():
            return _AtomHDev(term)
        case App(fun, arg):
            return _AppHDev(_refl_hdev(fun, env), _refl_hdev(arg, env))
        case Abs():
            relevant = {x: h for x, h in env.items() if x in term.fv}
            term = apart(term, _hdev_vars(relevant))
            return _AbsHDev(term.binder, _refl_hdev(term.body, relevant))
    raise TypeError(term)


def h_split(dev: DevProof) -> HSplit:
    """Factor ``M |> N`` as ``M ->h* Q |>int N``."""
    return HSplitter(dev).head()


def h_split_pattern(dev: DevProof, p: Pattern) -> HSplit:
    """Factor ``M |> N`` as ``M ->p* Q |>int_p N``."""
    return HSplitter(dev).for_pattern(p)


def validate_chain(steps, source: Term, pattern: Optional[Pattern] = None) -> Term:
    """Check that ``steps`` is a head (or ``pattern``-head) chain from ``source``; return its end."""
    current = source
    for s in steps:
        if not alpha_eq(s.source, current):
            raise ProofError(f"step starts at {s.source}, chain is at {current}")
        found = head_step(s.source) if pattern is None else pattern_head_step(pattern, s.source)
        if found is None:
            raise ProofError(f"{s.source} has no {'head' if pattern is None else 'pattern-head'} step")
        if not alpha_eq(found[0], s.result):
            raise ProofError(f"step of {s.source} gives {found[0]}, record says {s.result}")
        if justification_position(found[1]) != s.position:
            raise ProofError("step record position differs from the justified redex")
        current = s.result
    return current


def validate_hsplit(split: HSplit, dev: DevProof) -> None:
    end = validate_chain(split.steps, dev.source, split.pattern)
    if not alpha_eq(end, split.mid):
        raise ProofError("head chain does not end at the internal development's source")
    if split.pattern is None:
        validate_int(split.internal, split.mid, dev.target)
    else:
        validate_pint(split.internal, split.pattern, split.mid, dev.target)


class HSplitter:
    """Splits of one development: the head form and any number of pattern forms.

    All forms share one h-development tree, so asking for many patterns costs
    little more than asking for one.
    """

    def __init__(self, dev: DevProof):
        self.dev = dev
        self._tree = _generalised(dev, {})

    def head(self) -> HSplit:
        steps, internal = self._tree.head()
        return HSplit(tuple(steps), internal.source, internal)

    def for_pattern(self, p: Pattern) -> HSplit:
        steps, internal = self._tree.for_pattern(p)
        return HSplit(tuple(steps), internal.source, internal, p)
