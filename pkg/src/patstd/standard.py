"""Postponement, bifurcation, standardisation and the standard-sequence grammar.

The pipeline mirrors the constructive argument: every development in a chain
is split into head steps and an internal development, head steps are moved to
the front by postponement, and the remaining internal chain is standardised
by recursion on the shape of its final term.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import ClassVar, Optional, Sequence

from .development import (
    DAbs,
    DApp,
    DBeta,
    DRefl,
    IAbs,
    IApp1,
    IApp2,
    IRefl,
    PCDataNo1,
    PCDataNo2,
    PConstant,
    PNoCData,
    ProofError,
    SubstDevProof,
    apart,
    check_dev,
    check_int,
    check_pint,
    erase,
    h_split,
    match_after_dev,
    rename_dev,
    subst_apply_dev,
)
from .head import head_step, head_step_record, pattern_head_step_record
from .matching import match_raw
from .reduction import Dir, Position, PositionError, StepRecord, show_position, subterm_at
from .syntax import (
    Abs,
    App,
    Const,
    Pattern,
    Term,
    Var,
    align_abs,
    alpha_eq,
    apply_subst,
    binder_correspondence,
    freshen,
)


# -- postponement -----------------------------------------------------------


def _lift_fun(step: StepRecord, arg: Term) -> StepRecord:
    return StepRecord(App(step.source, arg), (Dir.FUN,) + step.position, App(step.result, arg))


def _lift_arg(step: StepRecord, fun: Term) -> StepRecord:
    return StepRecord(App(fun, step.source), (Dir.ARG,) + step.position, App(fun, step.result))


def _same_step(given: StepRecord, expected: Optional[StepRecord], what: str) -> None:
    if expected is None:
        raise ProofError(f"{given.source} has no {what} step")
    if not alpha_eq(given.source, expected.source) or not alpha_eq(given.result, expected.result):
        raise ProofError(f"not the {what} step of {expected.source}: expected {expected.result}, got {given.result}")
    if given.position != expected.position:
        raise ProofError(f"{what} step is at {show_position(expected.position)}, not {show_position(given.position)}")


def postpone(intdev, step: StepRecord) -> tuple[StepRecord, object]:
    """From ``M |>int N ->h R`` build ``M ->h N'`` and a development ``N' |> R``."""
    check_int(intdev)
    if not alpha_eq(step.source, intdev.target):
        raise ProofError(f"head step starts at {step.source}, internal development ends at {intdev.target}")
    _same_step(step, head_step_record(step.source), "head")
    return _postpone(intdev)


def postpone_pattern(p: Pattern, pint, step: StepRecord) -> tuple[StepRecord, object]:
    """From ``M |>int_p N ->p R`` build ``M ->p N'`` and a development ``N' |> R``."""
    check_pint(pint)
    if pint.pattern != p:
        raise ProofError(f"internal development is relative to {pint.pattern}, not {p}")
    if not alpha_eq(step.source, pint.target):
        raise ProofError(f"pattern step starts at {step.source}, internal development ends at {pint.target}")
    _same_step(step, pattern_head_step_record(p, step.source), "pattern-head")
    return _postpone_pattern(pint)


def _postpone(intdev):
    match intdev:
        case IRefl(term):
            record = head_step_record(term)
            if record is None:
                raise ProofError(f"{term} has no head step")
            return record, DRefl(record.result)
        case IApp1(fun, arg):
            record, dev = _postpone(fun)
            return _lift_fun(record, arg.source), DApp(dev, arg)
        case IApp2(binder, body, arg):
            source = intdev.source
            nu = match_raw(binder, arg.source)
            if nu is None:
                record, dev = _postpone_pattern(arg)
                fun = source.fun
                return _lift_arg(record, fun), DApp(DAbs(binder, body), dev)
            _, sd = match_after_dev(erase(arg), binder, nu)
            record = StepRecord(source, (), apply_subst(nu, body.source))
            return record, subst_apply_dev(sd, body)
        case IAbs():
            raise ProofError("an abstraction has no head step")
    raise ProofError(f"not an internal development proof: {intdev!r}")


def _postpone_pattern(pint):
    match pint:
        case PConstant(_, inner) | PNoCData(_, inner):
            return _postpone(inner)
        case PCDataNo1(_, left, right):
            record, dev = _postpone_pattern(left)
            return _lift_fun(record, right.source), DApp(dev, right)
        case PCDataNo2(_, left, right):
            record, dev = _postpone_pattern(right)
            return _lift_arg(record, left.source), DApp(left, dev)
    raise ProofError(f"{pint.rule}: the developed term has no pattern-head step")


def commute_head(intdev, step: StepRecord) -> tuple[list[StepRecord], object]:
    """From ``M |>int N ->h R`` build ``M ->h* N'`` and ``N' |>int R``."""
    record, dev = postpone(intdev, step)
    split = h_split(dev)
    return [record, *split.steps], split.internal


# -- bifurcation ------------------------------------------------------------


@dataclass(frozen=True)
class Bifurcation:
    """``source ->h* mid`` followed by the internal developments ``internals`` to the target."""

    head_steps: tuple
    mid: Term
    internals: tuple


def check_chain(chain: Sequence, source: Optional[Term] = None) -> None:
    for dev in chain:
        check_dev(dev)
    if source is not None and chain and not alpha_eq(source, chain[0].source):
        raise ProofError(f"chain starts at {chain[0].source}, expected {source}")
    for a, b in zip(chain, chain[1:]):
        if not alpha_eq(a.target, b.source):
            raise ProofError(f"chain breaks: {a.target} is followed by a development of {b.source}")


def bifurcate(chain: Sequence, source: Optional[Term] = None) -> Bifurcation:
    """Split ``M |> ... |> N`` into ``M ->h* R`` and ``R |>int ... |>int N``."""
    chain = list(chain)
    if not chain and source is None:
        raise ValueError("an empty chain needs an explicit source term")
    check_chain(chain, source)
    return _bifurcate(chain, source)


def _bifurcate(chain, source):
    if not chain:
        return Bifurcation((), source, ())
    first = h_split(chain[0])
    rest = _bifurcate(chain[1:], chain[0].target)
    steps = list(first.steps)
    internal = first.internal
    for step in rest.head_steps:
        more, internal = commute_head(internal, step)
        steps += more
    return Bifurcation(tuple(steps), internal.source, (internal, *rest.internals))


# -- standard sequences -----------------------------------------------------


@dataclass(frozen=True)
class StdVar:
    term: Term
    rule: ClassVar[str] = "StdVar"

    @property
    def terms(self) -> tuple:
        return (self.term,)


@dataclass(frozen=True)
class StdConst:
    term: Term
    rule: ClassVar[str] = "StdConst"

    @property
    def terms(self) -> tuple:
        return (self.term,)


@dataclass(frozen=True)
class StdHead:
    first: Term
    rest: "StdProof"
    rule: ClassVar[str] = "StdHead"

    @cached_property
    def terms(self) -> tuple:
        return (self.first, *self.rest.terms)


@dataclass(frozen=True)
class StdAbs:
    binder: Pattern
    body: "StdProof"
    rule: ClassVar[str] = "StdAbs"

    @cached_property
    def terms(self) -> tuple:
        return tuple(Abs(self.binder, t) for t in self.body.terms)


@dataclass(frozen=True)
class StdApp:
    left: "StdProof"
    right: "StdProof"
    rule: ClassVar[str] = "StdApp"

    @cached_property
    def terms(self) -> tuple:
        ms, ns = self.left.terms, self.right.terms
        return tuple(App(m, ns[0]) for m in ms) + tuple(App(ms[-1], n) for n in ns[1:])


StdProof = StdVar | StdConst | StdHead | StdAbs | StdApp


def check_std_proof(proof) -> None:
    """Raise :class:`ProofError` unless every ``StdHead`` node is a head step and leaves are atoms."""
    match proof:
        case StdVar(term):
            if not isinstance(term, Var):
                raise ProofError(f"StdVar on {term}")
        case StdConst(term):
            if not isinstance(term, Const):
                raise ProofError(f"StdConst on {term}")
        case StdHead(first, rest):
            found = head_step(first)
            if found is None or not alpha_eq(found[0], rest.terms[0]):
                raise ProofError(f"{first} does not head-step to {rest.terms[0]}")
            check_std_proof(rest)
        case StdAbs(_, body):
            check_std_proof(body)
        case StdApp(left, right):
            check_std_proof(left)
            check_std_proof(right)
        case _:
            raise ProofError(f"not a standard sequence proof: {proof!r}")


@dataclass(frozen=True)
class StdSequence:
    terms: tuple
    proof: object


def standardise(source: Term, chain: Sequence) -> StdSequence:
    """A standard reduction sequence from ``source`` to the end of ``chain``."""
    chain = list(chain)
    check_chain(chain, source)
    proof = _standardise(source, chain)
    return StdSequence(proof.terms, proof)


def _standardise(source: Term, chain: list):
    split = _bifurcate(chain, source)
    proof = _std_internal(split.mid, list(split.internals))
    for step in reversed(split.head_steps):
        proof = StdHead(step.source, proof)
    return proof


def _std_internal(start: Term, internals: list):
    """Standardise ``start |>int ... |>int N`` by recursion on the shape of ``N``."""
    match start:
        case Var():
            return StdVar(start)
        case Const():
            return StdConst(start)
        case Abs(binder, body):
            devs = [_abs_body_dev(i, binder, start) for i in internals]
            return StdAbs(binder, _standardise(body, devs))
        case App(fun, arg):
            lefts, rights = [], []
            for i in internals:
                left, right = _app_parts(i)
                lefts.append(left)
                rights.append(right)
            left_proof = _standardise(fun, lefts)
            right_proof = _standardise(arg, rights)
            return StdApp(left_proof, right_proof)
    raise TypeError(start)


def _abs_body_dev(intdev, binder: Pattern, start: Abs):
    match intdev:
        case IRefl(Abs() as term):
            own, body = term.binder, DRefl(term.body)
        case IAbs(own, body):
            pass
        case _:
            raise ProofError(f"{intdev.rule} does not relate abstractions")
    if own == binder:
        return body
    corr = binder_correspondence(binder, own)
    if corr is None or binder.fv & (intdev.source.fv | start.fv):
        raise ProofError("abstractions in the chain do not share a binder shape")
    return rename_dev(body, {y: x for y, x in corr.items() if x != y})


def _app_parts(intdev):
    match intdev:
        case IRefl(App(fun, arg)):
            return DRefl(fun), DRefl(arg)
        case IApp1(fun, arg):
            return erase(fun), arg
        case IApp2(binder, body, arg):
            return DAbs(binder, body), erase(arg)
    raise ProofError(f"{intdev.rule} does not relate applications")


# -- single steps as developments -------------------------------------------


def step_to_development(term: Term, pos: Position):
    """The development contracting exactly the redex at ``pos``."""
    if not pos:
        if not (isinstance(term, App) and isinstance(term.fun, Abs)):
            raise PositionError(f"no redex at the root of {term}")
        fun = apart(term.fun, term.arg.fv)
        theta = match_raw(fun.binder, term.arg)
        if theta is None:
            raise PositionError(f"{term.arg} does not match {fun.binder}")
        bindings = SubstDevProof.of({x: DRefl(t) for x, t in theta.items()})
        return DBeta(fun.binder, DRefl(fun.body), term.arg, bindings)
    d, rest = pos[0], pos[1:]
    if d is Dir.FUN and isinstance(term, App):
        return DApp(step_to_development(term.fun, rest), DRefl(term.arg))
    if d is Dir.ARG and isinstance(term, App):
        return DApp(DRefl(term.fun), step_to_development(term.arg, rest))
    if d is Dir.BODY and isinstance(term, Abs):
        return DAbs(term.binder, step_to_development(term.body, rest))
    subterm_at(term, pos)  # raises for an invalid path
    raise PositionError(f"position {show_position(pos)} is not valid here")


def steps_to_chain(term: Term, positions: Sequence[Position]) -> list:
    chain = []
    for pos in positions:
        dev = step_to_development(term, pos)
        chain.append(dev)
        term = dev.target
    return chain


def standardise_reduction(term: Term, positions: Sequence[Position]) -> StdSequence:
    """Standardise the reduction of ``term`` contracting the redexes at ``positions`` in turn."""
    return standardise(term, steps_to_chain(term, positions))


# -- recognising standard sequences -----------------------------------------


def check_standard(terms: Sequence[Term]):
    """A derivation of ``terms`` in the standard-sequence grammar, or ``None``."""
    terms = tuple(terms)
    if not terms:
        raise ValueError("a reduction sequence has at least one term")
    return _check(terms)


@lru_cache(maxsize=1 << 16)
def _check(terms: tuple):
    first = terms[0]
    if len(terms) > 1:
        found = head_step(first)
        if found is not None and alpha_eq(found[0], terms[1]):
            rest = _check(terms[1:])
            if rest is not None:
                return StdHead(first, rest)
    if len(terms) == 1 and isinstance(first, Var):
        return StdVar(first)
    if len(terms) == 1 and isinstance(first, Const):
        return StdConst(first)
    if all(isinstance(t, Abs) for t in terms):
        return _check_abs(terms)
    if all(isinstance(t, App) for t in terms):
        return _check_app(terms)
    return None


def _check_abs(terms: tuple):
    binder = terms[0].binder
    free = frozenset().union(*(t.fv for t in terms))
    if binder.fv & free:
        binder, _ = freshen(binder, free)
    bodies = []
    for t in terms:
        body = align_abs(t, binder)
        if body is None:
            return None
        bodies.append(body)
    inner = _check(tuple(bodies))
    return StdAbs(binder, inner) if inner is not None else None


def _check_app(terms: tuple):
    n = len(terms)
    for j in range(1, n + 1):
        # terms[:j] share the argument of terms[0]; terms[j-1:] share the function of terms[j-1]
        if not all(alpha_eq(terms[i].arg, terms[0].arg) for i in range(1, j)):
            break
        pivot = terms[j - 1].fun
        if not all(alpha_eq(terms[i].fun, pivot) for i in range(j, n)):
            continue
        left = _check(tuple(t.fun for t in terms[:j]))
        if left is None:
            continue
        right = _check(tuple(t.arg for t in terms[j - 1:]))
        if right is not None:
            return StdApp(left, right)
    return None
